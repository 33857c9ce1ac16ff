"""Command-line interface.

Commands: ``dim``, ``content``, ``invariance``, ``sandwich``,
``product``, ``extremality``, ``selftest``.  Every command prints a JSON
report to stdout; with ``--out DIR`` it also writes the report, trace
CSVs (header ``eps,value``, 17-significant-digit floats) and rendered
figures into the directory.  Reports embed the fully resolved
configuration, and identical (config, seed) inputs produce byte-identical
outputs.

Exit codes: 0 = checks passed, 1 = operational error (bad config, I/O),
2 = an assertion-style check failed.
"""

from __future__ import annotations

import argparse
import sys
from typing import Any

from .ballvol import gamma_ball
from .config import ExperimentConfig, default_config, load_config
from .errors import MinktubeError
from .estimate import (
    VERDICT_MEASURABLE,
    VERDICT_NONDEGENERATE,
    box_dimension_fit,
    content_estimate,
)
from .invariance import (
    coarse_bounds_check,
    embedding_report,
    extremality_check,
    product_inequality_check,
    sandwich_check,
)
from .output import (
    dumps_report,
    ensure_outdir,
    render_error_figure,
    render_trace_figure,
    write_report,
    write_trace_csv,
)
from .selftest import run_selftest
from .setspec import realize
from .tube import lift_tube

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CHECK_FAILED = 2


def _add_common(p: argparse.ArgumentParser, *, want_set=False, want_s=False):
    p.add_argument("--config", help="experiment configuration file (YAML)")
    p.add_argument("--out", help="directory for reports, traces and figures")
    p.add_argument("--seed", type=int, help="override the configured seed")
    p.add_argument("--tol", type=float, help="override the command's tolerance")
    if want_set:
        p.add_argument("--set", required=True, dest="set_name", help="configured set name")
    if want_s:
        p.add_argument("--s", required=True, type=float, help="content exponent s")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minktube",
        description=(
            "Tube volumes, box dimensions and normalized Minkowski contents "
            "of bounded sets, with ambient-embedding invariance checks."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dim", help="fit the box dimension in R^N and R^(N+1)")
    _add_common(p, want_set=True)

    p = sub.add_parser("content", help="windowed content estimate of one set")
    _add_common(p, want_set=True, want_s=True)

    p = sub.add_parser(
        "invariance", help="normalized-content embedding report plus ordering check"
    )
    _add_common(p, want_set=True, want_s=True)

    p = sub.add_parser("sandwich", help="content ordering and coarse-constant bounds")
    _add_common(p, want_set=True, want_s=True)

    p = sub.add_parser("product", help="Cartesian-product content bounds")
    _add_common(p, want_s=True)
    p.add_argument("--set", required=True, dest="set_name", help="first factor set")
    p.add_argument("--set-b", required=True, dest="set_b", help="second factor set")
    p.add_argument("--r", required=True, type=float, help="content exponent of the second factor")

    p = sub.add_parser("extremality", help="embedding ratios over a family of sets")
    _add_common(p, want_s=True)
    p.add_argument(
        "--sets", required=True, help="comma-separated configured set names"
    )

    p = sub.add_parser("selftest", help="quadrature and identity self-checks")
    _add_common(p)

    return parser


def _load(args) -> ExperimentConfig:
    config = load_config(args.config) if args.config else default_config()
    if args.seed is not None:
        if not (0 <= args.seed < 2**64):
            raise MinktubeError(f"--seed must fit in 64 bits, got {args.seed}")
        config.seed = args.seed
    return config


def _base_report(config: ExperimentConfig, command: str, **params: Any) -> dict[str, Any]:
    return {"command": command, "params": params, "config": config.to_dict()}


def _emit(report: dict[str, Any], args, filename: str) -> None:
    sys.stdout.write(dumps_report(report))
    if args.out:
        ensure_outdir(args.out)
        write_report(f"{args.out}/{filename}.json", report)


def _norm_traces(real, s, sched, quad_tol, window_decades):
    """Normalized q traces for the base and lifted tubes over the window."""
    base = real.tube
    lifted = lift_tube(base, quad_tol)
    est_n = content_estimate(base, s, sched, window_decades)
    est_n1 = content_estimate(lifted, s, sched, window_decades)
    g_n = gamma_ball(base.ambient_n - s)
    g_n1 = gamma_ball(base.ambient_n + 1 - s)
    t_n = [(e, q / g_n) for e, q in est_n.window_trace]
    t_n1 = [(e, q / g_n1) for e, q in est_n1.window_trace]
    return t_n, t_n1


def _fmt_tag(x: float) -> str:
    return ("%g" % x).replace("-", "m")


def cmd_dim(args) -> int:
    config = _load(args)
    spec = config.spec(args.set_name)
    real = realize(spec, quad_tol=config.tolerances.quadrature)
    sched = config.schedule_for(args.set_name, real)
    fit_n = box_dimension_fit(real.tube, sched)
    lifted = lift_tube(real.tube, config.tolerances.quadrature)
    fit_n1 = box_dimension_fit(lifted, sched)
    gap = abs(fit_n.fitted_d - fit_n1.fitted_d)
    combined_ci = fit_n.ci_halfwidth + fit_n1.ci_halfwidth
    agree = gap <= combined_ci

    report = _base_report(config, "dim", set=args.set_name)
    report["schedule"] = [float(e) for e in sched.values]
    report["result"] = {
        "base": {
            "ambient_n": fit_n.ambient_n,
            "fitted_d": fit_n.fitted_d,
            "ci_halfwidth": fit_n.ci_halfwidth,
            "residual": fit_n.residual,
        },
        "lifted": {
            "ambient_n": fit_n1.ambient_n,
            "fitted_d": fit_n1.fitted_d,
            "ci_halfwidth": fit_n1.ci_halfwidth,
            "residual": fit_n1.residual,
        },
        "dimension_gap": gap,
        "combined_ci": combined_ci,
        "agree": agree,
        "notes": list(real.notes),
    }
    name = f"dim_{args.set_name}"
    _emit(report, args, name)
    if args.out:
        base_rows = [(float(e), real.tube.eval(float(e))) for e in sched.values]
        lift_rows = [(float(e), lifted.eval(float(e))) for e in sched.values]
        write_trace_csv(f"{args.out}/{name}_base_trace.csv", base_rows)
        write_trace_csv(f"{args.out}/{name}_lifted_trace.csv", lift_rows)
        render_trace_figure(
            f"{args.out}/{name}.png",
            title=(
                f"{args.set_name}: tube volume, fitted d = {fit_n.fitted_d:.4f} (R^N) / "
                f"{fit_n1.fitted_d:.4f} (R^N+1)"
            ),
            xlabel="eps",
            ylabel="tube volume",
            traces=[
                (f"R^{fit_n.ambient_n}", [r[0] for r in base_rows], [r[1] for r in base_rows]),
                (f"R^{fit_n1.ambient_n}", [r[0] for r in lift_rows], [r[1] for r in lift_rows]),
            ],
            logy=True,
        )
    return EXIT_OK if agree else EXIT_CHECK_FAILED


def cmd_content(args) -> int:
    config = _load(args)
    spec = config.spec(args.set_name)
    real = realize(spec, quad_tol=config.tolerances.quadrature)
    sched = config.schedule_for(args.set_name, real)
    rel_tol = args.tol if args.tol is not None else config.tolerances.measurability
    est = content_estimate(
        real.tube,
        args.s,
        sched,
        config.window_decades,
        measurability_rel_tol=rel_tol,
    )
    report = _base_report(config, "content", set=args.set_name, s=args.s)
    report["schedule"] = [float(e) for e in sched.values]
    report["result"] = {
        "ambient_n": est.ambient_n,
        "s": est.s,
        "lower": est.lower,
        "upper": est.upper,
        "normalized_lower": est.normalized_lower,
        "normalized_upper": est.normalized_upper,
        "verdict": est.verdict,
        "window_decades": est.window_decades,
        "truncation_eps": real.truncation_eps,
        "notes": list(real.notes),
    }
    name = f"content_{args.set_name}_s{_fmt_tag(args.s)}"
    _emit(report, args, name)
    if args.out:
        write_trace_csv(f"{args.out}/{name}_trace.csv", est.window_trace)
        render_trace_figure(
            f"{args.out}/{name}.png",
            title=f"{args.set_name}: q(eps) = volume/eps^(N-s), s = {args.s:g} [{est.verdict}]",
            xlabel="eps",
            ylabel="q(eps)",
            traces=[("window q", [p[0] for p in est.window_trace],
                     [p[1] for p in est.window_trace])],
            hlines=[("lower", est.lower), ("upper", est.upper)],
        )
    ok = est.verdict in (VERDICT_MEASURABLE, VERDICT_NONDEGENERATE)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_invariance(args) -> int:
    config = _load(args)
    spec = config.spec(args.set_name)
    real = realize(spec, quad_tol=config.tolerances.quadrature)
    sched = config.schedule_for(args.set_name, real)
    tol = args.tol if args.tol is not None else config.tolerances.invariance
    emb = embedding_report(
        spec,
        args.s,
        sched,
        tol,
        quad_tol=config.tolerances.quadrature,
        window_decades=config.window_decades,
        measurability_rel_tol=config.tolerances.measurability,
    )
    sand = sandwich_check(
        spec,
        args.s,
        sched,
        quad_tol=config.tolerances.quadrature,
        window_decades=config.window_decades,
        measurability_rel_tol=config.tolerances.measurability,
    )
    report = _base_report(config, "invariance", set=args.set_name, s=args.s)
    report["schedule"] = [float(e) for e in sched.values]
    report["result"] = {"embedding": emb.to_dict(), "sandwich": sand.to_dict()}
    name = f"invariance_{args.set_name}_s{_fmt_tag(args.s)}"
    _emit(report, args, name)
    if args.out:
        t_n, t_n1 = _norm_traces(
            real, args.s, sched, config.tolerances.quadrature, config.window_decades
        )
        write_trace_csv(f"{args.out}/{name}_base_trace.csv", t_n)
        write_trace_csv(f"{args.out}/{name}_lifted_trace.csv", t_n1)
        render_trace_figure(
            f"{args.out}/{name}.png",
            title=(
                f"{args.set_name}: normalized q, s = {args.s:g} "
                f"(ratio {emb.normalized_ratio:.6f}, {emb.verdict})"
            ),
            xlabel="eps",
            ylabel="q(eps) / ball_vol(N-s)",
            traces=[
                (f"R^{emb.base_ambient}", [p[0] for p in t_n], [p[1] for p in t_n]),
                (f"R^{emb.base_ambient + 1}", [p[0] for p in t_n1], [p[1] for p in t_n1]),
            ],
        )
    return EXIT_OK if (emb.passed and sand.ok) else EXIT_CHECK_FAILED


def cmd_sandwich(args) -> int:
    config = _load(args)
    spec = config.spec(args.set_name)
    real = realize(spec, quad_tol=config.tolerances.quadrature)
    sched = config.schedule_for(args.set_name, real)
    sand = sandwich_check(
        spec,
        args.s,
        sched,
        quad_tol=config.tolerances.quadrature,
        window_decades=config.window_decades,
        measurability_rel_tol=config.tolerances.measurability,
    )
    coarse = coarse_bounds_check(
        spec,
        args.s,
        sched,
        quad_tol=config.tolerances.quadrature,
        window_decades=config.window_decades,
    )
    report = _base_report(config, "sandwich", set=args.set_name, s=args.s)
    report["schedule"] = [float(e) for e in sched.values]
    report["result"] = {"sandwich": sand.to_dict(), "coarse_bounds": coarse.to_dict()}
    name = f"sandwich_{args.set_name}_s{_fmt_tag(args.s)}"
    _emit(report, args, name)
    if args.out:
        t_n, t_n1 = _norm_traces(
            real, args.s, sched, config.tolerances.quadrature, config.window_decades
        )
        write_trace_csv(f"{args.out}/{name}_base_trace.csv", t_n)
        write_trace_csv(f"{args.out}/{name}_lifted_trace.csv", t_n1)
        low_n, low_n1, up_n1, up_n = sand.normalized
        render_trace_figure(
            f"{args.out}/{name}.png",
            title=f"{args.set_name}: normalized ordering, s = {args.s:g} "
            f"({'ok' if sand.ok else 'VIOLATED'})",
            xlabel="eps",
            ylabel="q(eps) / ball_vol(N-s)",
            traces=[
                (f"R^{sand.base_ambient}", [p[0] for p in t_n], [p[1] for p in t_n]),
                (f"R^{sand.base_ambient + 1}", [p[0] for p in t_n1], [p[1] for p in t_n1]),
            ],
            hlines=[
                ("lower base", low_n),
                ("lower lifted", low_n1),
                ("upper lifted", up_n1),
                ("upper base", up_n),
            ],
        )
    return EXIT_OK if (sand.ok and coarse.ok) else EXIT_CHECK_FAILED


def cmd_product(args) -> int:
    config = _load(args)
    spec_a = config.spec(args.set_name)
    spec_b = config.spec(args.set_b)
    real_a = realize(spec_a, quad_tol=config.tolerances.quadrature)
    sched = config.schedule_for(args.set_name, real_a)
    rep = product_inequality_check(
        spec_a,
        spec_b,
        args.s,
        args.r,
        sched,
        quad_tol=config.tolerances.quadrature,
        window_decades=config.window_decades,
    )
    report = _base_report(
        config, "product", set=args.set_name, set_b=args.set_b, s=args.s, r=args.r
    )
    report["schedule"] = [float(e) for e in sched.values]
    report["result"] = rep.to_dict()
    name = f"product_{args.set_name}_x_{args.set_b}_s{_fmt_tag(args.s)}_r{_fmt_tag(args.r)}"
    _emit(report, args, name)
    if args.out:
        render_trace_figure(
            f"{args.out}/{name}.png",
            title=f"{args.set_name} x {args.set_b}: product content bounds "
            f"({'ok' if rep.ok else 'VIOLATED'})",
            xlabel="eps",
            ylabel="content",
            traces=[],
            hlines=[
                ("lower bound", rep.bounds[0]),
                ("product lower", rep.product_raw[0]),
                ("product upper", rep.product_raw[1]),
                ("upper bound", rep.bounds[1]),
            ],
        )
    return EXIT_OK if rep.ok else EXIT_CHECK_FAILED


def cmd_extremality(args) -> int:
    config = _load(args)
    names = [n.strip() for n in args.sets.split(",") if n.strip()]
    if not names:
        raise MinktubeError("no set names given to --sets")
    specs = [config.spec(n) for n in names]
    scheds = {
        i: config.schedule_for(n, realize(s, quad_tol=config.tolerances.quadrature))
        for i, (n, s) in enumerate(zip(names, specs))
    }
    tol = args.tol if args.tol is not None else config.tolerances.invariance
    rep = extremality_check(
        specs,
        args.s,
        scheds,
        tol,
        quad_tol=config.tolerances.quadrature,
        window_decades=config.window_decades,
    )
    report = _base_report(config, "extremality", sets=names, s=args.s)
    report["result"] = rep.to_dict()
    name = f"extremality_s{_fmt_tag(args.s)}"
    _emit(report, args, name)
    if args.out:
        g = rep.entries[0].gamma_ratio_value if rep.entries else 1.0
        render_error_figure(
            f"{args.out}/{name}.png",
            title=f"embedding ratios vs ball-volume ratio {g:.6f}",
            labels=[n for n in names],
            errors=[e.ratio_lower - e.gamma_ratio_value for e in rep.entries],
            tols=[rep.tolerance] * len(rep.entries),
        )
    return EXIT_OK if rep.ok else EXIT_CHECK_FAILED


def cmd_selftest(args) -> int:
    config = _load(args)
    rep = run_selftest()
    report = _base_report(config, "selftest")
    report["result"] = rep.to_dict()
    sys.stdout.write(rep.table() + "\n")
    sys.stdout.write(dumps_report(report))
    if args.out:
        ensure_outdir(args.out)
        write_report(f"{args.out}/selftest.json", report)
        render_error_figure(
            f"{args.out}/selftest.png",
            title="selftest: achieved errors vs tolerances",
            labels=[r.label for r in rep.rows],
            errors=[r.error for r in rep.rows],
            tols=[r.tol for r in rep.rows],
        )
    if not rep.ok:
        for r in rep.failures:
            sys.stderr.write(f"selftest failure: {r.block} {r.label}\n")
        return EXIT_CHECK_FAILED
    return EXIT_OK


_COMMANDS = {
    "dim": cmd_dim,
    "content": cmd_content,
    "invariance": cmd_invariance,
    "sandwich": cmd_sandwich,
    "product": cmd_product,
    "extremality": cmd_extremality,
    "selftest": cmd_selftest,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except MinktubeError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR
    except OSError as exc:
        sys.stderr.write(f"i/o error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
