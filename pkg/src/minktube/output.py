"""Report serialization: canonical JSON, delimited traces, figures.

Everything written here is a pure function of its inputs: JSON is
dumped with sorted keys, CSV floats use 17-significant-digit rendering
(lossless for doubles), and figures are rendered through the Agg
backend with fixed metadata, so identical inputs produce byte-identical
files.
"""

from __future__ import annotations

import json
import os
from typing import Any, Iterable, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

TRACE_HEADER = "eps,value"


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def dumps_report(report: dict[str, Any]) -> str:
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_report(path: str, report: dict[str, Any]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_report(report))


def write_trace_csv(path: str, rows: Iterable[tuple[float, float]]) -> None:
    lines = [TRACE_HEADER]
    lines.extend(f"{fmt_float(e)},{fmt_float(v)}" for e, v in rows)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def ensure_outdir(path: str) -> None:
    os.makedirs(path, exist_ok=True)


_FIG_KW = dict(figsize=(6.0, 4.0), dpi=120)
_SAVE_KW = dict(metadata={"Software": None})


def render_trace_figure(
    path: str,
    *,
    title: str,
    xlabel: str,
    ylabel: str,
    traces: Sequence[tuple[str, Sequence[float], Sequence[float]]],
    hlines: Sequence[tuple[str, float]] = (),
    logy: bool = False,
) -> None:
    """Semilog-x trace plot (optionally log-y), one line per trace."""
    fig, ax = plt.subplots(**_FIG_KW)
    for label, xs, ys in traces:
        ax.plot(xs, ys, marker="o", markersize=2.5, linewidth=1.0, label=label)
    for label, y in hlines:
        ax.axhline(y, linestyle="--", linewidth=0.8, color="gray")
        ax.annotate(label, (0.02, y), xycoords=("axes fraction", "data"), fontsize=7)
    ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title, fontsize=10)
    if traces:
        ax.legend(fontsize=8)
    ax.grid(True, which="both", alpha=0.25)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def render_error_figure(
    path: str,
    *,
    title: str,
    labels: Sequence[str],
    errors: Sequence[float],
    tols: Sequence[float],
) -> None:
    """Per-check error magnitudes against their tolerances."""
    fig, ax = plt.subplots(**_FIG_KW)
    idx = range(len(labels))
    floor = 1e-18
    ax.semilogy(idx, [max(abs(e), floor) for e in errors], "o", markersize=3,
                label="achieved error")
    ax.semilogy(idx, tols, "_", markersize=7, color="red", label="tolerance")
    ax.set_xlabel("check index")
    ax.set_ylabel("absolute error")
    ax.set_title(title, fontsize=10)
    ax.legend(fontsize=8)
    ax.grid(True, which="both", alpha=0.25)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
