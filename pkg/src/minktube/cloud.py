"""Approximate tube volumes for finite point clouds in R^N.

Two backends cross-validate each other:

* Monte Carlo — uniform samples in the eps-padded bounding box, hit
  testing against the cloud through a uniform spatial hash with cell
  size eps (a query inspects the 3^N neighboring cells, which is
  sufficient for the <= eps predicate).  The sample stream is generated
  by a counter-based generator keyed by the seed, so results are a pure
  function of (cloud, eps, n_samples, seed) regardless of how the work
  is partitioned.

* Grid — the padded box is rasterized, the squared Euclidean distance
  transform from the (cell-snapped) cloud is computed dimension by
  dimension with the lower-envelope-of-parabolas sweep, and cells with
  distance <= eps are counted.  Snapping and cell extent each contribute
  at most half a cell diagonal, so counting against eps -/+ one full
  diagonal brackets the true volume rigorously.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ResolutionError, UnsupportedError
from .tube import TubeFunction

#: Largest ambient dimension served by the Monte Carlo backend.
MC_MAX_DIMENSION = 6
#: Cell budget for the grid backend.
GRID_CELL_BUDGET = 10**8


@dataclass(frozen=True)
class PointCloud:
    """Finite list of points in R^N, stored as an (n, N) array."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] == 0:
            raise DomainError("PointCloud needs a nonempty (n, N) array")
        if not np.all(np.isfinite(pts)):
            raise DomainError("PointCloud coordinates must be finite")
        object.__setattr__(self, "points", pts)

    @property
    def ambient_n(self) -> int:
        return int(self.points.shape[1])

    @property
    def size(self) -> int:
        return int(self.points.shape[0])


def _draw_unit_samples(n_samples: int, dim: int, seed: int) -> np.ndarray:
    """Uniform samples in [0, 1)^dim from a counter-based stream."""
    rng = np.random.Generator(np.random.Philox(key=seed))
    return rng.random((n_samples, dim))


def _hash_hits(
    points: np.ndarray, samples: np.ndarray, eps: float
) -> np.ndarray:
    """Boolean per-sample mask: within Euclidean eps of some point."""
    dim = points.shape[1]
    point_cells: dict[tuple[int, ...], list[int]] = {}
    pcell = np.floor(points / eps).astype(np.int64)
    for i, c in enumerate(map(tuple, pcell)):
        point_cells.setdefault(c, []).append(i)
    point_cells_arr = {k: np.asarray(v) for k, v in point_cells.items()}
    offsets = list(itertools.product((-1, 0, 1), repeat=dim))

    scell = np.floor(samples / eps).astype(np.int64)
    base = scell.min(axis=0)
    rel = scell - base
    dims = rel.max(axis=0) + 1
    keys = np.ravel_multi_index(tuple(rel.T), tuple(int(d) for d in dims))
    uniq, inverse = np.unique(keys, return_inverse=True)
    order = np.argsort(inverse, kind="stable")
    bounds = np.searchsorted(inverse[order], np.arange(uniq.size + 1))

    hits = np.zeros(samples.shape[0], dtype=bool)
    eps2 = eps * eps
    for u in range(uniq.size):
        members = order[bounds[u] : bounds[u + 1]]
        cell = tuple(
            int(v) for v in np.unravel_index(uniq[u], tuple(int(d) for d in dims))
        )
        cand: list[np.ndarray] = []
        for off in offsets:
            key = tuple(base[d] + cell[d] + off[d] for d in range(dim))
            got = point_cells_arr.get(key)
            if got is not None:
                cand.append(got)
        if not cand:
            continue
        cidx = np.concatenate(cand)
        diff = samples[members][:, None, :] - points[cidx][None, :, :]
        d2 = np.einsum("ijk,ijk->ij", diff, diff)
        hits[members] = d2.min(axis=1) <= eps2
    return hits


def _mc_estimate(
    points: np.ndarray, unit: np.ndarray, eps: float
) -> tuple[float, float]:
    lo = points.min(axis=0) - eps
    hi = points.max(axis=0) + eps
    vol = float(np.prod(hi - lo))
    samples = lo + unit * (hi - lo)
    hits = _hash_hits(points, samples, eps)
    n = unit.shape[0]
    p = hits.sum() / n
    stderr = vol * math.sqrt(p * (1.0 - p) / n)
    return vol * p, stderr


def mc_tube_measure(
    cloud: PointCloud, eps: float, n_samples: int, seed: int
) -> tuple[float, float]:
    """Monte Carlo tube volume estimate and its binomial standard error.

    Deterministic for a fixed seed.
    """
    if cloud.ambient_n > MC_MAX_DIMENSION:
        raise UnsupportedError(
            f"Monte Carlo backend supports N <= {MC_MAX_DIMENSION}, "
            f"got N = {cloud.ambient_n}"
        )
    if n_samples < 1000:
        raise DomainError(f"n_samples must be >= 1000, got {n_samples}")
    if not math.isfinite(eps) or eps <= 0.0:
        raise DomainError(f"eps must be positive, got {eps!r}")
    unit = _draw_unit_samples(n_samples, cloud.ambient_n, seed)
    return _mc_estimate(cloud.points, unit, eps)


def mc_tube(cloud: PointCloud, n_samples: int, seed: int) -> TubeFunction:
    """Monte Carlo tube function with common random numbers across eps.

    The same underlying uniform stream is rescaled to each eps-padded
    box, so ratio statistics along an epsilon schedule are not polluted
    by independent sampling noise.
    """
    if cloud.ambient_n > MC_MAX_DIMENSION:
        raise UnsupportedError(
            f"Monte Carlo backend supports N <= {MC_MAX_DIMENSION}, "
            f"got N = {cloud.ambient_n}"
        )
    if n_samples < 1000:
        raise DomainError(f"n_samples must be >= 1000, got {n_samples}")
    unit = _draw_unit_samples(n_samples, cloud.ambient_n, seed)

    def fn(eps: float) -> tuple[float, float]:
        if eps <= 0.0:
            raise DomainError(f"eps must be positive, got {eps!r}")
        return _mc_estimate(cloud.points, unit, eps)

    return TubeFunction(
        cloud.ambient_n,
        "monte_carlo",
        fn,
        label=f"mc({cloud.size} pts, {n_samples} samples, seed {seed})",
    )


def _edt_1d_sq(f: np.ndarray) -> np.ndarray:
    """Min over sites j of f[j] + (i - j)^2, by the parabola envelope sweep."""
    n = f.shape[0]
    out = np.full(n, np.inf)
    v = [0] * n  # parabola sites
    z = [0.0] * (n + 1)  # envelope breakpoints
    k = -1
    for q in range(n):
        fq = f[q]
        if fq == np.inf:
            continue
        if k < 0:
            k = 0
            v[0] = q
            z[0] = -np.inf
            z[1] = np.inf
            continue
        while True:
            p = v[k]
            s = ((fq + q * q) - (f[p] + p * p)) / (2.0 * (q - p))
            if s > z[k]:
                break
            k -= 1
            if k < 0:
                break
        k += 1
        v[k] = q
        z[k] = s if k > 0 else -np.inf
        z[k + 1] = np.inf
    if k < 0:
        return out
    j = 0
    for q in range(n):
        while z[j + 1] < q:
            j += 1
        p = v[j]
        out[q] = (q - p) * (q - p) + f[p]
    return out


def _edt_sq(grid: np.ndarray) -> np.ndarray:
    """Squared distance transform of a seed grid (0 at seeds, inf elsewhere)."""
    out = grid
    for axis in range(out.ndim):
        moved = np.moveaxis(out, axis, -1)
        flat = moved.reshape(-1, moved.shape[-1])
        for r in range(flat.shape[0]):
            line = flat[r]
            if np.all(np.isinf(line)):
                continue
            flat[r] = _edt_1d_sq(line)
        out = np.moveaxis(flat.reshape(moved.shape), -1, axis)
    return out


def grid_tube_measure(
    cloud: PointCloud, eps: float, resolution: float
) -> tuple[float, float]:
    """Deterministic tube volume by rasterization, with a rigorous bound.

    Returns ``(estimate, bound)`` where the true volume is within
    ``bound`` of the estimate: cells are counted against the snapped
    distance transform at eps, and against eps -/+ one cell diagonal for
    the certified lower/upper counts.
    """
    if cloud.ambient_n not in (2, 3):
        raise UnsupportedError(
            f"grid backend supports N in (2, 3), got N = {cloud.ambient_n}"
        )
    if not math.isfinite(eps) or eps <= 0.0:
        raise DomainError(f"eps must be positive, got {eps!r}")
    if not math.isfinite(resolution) or resolution <= 0.0:
        raise DomainError(f"resolution must be positive, got {resolution!r}")
    if resolution > eps / 8.0 * (1.0 + 1e-12):
        raise DomainError(
            f"resolution {resolution!r} must be <= eps/8 = {eps / 8.0!r}"
        )

    dim = cloud.ambient_n
    diag = resolution * math.sqrt(dim)
    pad = eps + 2.0 * diag
    lo = cloud.points.min(axis=0) - pad
    hi = cloud.points.max(axis=0) + pad
    shape = tuple(int(math.ceil((hi[d] - lo[d]) / resolution)) for d in range(dim))
    n_cells = 1
    for s in shape:
        n_cells *= s
    if n_cells > GRID_CELL_BUDGET:
        raise ResolutionError(
            f"grid of {n_cells} cells exceeds budget {GRID_CELL_BUDGET}"
        )

    seeds = np.full(shape, np.inf)
    idx = np.floor((cloud.points - lo) / resolution).astype(np.int64)
    for d in range(dim):
        idx[:, d] = np.clip(idx[:, d], 0, shape[d] - 1)
    seeds[tuple(idx.T)] = 0.0

    dist = np.sqrt(_edt_sq(seeds)) * resolution
    cell_vol = resolution**dim
    estimate = float(np.count_nonzero(dist <= eps)) * cell_vol
    lo_vol = float(np.count_nonzero(dist <= eps - diag)) * cell_vol
    hi_vol = float(np.count_nonzero(dist <= eps + diag)) * cell_vol
    bound = max(estimate - lo_vol, hi_vol - estimate)
    return estimate, bound


def grid_tube(cloud: PointCloud, resolution_factor: float = 16.0) -> TubeFunction:
    """Grid-backed tube function; resolution tracks eps/resolution_factor."""
    if resolution_factor < 8.0:
        raise DomainError(
            f"resolution_factor must be >= 8, got {resolution_factor!r}"
        )

    def fn(eps: float) -> tuple[float, float]:
        if eps <= 0.0:
            raise DomainError(f"eps must be positive, got {eps!r}")
        return grid_tube_measure(cloud, eps, eps / resolution_factor)

    return TubeFunction(
        cloud.ambient_n,
        "grid",
        fn,
        label=f"grid({cloud.size} pts, eps/{resolution_factor:g})",
    )
