"""Dominance filtering, exact hypervolume for two and three objectives, and front oracles."""

import itertools
import warnings

import numpy as np

from ._validation import check_vector
from .exceptions import InputError

__all__ = [
    "dominates",
    "nondominated_indices",
    "nondominated_filter",
    "hypervolume",
    "hypervolume_monte_carlo",
    "grid_pareto_oracle",
    "reference_point_from_front",
    "GRID_BUDGET",
]

GRID_BUDGET = 10**7


def dominates(a, b):
    """True if ``a`` is no worse than ``b`` everywhere and better somewhere."""
    a = np.asarray(a)
    b = np.asarray(b)
    return bool(np.all(a <= b) and np.any(a < b))


def _as_front(front):
    arr = np.asarray(front, dtype=np.float64)
    if arr.size == 0:
        return arr.reshape(0, arr.shape[-1] if arr.ndim == 2 else 0)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise InputError(f"a front must be a 2-D array of objective vectors, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError("front contains NaN or Inf")
    return arr


def nondominated_indices(front):
    """Indices (ascending) of points not weakly dominated by another point.

    Exact duplicates collapse onto their first occurrence.
    """
    pts = _as_front(front)
    if pts.shape[0] == 0:
        return []
    # after a stable lexicographic sort any dominator precedes the point it dominates
    order = np.lexsort(pts.T[::-1])
    kept = []
    archive = np.empty((0, pts.shape[1]))
    for idx in order:
        p = pts[idx]
        if archive.shape[0] and np.any(np.all(archive <= p, axis=1)):
            continue
        kept.append(int(idx))
        archive = np.vstack([archive, p])
    return sorted(kept)


def nondominated_filter(front):
    pts = _as_front(front)
    return pts[nondominated_indices(pts)]


def _hv2d(pts, ref):
    # pts non-dominated and strictly inside the reference box
    pts = pts[np.argsort(pts[:, 0])]
    area = 0.0
    prev_y = ref[1]
    for x, y in pts:
        if y < prev_y:
            area += (ref[0] - x) * (prev_y - y)
            prev_y = y
    return area


def _hv3d(pts, ref):
    pts = pts[np.argsort(pts[:, 2])]
    volume = 0.0
    for i in range(pts.shape[0]):
        z_next = pts[i + 1, 2] if i + 1 < pts.shape[0] else ref[2]
        depth = z_next - pts[i, 2]
        if depth > 0.0:
            volume += depth * _hv2d(nondominated_filter(pts[: i + 1, :2]), ref[:2])
    return volume


def hypervolume(front, ref):
    """Measure of the region dominated by ``front`` and bounded by ``ref``.

    Points that do not strictly dominate ``ref`` contribute nothing and
    trigger a warning. Only two and three objectives are supported.
    """
    pts = _as_front(front)
    ref = check_vector(ref, name="ref")
    if pts.shape[0] == 0:
        return 0.0
    m = pts.shape[1]
    if ref.shape[0] != m:
        raise InputError(f"reference point has {ref.shape[0]} entries, front has {m} objectives")
    if m not in (2, 3):
        raise InputError(f"hypervolume supports 2 or 3 objectives, got {m}")
    inside = np.all(pts < ref, axis=1)
    if not np.all(inside):
        warnings.warn(f"{int((~inside).sum())} front point(s) do not dominate the reference point "
                      "and are ignored", RuntimeWarning, stacklevel=2)
        pts = pts[inside]
        if pts.shape[0] == 0:
            return 0.0
    pts = nondominated_filter(pts)
    return float(_hv2d(pts, ref) if m == 2 else _hv3d(pts, ref))


def hypervolume_monte_carlo(front, ref, n_samples=100_000, rng=None):
    """Uniform-sampling estimate of the hypervolume and its standard error."""
    pts = _as_front(front)
    ref = np.asarray(ref, dtype=np.float64)
    rng = np.random.default_rng(rng)
    low = pts.min(axis=0)
    box = float(np.prod(ref - low))
    samples = rng.uniform(low, ref, size=(n_samples, pts.shape[1]))
    hit = np.zeros(n_samples, dtype=bool)
    for p in pts:
        hit |= np.all(samples >= p, axis=1)
    frac = hit.mean()
    return box * frac, box * np.sqrt(frac * (1.0 - frac) / n_samples)


def grid_pareto_oracle(problem, box_low, box_high, resolution, return_points=False):
    """Non-dominated objective vectors over a regular grid of the decision box.

    ``resolution`` is the number of grid nodes per axis (int or one per axis).
    """
    low = np.broadcast_to(np.asarray(box_low, dtype=np.float64), (problem.n,))
    high = np.broadcast_to(np.asarray(box_high, dtype=np.float64), (problem.n,))
    res = np.broadcast_to(np.asarray(resolution, dtype=int), (problem.n,))
    if np.any(res < 1):
        raise InputError("resolution must be at least 1 per axis")
    total = int(np.prod(res.astype(float)))
    if total > GRID_BUDGET:
        raise InputError(f"grid of {total} points exceeds the budget of {GRID_BUDGET}")
    axes = [np.linspace(lo, hi, r) for lo, hi, r in zip(low, high, res)]
    xs = np.array(list(itertools.product(*axes)))
    fs = np.array([problem.evaluate(x) for x in xs])
    keep = nondominated_indices(fs)
    if return_points:
        return fs[keep], xs[keep]
    return fs[keep]


def reference_point_from_front(front, margin=0.1):
    """Componentwise worst value plus ``margin`` times the front's range."""
    pts = _as_front(front)
    if pts.shape[0] == 0:
        raise InputError("cannot derive a reference point from an empty front")
    hi = pts.max(axis=0)
    span = hi - pts.min(axis=0)
    span = np.where(span > 0.0, span, 1.0)
    return hi + margin * span
