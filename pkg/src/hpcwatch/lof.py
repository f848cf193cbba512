"""Local Outlier Factor over one-dimensional point sets.

Density-based outlier scoring for a window of counter deltas: each point is
compared to the density of its k nearest neighbors, and the score is the
ratio of their average local reachability density to the point's own.  A
score near 1 means the point sits in a region as dense as its neighborhood;
larger scores mean sparser surroundings, i.e. stronger outliers.

The point set is the bare multiset of delta values; indices identify points
(they are positions in a time series) but do not participate in distance.
Neighborhoods include every point tied at exactly the k-th distance, so a
neighborhood may hold more than k members.

Degenerate windows are given explicit conventions instead of NaNs:

* all duplicates: every lrd is +inf and every score is 1 (nothing sticks out)
* a point whose own lrd is +inf among finite-density neighbors scores the
  minimum positive float (it is infinitely denser than its surroundings);
  with ties included this cannot actually arise, but the branch keeps the
  function total
* a finite-density point with an infinitely dense neighbor scores +inf

Everything is computed from shared per-set tables, so batch and pointwise
calls return bit-identical values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

_TINY = math.nextafter(0.0, 1.0)


@dataclass(frozen=True)
class PointSet:
    """An ordered set of finite values; the index is the point identity."""

    values: tuple[float, ...]

    def __init__(self, values: Iterable[float]) -> None:
        vals = tuple(float(v) for v in values)
        for v in vals:
            if not math.isfinite(v):
                raise ValueError(f"non-finite point value {v!r}")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> float:
        return self.values[i]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.float64)


@dataclass(frozen=True)
class Neighborhood:
    center: int
    k: int
    k_distance: float
    members: frozenset[int]


@dataclass(frozen=True)
class LofResult:
    index: int
    lrd: float
    lof: float


def _as_points(points: PointSet | Sequence[float]) -> PointSet:
    return points if isinstance(points, PointSet) else PointSet(points)


def distance(a: float, b: float) -> float:
    """Absolute difference; the metric for 1-D sets."""
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("distance requires finite values")
    return abs(a - b)


# ---------------------------------------------------------------------------
# Shared tables
# ---------------------------------------------------------------------------

def _check_k(n: int, k: int) -> None:
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must be in 1..{n - 1} for {n} points, got {k}")


def _tables(x: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(k_distance, member mask, lrd, lof) arrays for the whole set.

    The mask row i flags members of point i's neighborhood (ties included,
    center excluded via an infinite diagonal).
    """
    n = x.shape[0]
    _check_k(n, k)

    d = np.abs(x[:, None] - x[None, :])
    np.fill_diagonal(d, np.inf)

    kdist = np.partition(d, k - 1, axis=1)[:, k - 1]
    mask = d <= kdist[:, None]
    counts = mask.sum(axis=1)

    reach = np.maximum(d, kdist[None, :])
    reach_sum = np.where(mask, reach, 0.0).sum(axis=1)
    with np.errstate(divide="ignore"):
        lrd = np.where(reach_sum > 0.0, counts / np.where(reach_sum > 0.0, reach_sum, 1.0), np.inf)

    finite_lrd = np.isfinite(lrd)
    member_lrd_sum = np.where(mask, lrd[None, :], 0.0).sum(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        member_mean = member_lrd_sum / counts
        ratio = member_mean / lrd

    any_finite_member = np.where(mask, finite_lrd[None, :], False).any(axis=1)
    center_inf = ~finite_lrd
    lof_arr = np.where(
        center_inf,
        np.where(any_finite_member, _TINY, 1.0),
        ratio,
    )
    return kdist, mask, lrd, lof_arr


# ---------------------------------------------------------------------------
# Pointwise operations (delegating to the shared tables)
# ---------------------------------------------------------------------------

def k_nearest(points: PointSet | Sequence[float], i: int, k: int) -> Neighborhood:
    """Neighborhood of point i: the k-th smallest distance and every point
    within it, ties included."""
    ps = _as_points(points)
    x = ps.as_array()
    if not 0 <= i < len(ps):
        raise IndexError(f"point index {i} out of range")
    kdist, mask, _, _ = _tables(x, k)
    return Neighborhood(
        center=i,
        k=k,
        k_distance=float(kdist[i]),
        members=frozenset(int(j) for j in np.nonzero(mask[i])[0]),
    )


def reachability_distance(points: PointSet | Sequence[float], a: int, b: int, k: int) -> float:
    """max(k_distance(b), distance(a, b)): how far b is from a, floored by
    b's own neighborhood radius."""
    if a == b:
        raise ValueError("reachability distance is undefined for a point and itself")
    ps = _as_points(points)
    x = ps.as_array()
    for idx in (a, b):
        if not 0 <= idx < len(ps):
            raise IndexError(f"point index {idx} out of range")
    kdist, _, _, _ = _tables(x, k)
    return float(max(kdist[b], abs(x[a] - x[b])))


def lrd(points: PointSet | Sequence[float], i: int, k: int) -> float:
    """Local reachability density: inverse mean reachability distance to the
    neighborhood, +inf when all neighbors are duplicates of the point."""
    ps = _as_points(points)
    _, _, lrd_arr, _ = _tables(ps.as_array(), k)
    return float(lrd_arr[i])


def lof(points: PointSet | Sequence[float], i: int, k: int) -> float:
    ps = _as_points(points)
    _, _, _, lof_arr = _tables(ps.as_array(), k)
    return float(lof_arr[i])


# ---------------------------------------------------------------------------
# Batch operations
# ---------------------------------------------------------------------------

def lof_scores(values: np.ndarray | Sequence[float], k: int) -> np.ndarray:
    """Score array for every point; the allocation-free path for hot loops."""
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("lof_scores expects a 1-D array")
    if not np.isfinite(x).all():
        raise ValueError("non-finite point value")
    if x.shape[0] < k + 1:
        raise ValueError(f"need at least {k + 1} points for k={k}, got {x.shape[0]}")
    _, _, _, lof_arr = _tables(x, k)
    return lof_arr


def lof_all(points: PointSet | Sequence[float], k: int) -> list[LofResult]:
    """One LofResult per point, index-aligned, identical to pointwise lof."""
    ps = _as_points(points)
    if len(ps) < k + 1:
        raise ValueError(f"need at least {k + 1} points for k={k}, got {len(ps)}")
    _, _, lrd_arr, lof_arr = _tables(ps.as_array(), k)
    return [
        LofResult(index=i, lrd=float(lrd_arr[i]), lof=float(lof_arr[i]))
        for i in range(len(ps))
    ]


def top_n_outliers(results: Sequence[LofResult], n: int) -> list[int]:
    """Indices of the n largest scores, descending; equal scores keep the
    earlier index first.  Returns fewer than n if fewer results exist."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    ranked = sorted(results, key=lambda r: (-r.lof, r.index))
    return [r.index for r in ranked[:n]]
