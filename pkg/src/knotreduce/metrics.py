"""Hausdorff distance on finite samples of compact sets, collars and metric codes."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .diagnostics import Diagnostics


@dataclass(eq=False)
class CompactSample:
    """Finite sample of a compact set in R^3.

    ``resolution`` bounds how far any point of the underlying set can be from
    the nearest sample point.  A resolution of 0 means the sample *is* the set.
    """

    points: np.ndarray
    resolution: float = 0.0

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1 and pts.size == 3:
            pts = pts.reshape(1, 3)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise ValueError(f"points must have shape (N, 3), got {pts.shape}")
        if len(pts) == 0:
            raise ValueError("a compact sample needs at least one point")
        if not np.all(np.isfinite(pts)):
            raise ValueError("sample coordinates must be finite")
        if not (self.resolution >= 0 and math.isfinite(self.resolution)):
            raise ValueError(f"resolution must be finite and non-negative, got {self.resolution}")
        self.points = pts

    def __len__(self) -> int:
        return len(self.points)

    def union(self, other: "CompactSample") -> "CompactSample":
        return CompactSample(np.vstack([self.points, other.points]), max(self.resolution, other.resolution))


def _directed(a: np.ndarray, b: np.ndarray) -> float:
    dist, _ = cKDTree(b).query(a, k=1)
    return float(np.max(dist))


def _directed_brute(a: np.ndarray, b: np.ndarray, chunk: int = 2048) -> float:
    worst = 0.0
    for start in range(0, len(a), chunk):
        block = a[start : start + chunk]
        d = np.sqrt(((block[:, None, :] - b[None, :, :]) ** 2).sum(axis=2))
        worst = max(worst, float(d.min(axis=1).max()))
    return worst


def hausdorff_distance(a: CompactSample, b: CompactSample, method: str = "kdtree") -> tuple[float, float]:
    """Return ``(distance, error_bound)`` for two samples.

    The true distance between the underlying sets lies within
    ``error_bound = a.resolution + b.resolution`` of ``distance``.
    """
    if method == "kdtree":
        directed = _directed
    elif method == "brute":
        directed = _directed_brute
    else:
        raise ValueError(f"unknown method {method!r}")
    d = max(directed(a.points, b.points), directed(b.points, a.points))
    return d, a.resolution + b.resolution


def epsilon_collar_contains(c: CompactSample, eps: float, x: Sequence[float]) -> bool:
    """Whether ``x`` lies in the open eps-neighbourhood of the sample points."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    d = np.sqrt(((c.points - np.asarray(x, dtype=float)) ** 2).sum(axis=1))
    return bool(d.min() < eps)


@dataclass
class ConvergenceReport:
    passed: bool
    distances: list[float]
    tol: float
    tail_start: int
    reason: str = ""


def check_convergence(seq: Sequence[CompactSample], limit: CompactSample, tol: float) -> ConvergenceReport:
    """Judge whether ``seq`` converges to ``limit`` in the Hausdorff metric.

    Over the last quarter of the sequence (at least one term) every distance
    must be below ``tol`` and no step may increase the distance by more than
    ``tol``.
    """
    if not seq:
        raise ValueError("sequence must be non-empty")
    if tol <= 0:
        raise ValueError("tol must be positive")
    distances = [hausdorff_distance(s, limit)[0] for s in seq]
    tail_start = len(distances) - max(1, math.ceil(len(distances) / 4))
    tail = distances[tail_start:]
    if any(d >= tol for d in tail):
        bad = tail_start + next(i for i, d in enumerate(tail) if d >= tol)
        return ConvergenceReport(False, distances, tol, tail_start, f"distance {distances[bad]:g} >= tol at index {bad}")
    for i in range(1, len(tail)):
        if tail[i] > tail[i - 1] + tol:
            return ConvergenceReport(False, distances, tol, tail_start, f"distance grows at index {tail_start + i}")
    return ConvergenceReport(True, distances, tol, tail_start)


@dataclass
class MetricCode:
    """Distance matrix of a finite sequence of points, one row per index."""

    distances: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.distances = np.asarray(self.distances, dtype=float)

    @property
    def size(self) -> int:
        return len(self.distances)


def metric_code_of_points(points: Sequence[Any], dist: Callable[[Any, Any], float]) -> MetricCode:
    n = len(points)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            out[i, j] = dist(points[i], points[j])
            out[j, i] = dist(points[j], points[i])
    return MetricCode(out)


def validate_metric_code(code: MetricCode, rtol: float = 1e-9) -> Diagnostics:
    """Check the metric axioms; the first violation found is named first.

    Comparisons allow a relative slack of ``rtol`` times the largest entry so
    that rounding in float distances is not reported as a fault.
    """
    d = code.distances
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        return Diagnostics((f"shape: expected a square matrix, got {d.shape}",))
    n = d.shape[0]
    if n == 0:
        return Diagnostics()
    if not np.all(np.isfinite(d)):
        return Diagnostics(("finiteness: matrix has non-finite entries",))
    slack = rtol * max(1.0, float(np.abs(d).max()))
    diag = np.abs(np.diag(d))
    if np.any(diag > slack):
        i = int(np.argmax(diag > slack))
        return Diagnostics((f"zero diagonal at ({i},{i})",))
    if np.any(d < -slack):
        i, j = np.argwhere(d < -slack)[0]
        return Diagnostics((f"non-negativity at ({i},{j})",))
    asym = np.abs(d - d.T) > slack
    if np.any(asym):
        i, j = np.argwhere(asym)[0]
        return Diagnostics((f"symmetry at ({min(i, j)},{max(i, j)})",))
    for k in range(n):
        bad = d > d[:, k][:, None] + d[k, :][None, :] + slack
        if np.any(bad):
            i, j = np.argwhere(bad)[0]
            return Diagnostics((f"triangle inequality at ({min(i, j)},{max(i, j)}) via {k}",))
    return Diagnostics()
