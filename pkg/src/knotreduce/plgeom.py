"""Piecewise-linear curve predicates in R^3 (floating point, with tolerances)."""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree


def segment_distances(p1: np.ndarray, q1: np.ndarray, p2: np.ndarray, q2: np.ndarray) -> np.ndarray:
    """Row-wise minimum distance between segments [p1,q1] and [p2,q2].

    Closest-point computation for two segments (Ericson, Real-Time Collision
    Detection, 5.1.9), vectorised over rows.
    """
    d1 = q1 - p1
    d2 = q2 - p2
    r = p1 - p2
    a = np.einsum("ij,ij->i", d1, d1)
    e = np.einsum("ij,ij->i", d2, d2)
    f = np.einsum("ij,ij->i", d2, r)
    c = np.einsum("ij,ij->i", d1, r)
    b = np.einsum("ij,ij->i", d1, d2)
    tiny = 1e-300
    a_deg = a <= tiny
    e_deg = e <= tiny
    safe_a = np.where(a_deg, 1.0, a)
    safe_e = np.where(e_deg, 1.0, e)

    denom = a * e - b * b
    s = np.where(denom > 0, np.clip((b * f - c * e) / np.where(denom > 0, denom, 1.0), 0.0, 1.0), 0.0)
    t = (b * s + f) / safe_e
    s = np.where(t < 0, np.clip(-c / safe_a, 0.0, 1.0), np.where(t > 1, np.clip((b - c) / safe_a, 0.0, 1.0), s))
    t = np.clip(t, 0.0, 1.0)

    # degenerate segments (points)
    s = np.where(e_deg, np.clip(-c / safe_a, 0.0, 1.0), s)
    t = np.where(e_deg, 0.0, t)
    s = np.where(a_deg, 0.0, s)
    t = np.where(a_deg, np.where(e_deg, 0.0, np.clip(f / safe_e, 0.0, 1.0)), t)

    c1 = p1 + d1 * s[:, None]
    c2 = p2 + d2 * t[:, None]
    return np.sqrt(((c1 - c2) ** 2).sum(axis=1))


def closed_segments(vertices: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    v = np.asarray(vertices, dtype=float)
    return v, np.roll(v, -1, axis=0)


def self_intersection(vertices: np.ndarray, tol: float) -> tuple[float, tuple[int, int] | None]:
    """Smallest distance between non-adjacent edges of a closed polygon.

    Returns ``(min_distance, offending_pair)``; the pair is ``None`` when every
    non-adjacent pair is at least ``tol`` apart.  Folded adjacent edges
    (an endpoint within ``tol`` of the neighbouring edge) are reported too.
    Pairs further apart than the candidate radius are never examined, so the
    returned minimum is exact only up to that radius.
    """
    start, end = closed_segments(vertices)
    n = len(start)
    lengths = np.linalg.norm(end - start, axis=1)
    if np.any(lengths <= 0):
        i = int(np.argmin(lengths))
        return 0.0, (i, (i + 1) % n)
    worst = np.inf
    witness = None

    # adjacent edges i, i+1 meet at vertex i+1; check the far endpoints
    nxt = np.roll(np.arange(n), -1)
    d_a = segment_distances(start, start, start[nxt], end[nxt])
    d_b = segment_distances(end[nxt], end[nxt], start, end)
    fold = np.minimum(d_a, d_b)
    if n > 3 and np.any(fold < tol):
        i = int(np.argmin(fold))
        return float(fold[i]), (i, int(nxt[i]))

    mid = (start + end) / 2
    radius = float(lengths.max()) + tol
    pairs = cKDTree(mid).query_pairs(radius, output_type="ndarray")
    if len(pairs):
        i, j = pairs[:, 0], pairs[:, 1]
        gap = np.abs(i - j)
        keep = (gap > 1) & (gap < n - 1)
        i, j = i[keep], j[keep]
        if len(i):
            d = segment_distances(start[i], end[i], start[j], end[j])
            k = int(np.argmin(d))
            worst = float(d[k])
            if worst < tol:
                witness = (int(i[k]), int(j[k]))
    return worst, witness


def polyline_distance(a: np.ndarray, b: np.ndarray, cutoff: float) -> float:
    """Minimum distance between two closed polygons, or ``inf`` if above ``cutoff``."""
    sa, ea = closed_segments(a)
    sb, eb = closed_segments(b)
    lo = np.maximum(np.minimum(sa, ea).min(axis=0), np.minimum(sb, eb).min(axis=0))
    hi = np.minimum(np.maximum(sa, ea).max(axis=0), np.maximum(sb, eb).max(axis=0))
    if np.any(lo - hi > cutoff):
        return np.inf
    la = np.linalg.norm(ea - sa, axis=1).max()
    lb = np.linalg.norm(eb - sb, axis=1).max()
    ta = cKDTree((sa + ea) / 2)
    tb = cKDTree((sb + eb) / 2)
    hits = ta.query_ball_tree(tb, r=(la + lb) / 2 + cutoff)
    ii = np.fromiter((i for i, js in enumerate(hits) for _ in js), dtype=int)
    jj = np.fromiter((j for js in hits for j in js), dtype=int)
    if not len(ii):
        return np.inf
    d = segment_distances(sa[ii], ea[ii], sb[jj], eb[jj])
    m = float(d.min())
    return m if m <= cutoff else np.inf


def _unit(v: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(v, axis=-1, keepdims=True)
    return v / np.where(norm > 0, norm, 1.0)


def linking_number(a: np.ndarray, b: np.ndarray) -> float:
    """Gauss linking number of two disjoint closed polygons.

    Sums the exact signed solid angle of every edge pair (Klenin and
    Langowski's formula); the result is an integer up to rounding.
    """
    sa, ea = closed_segments(a)
    sb, eb = closed_segments(b)
    p1 = np.repeat(sa, len(sb), axis=0)
    p2 = np.repeat(ea, len(sb), axis=0)
    p3 = np.tile(sb, (len(sa), 1))
    p4 = np.tile(eb, (len(sa), 1))
    r13, r14, r23, r24 = p3 - p1, p4 - p1, p3 - p2, p4 - p2
    n1 = _unit(np.cross(r13, r14))
    n2 = _unit(np.cross(r14, r24))
    n3 = _unit(np.cross(r24, r23))
    n4 = _unit(np.cross(r23, r13))

    def asin_dot(u, v):
        return np.arcsin(np.clip(np.einsum("ij,ij->i", u, v), -1.0, 1.0))

    omega = asin_dot(n1, n2) + asin_dot(n2, n3) + asin_dot(n3, n4) + asin_dot(n4, n1)
    sign = np.sign(np.einsum("ij,ij->i", np.cross(p4 - p3, p2 - p1), r13))
    return float((omega * sign).sum() / (4 * np.pi))
