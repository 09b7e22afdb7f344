"""Chains of linked circles laid out along [0, 1] according to a linear order.

Each element of a finite linear order gets an open interval of [0, 1];
intervals are placed left to right in order, so ``sup U_i <= inf U_j``
exactly when ``i`` precedes ``j``, and neighbours in the order share an
endpoint.  The interval (on the x axis) is replaced by a chain of
``CHAIN_LENGTH`` components: round circles alternating between the xy and xz
planes, ending in a trefoil.  The trefoil marks which end of the chain is the
right one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from .construction import PLCurve, torus_knot_curve
from .plgeom import segment_distances, self_intersection
from .serialize import obj_polylines

CHAIN_LENGTH = 4
CIRCLE_RADIUS = 0.6  # in units of the spacing between component centres
TREFOIL_MINOR = 0.15
CIRCLE_VERTICES = 64
TREFOIL_VERTICES = 96


@dataclass(frozen=True)
class ChainComponent:
    kind: str  # "circle-xy" | "circle-xz" | "trefoil"
    center: tuple[float, float, float]
    curve: PLCurve


@dataclass(frozen=True)
class ChainConfiguration:
    order: tuple[int, ...]  # elements from least to greatest
    intervals: dict[int, tuple[Fraction, Fraction]]
    chains: dict[int, tuple[ChainComponent, ...]]

    @property
    def size(self) -> int:
        return len(self.order)

    def precedes(self, i: int, j: int) -> bool:
        return self.order.index(i) < self.order.index(j)

    def components(self) -> list[tuple[int, int, ChainComponent]]:
        return [(e, c, comp) for e in sorted(self.chains) for c, comp in enumerate(self.chains[e])]

    def to_obj(self) -> str:
        named = [(f"chain_{e}_{c}_{comp.kind}", comp.curve.vertices) for e, c, comp in self.components()]
        return obj_polylines(named, header=f"order {' < '.join(map(str, self.order))}")


def _circle(center: np.ndarray, radius: float, plane: str, count: int) -> np.ndarray:
    a = 2 * np.pi * np.arange(count) / count
    u, v = radius * np.cos(a), radius * np.sin(a)
    zeros = np.zeros(count)
    if plane == "xy":
        return np.column_stack([center[0] + u, center[1] + v, center[2] + zeros])
    return np.column_stack([center[0] + u, center[1] + zeros, center[2] + v])


def _trefoil_xz(center: np.ndarray, major: float, minor: float, count: int) -> np.ndarray:
    # torus knot on a torus whose axis is the y axis, so an xy circle can thread it
    pts = torus_knot_curve(3, np.zeros(3), major, minor, count)
    return np.column_stack([center[0] + pts[:, 0], center[1] + pts[:, 2], center[2] + pts[:, 1]])


def interval_layout(order: Sequence[int]) -> dict[int, tuple[Fraction, Fraction]]:
    n = len(order)
    return {e: (Fraction(p, n), Fraction(p + 1, n)) for p, e in enumerate(order)}


def build_chain(lo: float, hi: float) -> tuple[ChainComponent, ...]:
    spacing = (hi - lo) / (CHAIN_LENGTH + 1)
    rho = CIRCLE_RADIUS * spacing
    comps = []
    for i in range(CHAIN_LENGTH):
        c = np.array([lo + (i + 1) * spacing, 0.0, 0.0])
        if i == CHAIN_LENGTH - 1:
            # the previous component lies in the xy plane and threads this torus
            curve = _trefoil_xz(c, rho, TREFOIL_MINOR * spacing, TREFOIL_VERTICES)
            kind = "trefoil"
        else:
            plane = "xy" if i % 2 == 0 else "xz"
            curve = _circle(c, rho, plane, CIRCLE_VERTICES)
            kind = f"circle-{plane}"
        comps.append(ChainComponent(kind, tuple(c), PLCurve(curve)))
    return tuple(comps)


def build_order_configuration(order: Sequence[int]) -> ChainConfiguration:
    """Lay out one chain per element of the order ``order[0] < order[1] < ...``."""
    order = tuple(int(e) for e in order)
    if not order:
        raise ValueError("the order needs at least one element")
    if sorted(order) != list(range(len(order))):
        raise ValueError(f"{order} is not a permutation of 0..{len(order) - 1}")
    if CHAIN_LENGTH % 2:
        raise AssertionError("the trefoil must follow an xy circle")
    intervals = interval_layout(order)
    chains = {e: build_chain(float(lo), float(hi)) for e, (lo, hi) in intervals.items()}
    return ChainConfiguration(order, intervals, chains)


def check_interval_order(cfg: ChainConfiguration) -> list[str]:
    """Violations of: sup U_i <= inf U_j iff i < j, with equality iff j succeeds i."""
    problems = []
    pos = {e: p for p, e in enumerate(cfg.order)}
    for i in cfg.intervals:
        lo, hi = cfg.intervals[i]
        if not (0 <= lo < hi <= 1):
            problems.append(f"interval {i} is not an open subinterval of [0, 1]")
        for j in cfg.intervals:
            if i == j:
                continue
            sup_i, inf_j = cfg.intervals[i][1], cfg.intervals[j][0]
            if (sup_i <= inf_j) != (pos[i] < pos[j]):
                problems.append(f"order of intervals {i}, {j} disagrees with the linear order")
            if (sup_i == inf_j) != (pos[j] == pos[i] + 1):
                problems.append(f"intervals {i}, {j} share an endpoint iff {j} succeeds {i}: violated")
    total = sum(hi - lo for lo, hi in cfg.intervals.values())
    if total != 1:
        problems.append("intervals do not fill [0, 1] up to endpoints")
    return problems


def chain_clearance(cfg: ChainConfiguration, tol: float = 1e-9, probe: float = 0.05) -> tuple[float, list[str]]:
    """Minimum distance between distinct chain components and the problems found.

    Edges of different components are compared only when their midpoints
    are within ``probe`` plus an edge length, so the returned minimum is exact
    whenever it is below ``probe``.  Every component must also be an embedded
    polygon.
    """
    comps = cfg.components()
    problems = []
    starts, ends, owner = [], [], []
    for idx, (e, c, comp) in enumerate(comps):
        dmin, pair = self_intersection(comp.curve.vertices, tol)
        if pair is not None:
            problems.append(f"component {c} of chain {e} self-intersects")
        v = comp.curve.vertices
        starts.append(v)
        ends.append(np.roll(v, -1, axis=0))
        owner.append(np.full(len(v), idx))
    start, end, owner = np.vstack(starts), np.vstack(ends), np.concatenate(owner)
    radius = float(np.linalg.norm(end - start, axis=1).max()) + probe
    pairs = cKDTree((start + end) / 2).query_pairs(radius, output_type="ndarray")
    best = np.inf
    if len(pairs):
        pairs = pairs[owner[pairs[:, 0]] != owner[pairs[:, 1]]]
    if len(pairs):
        i, j = pairs[:, 0], pairs[:, 1]
        d = segment_distances(start[i], end[i], start[j], end[j])
        best = float(d.min())
        for k in np.nonzero(d <= tol)[0]:
            (e1, c1, _), (e2, c2, _) = comps[owner[i[k]]], comps[owner[j[k]]]
            msg = f"chain {e1} component {c1} meets chain {e2} component {c2}"
            if msg not in problems:
                problems.append(msg)
    return best, problems
