"""The ball grid, the sets Q and P, knot embeddings and the B1-B5 checks.

Ball B(n,k,l) has centre (1 - 2^-n, 1 - 2^-k, l) and radius 2^(-4(n+1)(k+1)).
All of these, and the sticks and points of P, are dyadic rationals, so every
predicate on them below is decided in exact arithmetic.  Only knot curves
are floating point.

A configuration is a finite window of the construction: rows n < 2M,
columns k < K.  The points (1, 1, 0) and (1, 1, 1), where the grid
accumulates in both directions, are kept as ``corner_points``: they are
limits of ball centres and lie on the two half-segments of P.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterable, Optional

import numpy as np

from .knots import DEFAULT_REGISTRY, KnotTypeId, KnotTypeRegistry, PDCode
from .plgeom import self_intersection

Point = tuple[Fraction, Fraction, Fraction]
Index = tuple[int, int, int]

ONE = Fraction(1)
HALF = Fraction(1, 2)
PUNCTURE: Point = (ONE, ONE, HALF)
SELF_INTERSECTION_RTOL = 1e-6
MIN_SEGMENTS_PER_CROSSING = 8


class EmbeddingError(ValueError):
    pass


class ConfigurationError(ValueError):
    pass


def pow2(e: int) -> Fraction:
    return Fraction(2) ** e


def dist2(p: Iterable[Fraction], q: Iterable[Fraction]) -> Fraction:
    return sum(((a - b) ** 2 for a, b in zip(p, q)), Fraction(0))


def point_vertical_segment_dist2(p: Point, seg: tuple[Point, Point]) -> Fraction:
    """Squared distance from ``p`` to a segment parallel to the z axis."""
    (x, y, z0), (_, _, z1) = seg
    lo, hi = min(z0, z1), max(z0, z1)
    dz = lo - p[2] if p[2] < lo else (p[2] - hi if p[2] > hi else Fraction(0))
    return (p[0] - x) ** 2 + (p[1] - y) ** 2 + dz**2


def vertical_segments_dist2(s: tuple[Point, Point], u: tuple[Point, Point]) -> Fraction:
    (x1, y1, a0), (_, _, a1) = s
    (x2, y2, b0), (_, _, b1) = u
    lo1, hi1 = min(a0, a1), max(a0, a1)
    lo2, hi2 = min(b0, b1), max(b0, b1)
    gap = max(Fraction(0), lo2 - hi1, lo1 - hi2)
    return (x1 - x2) ** 2 + (y1 - y2) ** 2 + gap**2


def to_float(p: Iterable[Fraction]) -> np.ndarray:
    return np.array([float(c) for c in p])


@dataclass(frozen=True)
class Ball:
    n: int
    k: int
    l: int
    center: Point
    radius: Fraction

    @property
    def index(self) -> Index:
        return (self.n, self.k, self.l)

    @property
    def center_float(self) -> np.ndarray:
        return to_float(self.center)

    def contains(self, p: Point) -> bool:
        """Closed-ball membership, exact."""
        return dist2(p, self.center) <= self.radius**2


@lru_cache(maxsize=None)
def ball_spec(n: int, k: int, l: int) -> Ball:
    if n < 0 or k < 0 or l not in (0, 1):
        raise ValueError(f"invalid ball index {(n, k, l)}")
    center = (ONE - pow2(-n), ONE - pow2(-k), Fraction(l))
    return Ball(n, k, l, center, pow2(-4 * (n + 1) * (k + 1)))


# P and Q


@dataclass(frozen=True)
class PQDescriptor:
    """Window of Q and P for rows n < 2M and columns k < K.

    ``half_segments`` are the closed segments from (1,1,0) and (1,1,1) to the
    puncture (1,1,1/2); the puncture itself belongs to neither.
    """

    rows: int
    cols: int
    q_points: tuple[Point, ...]
    sticks: tuple[tuple[Point, Point], ...]
    half_segments: tuple[tuple[Point, Point], ...] = (
        ((ONE, ONE, Fraction(0)), PUNCTURE),
        ((ONE, ONE, ONE), PUNCTURE),
    )
    puncture: Point = PUNCTURE
    corner_points: tuple[Point, ...] = ((ONE, ONE, Fraction(0)), (ONE, ONE, ONE))

    def on_half_segment(self, p: Point) -> Optional[int]:
        """Index of the half-segment containing ``p`` (puncture excluded), else None."""
        if p == self.puncture:
            return None
        for i, seg in enumerate(self.half_segments):
            if point_vertical_segment_dist2(p, seg) == 0:
                return i
        return None

    def in_P(self, p: Point) -> bool:
        if p in self.q_points:
            return True
        if any(point_vertical_segment_dist2(p, s) == 0 for s in self.sticks):
            return True
        return self.on_half_segment(p) is not None

    @property
    def isolated_points(self) -> tuple[Point, ...]:
        """Q points that are not stick endpoints: (1, 1 - 2^-k, l)."""
        return tuple(p for p in self.q_points if p[0] == ONE)


def pq_sets(rows: int, cols: int) -> PQDescriptor:
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be >= 1")
    q: list[Point] = []
    sticks = []
    for n in range(2 * rows):
        x = ONE - pow2(-n)
        q.extend([(x, ONE, Fraction(0)), (x, ONE, ONE)])
        sticks.append(((x, ONE, Fraction(0)), (x, ONE, ONE)))
    for k in range(cols):
        y = ONE - pow2(-k)
        q.extend([(ONE, y, Fraction(0)), (ONE, y, ONE)])
    return PQDescriptor(rows, cols, tuple(q), tuple(sticks))


# capsules


@dataclass(frozen=True)
class Capsule:
    """Convex hull of B(n,k,0) and B(n,k,1): a vertical segment thickened by the radius."""

    n: int
    k: int
    radius: Fraction
    axis: tuple[Point, Point]
    certificate: tuple[str, ...] = ()
    disjoint: bool = True

    def contains_ball(self, ball: Ball) -> bool:
        if ball.radius > self.radius:
            return False
        return point_vertical_segment_dist2(ball.center, self.axis) <= (self.radius - ball.radius) ** 2

    def disjoint_from_ball(self, ball: Ball) -> bool:
        return point_vertical_segment_dist2(ball.center, self.axis) > (self.radius + ball.radius) ** 2

    def disjoint_from_segment(self, seg: tuple[Point, Point]) -> bool:
        return vertical_segments_dist2(self.axis, seg) > self.radius**2

    def disjoint_from_point(self, p: Point) -> bool:
        return point_vertical_segment_dist2(p, self.axis) > self.radius**2


def capsule(n: int, k: int, rows: Optional[int] = None, cols: Optional[int] = None) -> Capsule:
    """Capsule C(n,k), with a disjointness certificate over the window rows x cols.

    The default window is the smallest one containing (n, k).
    """
    b0, b1 = ball_spec(n, k, 0), ball_spec(n, k, 1)
    rows = n // 2 + 1 if rows is None else rows
    cols = k + 1 if cols is None else cols
    cap = Capsule(n, k, b0.radius, (b0.center, b1.center))
    notes: list[str] = []
    ok = True
    for nn in range(2 * rows):
        for kk in range(cols):
            if (nn, kk) == (n, k):
                continue
            for ll in (0, 1):
                if not cap.disjoint_from_ball(ball_spec(nn, kk, ll)):
                    ok = False
                    notes.append(f"meets ball {(nn, kk, ll)}")
    pq = pq_sets(rows, cols)
    for s in pq.sticks + pq.half_segments:
        if not cap.disjoint_from_segment(s):
            ok = False
            notes.append(f"meets segment at x={s[0][0]}")
    for p in pq.isolated_points:
        if not cap.disjoint_from_point(p):
            ok = False
            notes.append(f"meets point {p}")
    if ok:
        notes.append(f"disjoint from all other balls and P in window {rows}x{cols}")
    return Capsule(n, k, b0.radius, cap.axis, tuple(notes), ok)


# knot curves


@dataclass(frozen=True, eq=False)
class PLCurve:
    """Closed polygon; the last vertex connects back to the first.

    With ``frame`` set, ``vertices`` are unit coordinates local to that ball:
    the actual point is ``center + radius * v``.  Deep balls are far smaller
    than the float spacing near 1, so knot curves are only ever stored and
    checked in their ball's frame.
    """

    vertices: np.ndarray
    frame: Optional[Ball] = None

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3 or len(v) < 3:
            raise ValueError("a PL curve needs at least three 3D vertices")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    def __len__(self) -> int:
        return len(self.vertices)

    @cached_property
    def _self_check(self) -> dict:
        return {}

    def self_intersection(self, tol: float) -> tuple[float, Optional[tuple[int, int]]]:
        """Non-adjacent edge clearance in the curve's own coordinates."""
        cache = self._self_check
        if tol not in cache:
            cache[tol] = self_intersection(self.vertices, tol)
        return cache[tol]

    def global_vertices(self) -> np.ndarray:
        if self.frame is None:
            return self.vertices
        return self.frame.center_float + float(self.frame.radius) * self.vertices

    def max_edge(self) -> float:
        """Longest edge in global units."""
        v = self.vertices
        edge = float(np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1).max())
        return edge * (float(self.frame.radius) if self.frame is not None else 1.0)


def torus_knot_curve(q: int, center: np.ndarray, major: float, minor: float, count: int) -> np.ndarray:
    theta = 2 * np.pi * np.arange(count) / count
    rad = major + minor * np.cos(q * theta)
    return np.column_stack(
        [
            center[0] + rad * np.cos(2 * theta),
            center[1] + rad * np.sin(2 * theta),
            center[2] + minor * np.sin(q * theta),
        ]
    )


@lru_cache(maxsize=4096)
def embed_knot_in_ball(kid: KnotTypeId, ball: Ball, segments_per_crossing: int = 16) -> PLCurve:
    """Sample the (2, q) torus knot on a torus inside ``ball``.

    Major radius r/2, minor radius r/4, so every vertex is within 0.75 r of
    the centre.  ``segments_per_crossing * q`` vertices are used.  The
    curve is returned in the ball's unit frame.
    """
    if segments_per_crossing < MIN_SEGMENTS_PER_CROSSING:
        raise EmbeddingError(
            f"insufficient sampling: {segments_per_crossing} segments per crossing, need >= {MIN_SEGMENTS_PER_CROSSING}"
        )
    q = kid.q
    curve = PLCurve(torus_knot_curve(q, np.zeros(3), 0.5, 0.25, segments_per_crossing * q), frame=ball)
    dmin, witness = curve.self_intersection(SELF_INTERSECTION_RTOL)
    if witness is not None:
        raise EmbeddingError(
            f"insufficient sampling: edges {witness} are {dmin:.3g} radii apart (< {SELF_INTERSECTION_RTOL:g})"
        )
    return curve


def curve_inside_open_ball(curve: PLCurve, ball: Ball) -> tuple[bool, float]:
    """Whether every vertex is strictly inside ``ball``; returns max |v - c| / r.

    Near-boundary vertices are re-decided exactly (floats are dyadic).
    """
    if curve.frame is not None:
        if curve.frame != ball:
            return False, math.inf
        d = np.linalg.norm(curve.vertices, axis=1)
        worst = float(d.max())
        if worst < 1 - 1e-9:
            return True, worst
        for i in np.nonzero(d >= 1 - 1e-9)[0]:
            if sum(Fraction(float(c)) ** 2 for c in curve.vertices[i]) >= 1:
                return False, worst
        return True, worst
    r = float(ball.radius)
    d = np.linalg.norm(curve.vertices - ball.center_float, axis=1)
    worst = float(d.max()) / r
    if worst < 1 - 1e-9:
        return True, worst
    r2 = ball.radius**2
    for i in np.nonzero(d >= r * (1 - 1e-9))[0]:
        v = tuple(Fraction(float(c)) for c in curve.vertices[i])
        if dist2(v, ball.center) >= r2:
            return False, worst
    return True, worst


def curve_tolerance(curve: PLCurve, ball: Ball) -> float:
    """Self-intersection tolerance: 1e-6 ball radii, in the curve's coordinates."""
    return SELF_INTERSECTION_RTOL if curve.frame is not None else float(ball.radius) * SELF_INTERSECTION_RTOL


# configuration


@dataclass(frozen=True, eq=False)
class KnotRecord:
    type_id: KnotTypeId
    pd: PDCode
    curve: PLCurve


@dataclass(eq=False)
class Configuration:
    """Finite window of the construction for one bit array."""

    rows: int
    cols: int
    balls: dict[Index, Ball]
    knots: dict[Index, KnotRecord]
    pq: PQDescriptor
    registry: KnotTypeRegistry = DEFAULT_REGISTRY
    segments_per_crossing: int = 16

    def indices(self) -> list[Index]:
        return [(n, k, l) for n in range(2 * self.rows) for k in range(self.cols) for l in (0, 1)]


@dataclass
class PropertyResult:
    name: str
    passed: bool
    witnesses: list[str] = field(default_factory=list)


@dataclass
class PropertyReport:
    results: list[PropertyResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def __getitem__(self, name: str) -> PropertyResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def failed(self, names: Iterable[str] = ("B1", "B2", "B3", "B4", "B5")) -> list[str]:
        wanted = set(names)
        return [r.name for r in self.results if r.name in wanted and not r.passed]


BOUNDING_RADIUS = Fraction(2)


@lru_cache(maxsize=256)
def _check_b1(balls: tuple[Ball, ...]) -> PropertyResult:
    res = PropertyResult("B1", True)
    for a, b in combinations(balls, 2):
        if dist2(a.center, b.center) <= (a.radius + b.radius) ** 2:
            res.passed = False
            res.witnesses.append(f"balls {a.index} and {b.index} overlap")
    for b in balls:
        if b.radius >= BOUNDING_RADIUS or dist2(b.center, (0, 0, 0)) >= (BOUNDING_RADIUS - b.radius) ** 2:
            res.passed = False
            res.witnesses.append(f"ball {b.index} not inside B(0, {BOUNDING_RADIUS})")
    if res.passed:
        res.witnesses.append(f"{len(balls)} balls pairwise disjoint inside B(0, {BOUNDING_RADIUS})")
    return res


def accumulation_points(rows: int, cols: int) -> dict[str, list[Point]]:
    """Limits of ball centres along sequences with distinct indices, in window.

    n -> oo at fixed k gives (1, 1-2^-k, l); k -> oo at fixed n gives
    (1-2^-n, 1, l); both together give the corners (1, 1, l).
    """
    z = (Fraction(0), ONE)
    return {
        "row": [(ONE, ONE - pow2(-k), l) for k in range(cols) for l in z],
        "column": [(ONE - pow2(-n), ONE, l) for n in range(2 * rows) for l in z],
        "corner": [(ONE, ONE, l) for l in z],
    }


def _check_b2(config: Configuration) -> PropertyResult:
    res = PropertyResult("B2", True)
    pq = config.pq
    limits = accumulation_points(config.rows, config.cols)
    qset = set(pq.q_points)
    for kind, pts in limits.items():
        for p in pts:
            member = p in qset if kind != "corner" else (p in pq.corner_points and pq.on_half_segment(p) is not None)
            if not member:
                res.passed = False
                res.witnesses.append(f"{kind} limit {tuple(map(str, p))} missing from Q")
            for b in config.balls.values():
                if b.contains(p):
                    res.passed = False
                    res.witnesses.append(f"{kind} limit {tuple(map(str, p))} inside ball {b.index}")
    expected = {p for kind in ("row", "column") for p in limits[kind]}
    if qset != expected:
        res.passed = False
        res.witnesses.append("q_points differ from the accumulation points of the grid")
    if res.passed:
        res.witnesses.append(f"{sum(map(len, limits.values()))} accumulation points, all in Q and outside every ball")
    return res


def _check_b3(config: Configuration) -> PropertyResult:
    res = PropertyResult("B3", True)
    pq = config.pq
    qset = set(pq.q_points) | set(pq.corner_points)
    for s in pq.sticks:
        if not (s[0] in qset and s[1] in qset):
            res.passed = False
            res.witnesses.append(f"stick at x={s[0][0]} has an endpoint outside Q")
    for i, s in enumerate(pq.half_segments):
        if not any(pq.on_half_segment(c) == i for c in pq.corner_points):
            res.passed = False
            res.witnesses.append(f"half-segment {i} contains no Q point")
    if pq.on_half_segment(pq.puncture) is not None:
        res.passed = False
        res.witnesses.append("puncture lies in P")
    min_clear = math.inf
    for b in config.balls.values():
        r2 = b.radius**2
        d2 = min(
            [point_vertical_segment_dist2(b.center, s) for s in pq.sticks + pq.half_segments]
            + [dist2(b.center, p) for p in pq.isolated_points]
        )
        if d2 <= r2:
            res.passed = False
            res.witnesses.append(f"ball {b.index} meets P")
        else:
            min_clear = min(min_clear, math.sqrt(d2) - float(b.radius))
    if res.passed:
        res.witnesses.append(f"every P component holds a Q point; min ball clearance from P {min_clear:.6g}")
    return res


def _check_b4(config: Configuration) -> PropertyResult:
    res = PropertyResult("B4", True)
    worst = 0.0
    for idx, ball in config.balls.items():
        rec = config.knots.get(idx)
        if rec is None:
            res.passed = False
            res.witnesses.append(f"ball {idx} carries no knot")
            continue
        inside, rel = curve_inside_open_ball(rec.curve, ball)
        worst = max(worst, rel)
        if not inside:
            res.passed = False
            res.witnesses.append(f"knot in ball {idx} reaches the boundary")
        dmin, pair = rec.curve.self_intersection(curve_tolerance(rec.curve, ball))
        if pair is not None:
            res.passed = False
            res.witnesses.append(f"knot in ball {idx} self-intersects at edges {pair}")
    for idx in config.knots:
        if idx not in config.balls:
            res.passed = False
            res.witnesses.append(f"knot {idx} has no ball")
    if res.passed:
        res.witnesses.append(f"{len(config.knots)} embedded knots, max |v - c| / r = {worst:.6f}")
    return res


def _check_b5(config: Configuration) -> PropertyResult:
    # Removed set is a finite union of PL loops, segments and points: dimension 1 < 3 - 1.
    res = PropertyResult("B5", True)
    for idx, rec in config.knots.items():
        if not np.all(np.isfinite(rec.curve.vertices)):
            res.passed = False
            res.witnesses.append(f"knot {idx} is not a finite PL curve")
    pieces = len(config.knots) + len(config.pq.sticks) + len(config.pq.half_segments) + len(config.pq.isolated_points)
    if res.passed:
        res.witnesses.append(
            f"removed set is {pieces} PL pieces (loops, arcs, points) of dimension <= 1 < 2: complement is path metric"
        )
    return res


def verify_properties(config: Configuration) -> PropertyReport:
    balls = tuple(config.balls[i] for i in sorted(config.balls))
    return PropertyReport(
        [_check_b1(balls), _check_b2(config), _check_b3(config), _check_b4(config), _check_b5(config)]
    )


# complement components


@dataclass(frozen=True)
class ComplementComponent:
    tag: str  # KNOT | STICK | POINT | HALF_LOW | HALF_HIGH
    index: tuple[int, ...]
    geometry: object = field(compare=False, repr=False)

    @property
    def is_singleton(self) -> bool:
        return self.tag == "POINT"


def complement_components(config: Configuration) -> list[ComplementComponent]:
    """Connected components of the removed set (P plus knots) in the window.

    Pieces are merged when they meet (exact test); a component containing a
    knot, a stick, an isolated Q point or a half-segment gets the matching tag.
    """
    report = verify_properties(config)
    bad = report.failed(("B1", "B2", "B3", "B4"))
    if bad:
        raise ConfigurationError(f"component structure undefined: {', '.join(bad)} failed")
    pq = config.pq
    pieces: list[tuple[str, tuple, object]] = []
    for idx in sorted(config.knots):
        pieces.append(("KNOT", idx, config.knots[idx].curve))
    for n, s in enumerate(pq.sticks):
        pieces.append(("STICK", (n,), s))
    for p in pq.q_points:
        pieces.append(("QPOINT", p, p))
    for i, s in enumerate(pq.half_segments):
        pieces.append(("HALF_LOW" if i == 0 else "HALF_HIGH", (), s))

    parent = list(range(len(pieces)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def meets(a, b) -> bool:
        (ta, _, ga), (tb, _, gb) = a, b
        if ta == "KNOT" or tb == "KNOT":
            # knots sit in disjoint open balls that avoid P (B1, B3, B4)
            return False
        half = {"HALF_LOW", "HALF_HIGH"}
        if ta == "QPOINT" and tb == "QPOINT":
            return ga == gb
        if ta == "QPOINT" or tb == "QPOINT":
            p, (tx, seg) = (ga, (tb, gb)) if ta == "QPOINT" else (gb, (ta, ga))
            return point_vertical_segment_dist2(p, seg) == 0 and not (tx in half and p == pq.puncture)
        if ta in half and tb in half:
            # closed halves share only the puncture, which is removed
            return False
        return vertical_segments_dist2(ga, gb) == 0

    for i, j in combinations(range(len(pieces)), 2):
        if meets(pieces[i], pieces[j]) and find(i) != find(j):
            parent[find(i)] = find(j)

    groups: dict[int, list[int]] = {}
    for i in range(len(pieces)):
        groups.setdefault(find(i), []).append(i)
    out: list[ComplementComponent] = []
    cols_of_point = {ONE - pow2(-k): k for k in range(config.cols)}
    for members in groups.values():
        tags = {pieces[i][0] for i in members}
        main = [i for i in members if pieces[i][0] != "QPOINT"]
        if not main:
            (i,) = members
            p = pieces[i][2]
            out.append(ComplementComponent("POINT", (cols_of_point[p[1]], int(p[2])), p))
            continue
        if len(main) != 1:
            raise ConfigurationError(f"pieces {[pieces[i][:2] for i in main]} merged into one component")
        tag, idx, geom = pieces[main[0]]
        if tags - {tag, "QPOINT"}:
            raise ConfigurationError(f"unexpected merge of {sorted(tags)}")
        out.append(ComplementComponent(tag, tuple(idx), geom))
    order = {"KNOT": 0, "STICK": 1, "POINT": 2, "HALF_LOW": 3, "HALF_HIGH": 4}
    out.sort(key=lambda c: (order[c.tag], c.index))
    return out


def expected_component_count(rows: int, cols: int) -> int:
    return 4 * rows * cols + 2 * rows + 2 * cols + 2
