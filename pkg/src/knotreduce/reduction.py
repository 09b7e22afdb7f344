"""E_1 on truncated bit arrays and the map from bit arrays to configurations.

Row m of a bit array drives ball row n = 2m: a 1 swaps the knot types of
the two balls in every affected capsule.  Odd rows are calibration rows whose
types never depend on the bits.

E_1 itself asks for agreement on all but finitely many rows.  In a finite
window that is vacuous, so equivalence is always reported relative to an
explicit starting row ``m``.  The infinite relation is the limit M -> oo.
"""

from __future__ import annotations

from random import Random
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .construction import (
    Configuration,
    KnotRecord,
    ball_spec,
    embed_knot_in_ball,
    pq_sets,
)
from .invariants import InvariantCertificate, certify_distinct, knot_determinant, pd_determinant
from .knots import DEFAULT_REGISTRY, KnotTypeId, KnotTypeRegistry, torus_knot_pd
from .metrics import CompactSample

Index = tuple[int, int, int]
FLOAT_SLACK = 1e-15


class ReductionError(ValueError):
    pass


class DecodeError(ReductionError):
    pass


class MatchingError(ReductionError):
    pass


@dataclass(frozen=True)
class BitArray:
    bits: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(b) for b in row) for row in self.bits)
        if not rows or not rows[0]:
            raise ValueError("a bit array needs at least one row and one column")
        width = len(rows[0])
        for i, row in enumerate(rows):
            if len(row) != width:
                raise ValueError(f"row {i} has {len(row)} bits, expected {width}")
            if any(b not in (0, 1) for b in row):
                raise ValueError(f"row {i} has a non-binary entry")
        object.__setattr__(self, "bits", rows)

    @property
    def rows(self) -> int:
        return len(self.bits)

    @property
    def cols(self) -> int:
        return len(self.bits[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, mk: tuple[int, int]) -> int:
        m, k = mk
        return self.bits[m][k]

    def flip(self, m: int, k: int) -> "BitArray":
        rows = [list(r) for r in self.bits]
        rows[m][k] ^= 1
        return BitArray(tuple(map(tuple, rows)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitArray":
        return cls(tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def random(cls, rows: int, cols: int, rng: Random) -> "BitArray":
        return cls(tuple(tuple(rng.randint(0, 1) for _ in range(cols)) for _ in range(rows)))

    @classmethod
    def from_int(cls, value: int, rows: int, cols: int) -> "BitArray":
        """Row-major bits of ``value``, most significant first."""
        total = rows * cols
        flat = [(value >> (total - 1 - i)) & 1 for i in range(total)]
        return cls(tuple(tuple(flat[r * cols : (r + 1) * cols]) for r in range(rows)))

    @classmethod
    def parse(cls, text: str) -> "BitArray":
        """One row per line of '0'/'1' characters; '#' comments and blank lines ignored."""
        rows = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if set(line) - {"0", "1"}:
                raise ValueError(f"line {lineno}: expected only 0/1 characters, got {line!r}")
            rows.append(tuple(int(ch) for ch in line))
        if not rows:
            raise ValueError("bit array file contains no rows")
        return cls(tuple(rows))

    def to_text(self) -> str:
        return "".join("".join(map(str, row)) + "\n" for row in self.bits)


def first_differing_row(r: BitArray, s: BitArray) -> Optional[int]:
    _same_shape(r, s)
    return next((m for m in range(r.rows) if r.bits[m] != s.bits[m]), None)


def last_differing_row(r: BitArray, s: BitArray) -> Optional[int]:
    _same_shape(r, s)
    return next((m for m in reversed(range(r.rows)) if r.bits[m] != s.bits[m]), None)


def _same_shape(r: BitArray, s: BitArray) -> None:
    if r.shape != s.shape:
        raise ReductionError(f"shape mismatch: {r.shape} vs {s.shape}")


def e1_equivalent_within(r: BitArray, s: BitArray, m: int) -> bool:
    """True iff rows m..M-1 of ``r`` and ``s`` coincide."""
    _same_shape(r, s)
    if m < 0 or m > r.rows:
        raise ReductionError(f"m must lie in 0..{r.rows}, got {m}")
    return r.bits[m:] == s.bits[m:]


def assign_knot_type(n: int, k: int, l: int, r: BitArray, registry: KnotTypeRegistry = DEFAULT_REGISTRY) -> KnotTypeId:
    if not (0 <= n < 2 * r.rows and 0 <= k < r.cols and l in (0, 1)):
        raise ReductionError(f"index {(n, k, l)} outside the {2 * r.rows}x{r.cols} window")
    if n % 2 == 0 and r[n // 2, k] == 1:
        return registry.type_of(n, k, 1 - l)
    return registry.type_of(n, k, l)


def build_configuration(
    r: BitArray,
    segments_per_crossing: int = 16,
    registry: KnotTypeRegistry = DEFAULT_REGISTRY,
) -> Configuration:
    balls = {}
    knots = {}
    for n in range(2 * r.rows):
        for k in range(r.cols):
            for l in (0, 1):
                ball = ball_spec(n, k, l)
                kid = assign_knot_type(n, k, l, r, registry)
                curve = embed_knot_in_ball(kid, ball, segments_per_crossing)
                balls[(n, k, l)] = ball
                knots[(n, k, l)] = KnotRecord(kid, torus_knot_pd(kid.q), curve)
    return Configuration(r.rows, r.cols, balls, knots, pq_sets(r.rows, r.cols), registry, segments_per_crossing)


def _certified_type(config: Configuration, idx: Index) -> KnotTypeId:
    rec = config.knots[idx]
    det = pd_determinant(rec.pd)
    if det != knot_determinant(rec.type_id):
        raise DecodeError(
            f"type corruption at {idx}: stored index {rec.type_id.index} (q={rec.type_id.q}) "
            f"but the diagram's determinant is {det}"
        )
    return rec.type_id


def decode_configuration(config: Configuration, mode: str = "trusted") -> BitArray:
    """Read the bit array back from the knot types in the even rows.

    ``trusted`` reads the stored type indices.  ``verified`` first recomputes
    every stored diagram's determinant, and also requires each capsule's
    second ball to carry the complementary type and calibration rows to be
    untouched.
    """
    if mode not in ("trusted", "verified"):
        raise ValueError(f"unknown decode mode {mode!r}")
    reg = config.registry
    if mode == "verified":
        types = {idx: _certified_type(config, idx) for idx in sorted(config.knots)}
    else:
        types = {idx: rec.type_id for idx, rec in config.knots.items()}
    bits = []
    for m in range(config.rows):
        row = []
        for k in range(config.cols):
            n = 2 * m
            t0 = types[(n, k, 0)]
            if t0 == reg.type_of(n, k, 0):
                bit = 0
            elif t0 == reg.type_of(n, k, 1):
                bit = 1
            else:
                raise DecodeError(f"unknown type at {(n, k, 0)}: index {t0.index} is not a capsule type")
            if mode == "verified" and types[(n, k, 1)] != reg.type_of(n, k, 1 - bit):
                raise DecodeError(f"type corruption at {(n, k, 1)}: not the capsule complement of {(n, k, 0)}")
            row.append(bit)
        bits.append(tuple(row))
    if mode == "verified":
        for m in range(config.rows):
            for k in range(config.cols):
                for l in (0, 1):
                    if types[(2 * m + 1, k, l)] != reg.type_of(2 * m + 1, k, l):
                        raise DecodeError(f"type corruption at calibration ball {(2 * m + 1, k, l)}")
    return BitArray(tuple(bits))


@dataclass
class Matching:
    rho: dict[Index, Index]
    certificates: dict[Index, InvariantCertificate] = field(default_factory=dict)

    def is_identity(self) -> bool:
        return all(a == b for a, b in self.rho.items())

    def swapped(self) -> list[tuple[int, int]]:
        """Capsules (n, k) whose two balls are exchanged."""
        return sorted({(a[0], a[1]) for a, b in self.rho.items() if a != b})

    def to_json(self) -> dict:
        return {
            "rho": [[list(a), list(self.rho[a])] for a in sorted(self.rho)],
            "certificates": [self.certificates[a].to_json() for a in sorted(self.certificates)],
        }


def match_configurations(c: Configuration, c2: Configuration) -> Matching:
    """The capsule-preserving bijection pairing knots of equal type.

    Each type occurs once per configuration, so the bijection is forced.
    """
    if (c.rows, c.cols) != (c2.rows, c2.cols):
        raise MatchingError(f"shape mismatch: {(c.rows, c.cols)} vs {(c2.rows, c2.cols)}")
    where = {}
    for idx, rec in c2.knots.items():
        if rec.type_id in where:
            raise MatchingError(f"type {rec.type_id.index} occurs twice in the second configuration")
        where[rec.type_id] = idx
    rho: dict[Index, Index] = {}
    certs: dict[Index, InvariantCertificate] = {}
    for idx in sorted(c.knots):
        kid = c.knots[idx].type_id
        target = where.get(kid)
        if target is None:
            raise MatchingError(f"no matching: type {kid.index} at {idx} is absent from the second configuration")
        if target[:2] != idx[:2]:
            raise MatchingError(f"no matching: type {kid.index} moves from capsule {idx[:2]} to {target[:2]}")
        cert = certify_distinct(kid, c2.knots[target].type_id)
        if cert.verdict != "indistinguishable":
            raise MatchingError(f"no matching: certificate for {idx} -> {target} says {cert.verdict}")
        rho[idx] = target
        certs[idx] = cert
    if len(set(rho.values())) != len(rho) or len(rho) != len(c2.knots):
        raise MatchingError("no matching: types do not pair up one to one")
    return Matching(rho, certs)


def configurations_equivalent_within(c: Configuration, c2: Configuration, m: int, mode: str = "trusted") -> bool:
    return e1_equivalent_within(decode_configuration(c, mode), decode_configuration(c2, mode), m)


def continuity_bound(D: int) -> float:
    """Diameter of the largest ball in rows n >= 2D: 2 * 2^(-4(2D+1))."""
    if D < 0:
        raise ValueError("D must be a natural number")
    return 2.0 ** (1 - 4 * (2 * D + 1))


def removed_set_sample(config: Configuration, step: Optional[float] = None) -> CompactSample:
    """Point sample of P plus all knot curves in the window.

    Curves contribute their vertices (resolution: half the longest edge);
    sticks and half-segments are sampled every ``step`` (resolution step/2);
    the puncture is never sampled.
    """
    pieces = [rec.curve.global_vertices() for _, rec in sorted(config.knots.items())]
    # half an edge, plus rounding of tiny curves onto the float grid near 1
    res = max(rec.curve.max_edge() / 2 for rec in config.knots.values()) + FLOAT_SLACK
    if step is None:
        step = 1 / 64
    count = int(np.ceil(1 / step)) + 1
    z = np.linspace(0.0, 1.0, count)
    for (x, y, _), _top in config.pq.sticks:
        pieces.append(np.column_stack([np.full(count, float(x)), np.full(count, float(y)), z]))
    half_count = int(np.ceil(0.5 / step))
    z_low = np.linspace(0.0, 0.5, half_count + 1)[:-1]
    z_high = np.linspace(0.5, 1.0, half_count + 1)[1:]
    for zs in (z_low, z_high):
        pieces.append(np.column_stack([np.ones(len(zs)), np.ones(len(zs)), zs]))
    pieces.append(np.array([[float(c) for c in p] for p in config.pq.isolated_points]))
    # points of a half-segment just below the puncture are a full step from a sample
    seg_res = max(0.5 / (count - 1), 0.5 / half_count)
    return CompactSample(np.vstack(pieces), max(res, seg_res))
