"""Knot invariants used to tell registry types apart.

Two knots with different invariants have non-homeomorphic complements, so
an invariant mismatch certifies that two knot types are distinct.  Within
the torus family T(2, q) the determinant ``q`` is complete.

Chirality is deliberately never used: mirror images count as the same type.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .knots import KnotError, KnotTypeId, PDCode, validate_pd, writhe
from .laurent import LaurentPolynomial

MAX_BRACKET_CROSSINGS = 24

_DELTA = LaurentPolynomial({2: -1, -2: -1}, var="A")


def _join(ends: dict[int, int], x: int, y: int) -> int:
    """Add the arc x--y to the open-path table; return 1 if it closes a loop."""
    if x == y:
        return 1
    px = ends.pop(x, None)
    py = ends.pop(y, None)
    if px is None and py is None:
        ends[x], ends[y] = y, x
    elif py is None:
        ends[px], ends[y] = y, px
    elif px is None:
        ends[py], ends[x] = x, py
    elif px == y:
        return 1
    else:
        ends[px], ends[py] = py, px
    return 0


def _check_bracket_input(pd: PDCode) -> None:
    diag = validate_pd(pd)
    if not diag.ok:
        raise KnotError(diag.first)
    if len(pd) > MAX_BRACKET_CROSSINGS:
        raise KnotError(
            f"state-space overflow: {len(pd)} crossings exceeds the cap of {MAX_BRACKET_CROSSINGS}"
        )


def kauffman_bracket(pd: PDCode) -> LaurentPolynomial:
    """Kauffman bracket in ``A`` (normalised so the round unknot is 1).

    The sum over all 2^c states is accumulated crossing by crossing: states
    that leave the same open-path connectivity on the not-yet-processed
    labels are merged, with their weights kept as ``(A-exponent, loops)``
    counts.  The A-smoothing of ``(a, b, c, d)`` joins a-b and c-d.
    """
    _check_bracket_input(pd)
    if not pd.crossings:
        return LaurentPolynomial.constant(1, var="A")
    states: dict[frozenset, dict[tuple[int, int], int]] = {frozenset(): {(0, 0): 1}}
    for a, b, c, d in pd.crossings:
        nxt: dict[frozenset, dict[tuple[int, int], int]] = {}
        for key, weights in states.items():
            for arcs, step in ((((a, b), (c, d)), 1), (((a, d), (b, c)), -1)):
                ends = {}
                for u, v in key:
                    ends[u], ends[v] = v, u
                closed = sum(_join(ends, x, y) for x, y in arcs)
                new_key = frozenset((u, v) for u, v in ends.items() if u < v)
                target = nxt.setdefault(new_key, defaultdict(int))
                for (e, loops), cnt in weights.items():
                    target[(e + step, loops + closed)] += cnt
        states = nxt
    (final,) = states.values()
    total = LaurentPolynomial(var="A")
    by_loops: dict[int, dict[int, int]] = defaultdict(lambda: defaultdict(int))
    for (e, loops), cnt in final.items():
        by_loops[loops][e] += cnt
    for loops, coeffs in by_loops.items():
        total = total + LaurentPolynomial(coeffs, var="A") * _DELTA ** (loops - 1)
    return total


def jones_polynomial(pd: PDCode) -> LaurentPolynomial:
    """Jones polynomial in ``t``: (-A^3)^(-w) <pd> with A = t^(-1/4).

    Knots always give integral powers of ``t`` so exponents are stored as
    plain integers.
    """
    bracket = kauffman_bracket(pd)
    w = writhe(pd)
    normalised = LaurentPolynomial.monomial(-3 * w, (-1) ** (w % 2), var="A") * bracket
    return normalised.scale_exponents(Fraction(-1, 4), var="t")


def seifert_matrix(q: int) -> list[list[int]]:
    """(q-1)x(q-1) Seifert matrix of T(2, q): -1 on the diagonal, 1 above it."""
    _check_q(q)
    size = q - 1
    return [[-1 if i == j else (1 if j == i + 1 else 0) for j in range(size)] for i in range(size)]


def _check_q(q: int) -> None:
    if q < 3 or q % 2 == 0:
        raise KnotError(f"braid parameter must be odd and >= 3, got {q}")


@lru_cache(maxsize=None)
def alexander_of_two_braid(q: int) -> LaurentPolynomial:
    """Symmetrised Alexander polynomial det(V - t V^T) of T(2, q).

    V - t V^T is tridiagonal with t - 1 on the diagonal and off-diagonal
    product -t, so the determinant is the continuant
    D_i = (t - 1) D_{i-1} + t D_{i-2}, run on integer coefficient vectors.
    """
    _check_q(q)
    size = q - 1
    prev = np.zeros(size + 1, dtype=np.int64)
    cur = np.zeros(size + 1, dtype=np.int64)
    prev[0] = 1
    cur[:2] = (-1, 1)
    for _ in range(1, size):
        nxt = -cur
        nxt[1:] += cur[:-1] + prev[:-1]
        if np.abs(nxt).max() > 2**60:
            raise OverflowError("continuant coefficients out of int64 range")
        prev, cur = cur, nxt
    delta = LaurentPolynomial({e: int(c) for e, c in enumerate(cur)}).symmetrized()
    if delta(1) < 0:
        delta = -delta
    return delta


@lru_cache(maxsize=None)
def knot_determinant(kid: KnotTypeId) -> int:
    """|Alexander(-1)|; equals q for T(2, q)."""
    return abs(alexander_of_two_braid(kid.q)(-1))


def _sparse_abs_det(rows: list[dict[int, Fraction]], ncols: int) -> int:
    # Gaussian elimination on sparse rows; picks the sparsest pivot row per column.
    if len(rows) != ncols:
        raise ValueError("matrix must be square")
    if ncols == 0:
        return 1
    col_rows: dict[int, set[int]] = defaultdict(set)
    for ri, row in enumerate(rows):
        for cj in row:
            col_rows[cj].add(ri)
    remaining = set(range(len(rows)))
    det = Fraction(1)
    for cj in range(ncols):
        candidates = [ri for ri in col_rows[cj] if ri in remaining]
        if not candidates:
            return 0
        piv = min(candidates, key=lambda ri: (len(rows[ri]), ri))
        prow = rows[piv]
        pval = prow[cj]
        det *= pval
        remaining.discard(piv)
        for ri in candidates:
            if ri == piv:
                continue
            row = rows[ri]
            factor = row[cj] / pval
            for ck, v in prow.items():
                nv = row.get(ck, 0) - factor * v
                if nv:
                    row[ck] = nv
                    col_rows[ck].add(ri)
                else:
                    row.pop(ck, None)
                    col_rows[ck].discard(ri)
    return abs(int(det))


@lru_cache(maxsize=4096)
def pd_determinant(pd: PDCode) -> int:
    """Knot determinant read off the diagram's colouring matrix.

    Rows are crossings, columns are over-arcs; each row is
    2*over - under_in - under_out.  Any first minor gives the determinant.
    """
    diag = validate_pd(pd)
    if not diag.ok:
        raise KnotError(diag.first)
    if not pd.crossings:
        return 1
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b, c, d in pd.crossings:
        find(a), find(c)
        parent[find(b)] = find(d)
    arcs = {root: i for i, root in enumerate(sorted({find(x) for x in parent}))}
    rows: list[dict[int, Fraction]] = []
    for a, b, c, d in pd.crossings:
        row: dict[int, Fraction] = defaultdict(Fraction)
        row[arcs[find(b)]] += 2
        row[arcs[find(a)]] -= 1
        row[arcs[find(c)]] -= 1
        rows.append({k: v for k, v in row.items() if v})
    n = len(arcs)
    minor = [{k: v for k, v in r.items() if k < n - 1} for r in rows[: len(rows) - 1]]
    if len(minor) != n - 1:
        raise KnotError("colouring matrix is not square; diagram has unexpected arc count")
    return _sparse_abs_det(minor, n - 1)


@dataclass(frozen=True)
class InvariantCertificate:
    left_id: KnotTypeId
    right_id: KnotTypeId
    witness: str
    left_value: int
    right_value: int
    verdict: str  # "distinct" | "indistinguishable"

    def __post_init__(self):
        if self.verdict == "distinct" and self.left_value == self.right_value:
            raise ValueError("a 'distinct' verdict needs differing witness values")

    def to_json(self) -> dict:
        return {
            "left": self.left_id.index,
            "right": self.right_id.index,
            "witness": self.witness,
            "values": [self.left_value, self.right_value],
            "verdict": self.verdict,
        }


def certify_distinct(a: KnotTypeId, b: KnotTypeId) -> InvariantCertificate:
    da, db = knot_determinant(a), knot_determinant(b)
    verdict = "distinct" if da != db else "indistinguishable"
    return InvariantCertificate(a, b, "determinant", da, db, verdict)
