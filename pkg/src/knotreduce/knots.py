"""Planar-diagram codes, the (2, q) torus-knot family and the type registry.

PD convention: each crossing lists its four edge labels counterclockwise,
starting from the incoming under-strand.  Labels run 1..2c and increase
along the knot's orientation.  With this convention every diagram produced
by :func:`torus_knot_pd` has only negative crossings (left-handed torus knots).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .diagnostics import Diagnostics

Crossing = tuple[int, int, int, int]


class KnotError(ValueError):
    """Raised for unsupported knot parameters or malformed diagrams."""


@dataclass(frozen=True)
class PDCode:
    crossings: tuple[Crossing, ...] = ()

    @classmethod
    def of(cls, crossings: Iterable[Sequence[int]]) -> "PDCode":
        return cls(tuple(tuple(int(x) for x in c) for c in crossings))  # type: ignore[misc]

    def __len__(self) -> int:
        return len(self.crossings)

    def to_json(self) -> list[list[int]]:
        return [list(c) for c in self.crossings]


@dataclass(frozen=True, order=True)
class KnotTypeId:
    """A member of the registry family: index ``j`` realised by T(2, 2j+3)."""

    index: int

    def __post_init__(self):
        if self.index < 0:
            raise KnotError(f"type index must be a natural number, got {self.index}")

    @property
    def q(self) -> int:
        return 2 * self.index + 3

    @classmethod
    def from_q(cls, q: int) -> "KnotTypeId":
        if q < 3 or q % 2 == 0:
            raise KnotError(f"braid parameter must be odd and >= 3, got {q}")
        return cls((q - 3) // 2)


def cantor(n: int, k: int) -> int:
    return (n + k) * (n + k + 1) // 2 + k


@dataclass(frozen=True)
class KnotTypeRegistry:
    """Injective map (n, k, l) -> KnotTypeId.

    ``offset`` shifts every index; registries with different offsets describe
    different (partially overlapping) type assignments.
    """

    offset: int = 0
    bijection: str = "cantor"
    family: str = "torus(2,2j+3)"

    def index(self, n: int, k: int, l: int) -> int:
        if n < 0 or k < 0 or l not in (0, 1):
            raise KnotError(f"invalid registry triple {(n, k, l)}")
        return self.offset + 2 * cantor(n, k) + l

    def type_of(self, n: int, k: int, l: int) -> KnotTypeId:
        return KnotTypeId(self.index(n, k, l))

    def to_json(self) -> dict:
        return {"bijection": self.bijection, "family": self.family, "offset": self.offset}

    @classmethod
    def from_json(cls, data: dict) -> "KnotTypeRegistry":
        reg = cls(offset=int(data.get("offset", 0)))
        if data.get("bijection", reg.bijection) != reg.bijection or data.get("family", reg.family) != reg.family:
            raise KnotError(f"unsupported registry {data!r}")
        return reg


DEFAULT_REGISTRY = KnotTypeRegistry()


def registry_type(n: int, k: int, l: int, registry: KnotTypeRegistry = DEFAULT_REGISTRY) -> KnotTypeId:
    return registry.type_of(n, k, l)


@lru_cache(maxsize=None)
def torus_knot_pd(q: int) -> PDCode:
    """PD code of the closed 2-braid sigma_1^q.

    Crossing j is ``(2j+1, 2j+q+1, 2j+2, 2j+q+2)`` with labels taken mod 2q.
    """
    if q % 2 == 0:
        raise KnotError(f"even braid parameter {q} yields a 2-component link")
    if q < 3:
        raise KnotError(f"braid parameter must be >= 3, got {q}")
    m = 2 * q

    def lab(x: int) -> int:
        return (x - 1) % m + 1

    return PDCode(tuple((lab(2 * j + 1), lab(2 * j + q + 1), lab(2 * j + 2), lab(2 * j + q + 2)) for j in range(q)))


def _component_count(pd: PDCode) -> int:
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b, c, d in pd.crossings:
        parent[find(a)] = find(c)
        parent[find(b)] = find(d)
    return len({find(x) for x in parent})


def validate_pd(pd: PDCode) -> Diagnostics:
    """Check label multiplicity and single-component closure."""
    problems: list[str] = []
    for i, c in enumerate(pd.crossings):
        if len(c) != 4 or any(not isinstance(x, int) or x < 1 for x in c):
            problems.append(f"crossing shape: crossing {i} is not four positive labels")
            return Diagnostics(tuple(problems))
    if not pd.crossings:
        return Diagnostics()
    ncross = len(pd.crossings)
    counts = Counter(x for c in pd.crossings for x in c)
    expected = set(range(1, 2 * ncross + 1))
    bad = sorted(x for x in expected | set(counts) if counts.get(x, 0) != 2 or x not in expected)
    if bad:
        problems.append(f"label multiplicity: labels {bad} do not appear exactly twice in 1..{2 * ncross}")
        return Diagnostics(tuple(problems))
    ncomp = _component_count(pd)
    if ncomp != 1:
        problems.append(f"component count: diagram closes into {ncomp} components, expected 1")
    return Diagnostics(tuple(problems))


def crossing_signs(pd: PDCode) -> list[int]:
    """Sign (+1/-1) of every crossing, orienting the knot by tracing from crossing 0.

    Works on occurrences (crossing, slot) rather than labels, so kinks such as
    ``(1, 1, 2, 2)`` are handled.
    """
    diag = validate_pd(pd)
    if not diag.ok:
        raise KnotError(diag.first)
    if not pd.crossings:
        return []
    occurrences: dict[int, list[tuple[int, int]]] = {}
    for ci, c in enumerate(pd.crossings):
        for slot, lab in enumerate(c):
            occurrences.setdefault(lab, []).append((ci, slot))
    partner = {0: 2, 2: 0, 1: 3, 3: 1}
    incoming: set[tuple[int, int]] = set()
    ci, slot = 0, 0
    for _ in range(2 * len(pd.crossings)):
        incoming.add((ci, slot))
        out = (ci, partner[slot])
        lab = pd.crossings[ci][out[1]]
        a, b = occurrences[lab]
        ci, slot = b if a == out else a
    signs = []
    for ci in range(len(pd.crossings)):
        # over-strand leaving through slot 1 means it runs d -> b: positive
        signs.append(1 if (ci, 3) in incoming else -1)
    return signs


def writhe(pd: PDCode) -> int:
    return sum(crossing_signs(pd))
