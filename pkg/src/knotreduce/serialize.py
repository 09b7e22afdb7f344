"""Configuration JSON, exact dyadic decimals and OBJ polyline export."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Iterable, Sequence

import numpy as np

from .construction import (
    PUNCTURE,
    Ball,
    Configuration,
    KnotRecord,
    PLCurve,
    PQDescriptor,
)
from .knots import KnotError, KnotTypeId, KnotTypeRegistry, PDCode


class FormatError(ValueError):
    """Input file does not follow the configuration format."""


def dyadic_str(x: Fraction) -> str:
    """Exact decimal expansion of a dyadic rational."""
    x = Fraction(x)
    den = x.denominator
    e = den.bit_length() - 1
    if den != 1 << e:
        raise ValueError(f"{x} is not dyadic")
    if e == 0:
        return str(x.numerator)
    sign = "-" if x < 0 else ""
    digits = str(abs(x.numerator) * 5**e).rjust(e + 1, "0")
    whole, frac = digits[:-e], digits[-e:].rstrip("0")
    return f"{sign}{whole}.{frac}" if frac else f"{sign}{whole}"


def parse_dyadic(s: Any) -> Fraction:
    if not isinstance(s, (str, int)) or isinstance(s, bool):
        raise FormatError(f"expected a decimal string, got {s!r}")
    try:
        value = Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad decimal {s!r}") from exc
    d = value.denominator
    if d & (d - 1):
        raise FormatError(f"{s!r} is not a dyadic rational")
    return value


def _point_strs(p: Iterable[Fraction]) -> list[str]:
    return [dyadic_str(c) for c in p]


def config_to_dict(config: Configuration) -> dict:
    balls = []
    for idx in sorted(config.balls):
        b = config.balls[idx]
        rec = config.knots[idx]
        balls.append(
            {
                "n": b.n,
                "k": b.k,
                "l": b.l,
                "center": _point_strs(b.center),
                "radius": dyadic_str(b.radius),
                "knot": {
                    "type_index": rec.type_id.index,
                    "q": rec.type_id.q,
                    "pd_code": rec.pd.to_json(),
                    "curve": rec.curve.vertices.tolist(),
                },
            }
        )
    return {
        "rows": config.rows,
        "cols": config.cols,
        "registry": config.registry.to_json(),
        "balls": balls,
        "pq": {
            "q_points": [_point_strs(p) for p in config.pq.q_points],
            "sticks": [[_point_strs(a), _point_strs(b)] for a, b in config.pq.sticks],
            "puncture": [1, 1, 0.5],
        },
    }


def config_to_json(config: Configuration) -> str:
    return json.dumps(config_to_dict(config), separators=(",", ":")) + "\n"


def _require(obj: Any, key: str, kind: type | tuple[type, ...]):
    if not isinstance(obj, dict) or key not in obj:
        raise FormatError(f"missing key {key!r}")
    value = obj[key]
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        raise FormatError(f"key {key!r} has the wrong type")
    return value


def _point(raw: Any) -> tuple[Fraction, Fraction, Fraction]:
    if not isinstance(raw, list) or len(raw) != 3:
        raise FormatError(f"expected a 3-element point, got {raw!r}")
    return tuple(parse_dyadic(c) for c in raw)  # type: ignore[return-value]


def config_from_dict(data: Any) -> Configuration:
    rows = _require(data, "rows", int)
    cols = _require(data, "cols", int)
    if rows < 1 or cols < 1:
        raise FormatError("rows and cols must be positive")
    try:
        registry = KnotTypeRegistry.from_json(_require(data, "registry", dict))
    except (KnotError, ValueError, TypeError) as exc:
        raise FormatError(str(exc)) from exc
    balls = {}
    knots = {}
    segs = set()
    for entry in _require(data, "balls", list):
        n, k, l = (_require(entry, key, int) for key in ("n", "k", "l"))
        ball = Ball(n, k, l, _point(_require(entry, "center", list)), parse_dyadic(_require(entry, "radius", str)))
        knot = _require(entry, "knot", dict)
        try:
            kid = KnotTypeId(_require(knot, "type_index", int))
            q = _require(knot, "q", int)
            if q != kid.q:
                raise FormatError(f"ball {(n, k, l)}: q={q} disagrees with type index {kid.index}")
            pd = PDCode.of(_require(knot, "pd_code", list))
            curve = PLCurve(np.array(_require(knot, "curve", list), dtype=float), frame=ball)
        except (KnotError, ValueError, TypeError) as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"ball {(n, k, l)}: {exc}") from exc
        if (n, k, l) in balls:
            raise FormatError(f"duplicate ball {(n, k, l)}")
        balls[(n, k, l)] = ball
        knots[(n, k, l)] = KnotRecord(kid, pd, curve)
        segs.add(len(curve) // max(q, 1))
    pq_raw = _require(data, "pq", dict)
    q_points = tuple(_point(p) for p in _require(pq_raw, "q_points", list))
    sticks = []
    for s in _require(pq_raw, "sticks", list):
        if not isinstance(s, list) or len(s) != 2:
            raise FormatError("a stick is a pair of points")
        sticks.append((_point(s[0]), _point(s[1])))
    puncture = tuple(Fraction(str(c)) for c in _require(pq_raw, "puncture", list))
    if puncture != PUNCTURE:
        raise FormatError(f"puncture must be [1, 1, 0.5], got {pq_raw['puncture']!r}")
    pq = PQDescriptor(rows, cols, q_points, tuple(sticks))
    return Configuration(rows, cols, balls, knots, pq, registry, segs.pop() if len(segs) == 1 else 0)


def config_from_json(text: str) -> Configuration:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    return config_from_dict(data)


def load_configuration(path: str) -> Configuration:
    with open(path, encoding="utf-8") as fh:
        return config_from_json(fh.read())


def save_configuration(config: Configuration, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(config_to_json(config))


def parse_point_cloud(text: str) -> np.ndarray:
    """'x y z' per line; '#' starts a comment."""
    pts = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise FormatError(f"line {lineno}: expected 3 coordinates, got {len(parts)}")
        try:
            pts.append([float(v) for v in parts])
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
    if not pts:
        raise FormatError("point cloud is empty")
    return np.array(pts)


def obj_polylines(named: Sequence[tuple[str, np.ndarray]], header: str = "") -> str:
    """Wavefront OBJ with one object per closed polyline."""
    lines = [f"# {header}"] if header else []
    base = 1
    for name, verts in named:
        lines.append(f"o {name}")
        for x, y, z in verts:
            lines.append(f"v {x:.17g} {y:.17g} {z:.17g}")
        idx = " ".join(str(base + i) for i in range(len(verts)))
        lines.append(f"l {idx} {base}")
        base += len(verts)
    return "\n".join(lines) + "\n"


def config_to_obj(config: Configuration) -> str:
    named = [(f"knot_{n}_{k}_{l}", config.knots[(n, k, l)].curve.global_vertices()) for n, k, l in sorted(config.knots)]
    return obj_polylines(named, header=f"configuration {config.rows}x{config.cols}")
