"""Command-line front end.

Exit codes: 0 success / equivalent, 1 semantic negative (inequivalent,
verification failed, corrupted types), 2 usage, I/O or format errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .chains import build_order_configuration
from .construction import (
    ConfigurationError,
    EmbeddingError,
    complement_components,
    expected_component_count,
    verify_properties,
)
from .invariants import MAX_BRACKET_CROSSINGS, alexander_of_two_braid, jones_polynomial, knot_determinant
from .knots import KnotError, KnotTypeId, KnotTypeRegistry, torus_knot_pd
from .metrics import CompactSample, hausdorff_distance
from .reduction import (
    BitArray,
    DecodeError,
    MatchingError,
    build_configuration,
    decode_configuration,
    e1_equivalent_within,
    first_differing_row,
    match_configurations,
    removed_set_sample,
)
from .serialize import (
    FormatError,
    config_from_json,
    config_to_json,
    config_to_obj,
    load_configuration,
    parse_point_cloud,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # one-line diagnostic, exit 2
        raise UsageError(message)


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="knotreduce", description="E_1 to homeomorphism reduction at finite truncation.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="bit array file -> configuration JSON")
    b.add_argument("--bits", required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--segments", type=int, default=16, help="curve vertices per crossing (>= 8)")
    b.add_argument("--registry-offset", type=int, default=0)

    d = sub.add_parser("decode", help="print the bit array encoded by a configuration")
    d.add_argument("--config", required=True)
    d.add_argument("--verified", action="store_true", help="recompute every knot determinant")

    c = sub.add_parser("compare", help="E_1 shadow: do two configurations agree from row m on?")
    c.add_argument("--a", required=True)
    c.add_argument("--b", required=True)
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--verified", action="store_true")
    c.add_argument("--matching", help="write the knot-type matching JSON here")

    i = sub.add_parser("invariant", help="determinant, Alexander and Jones of a registry type")
    g = i.add_mutually_exclusive_group(required=True)
    g.add_argument("--q", type=int)
    g.add_argument("--type-index", type=int)

    v = sub.add_parser("verify", help="check B1-B5 and the component census")
    v.add_argument("--config", required=True)

    h = sub.add_parser("distance", help="Hausdorff distance of removed sets or point clouds")
    h.add_argument("--a", required=True)
    h.add_argument("--b", required=True)
    h.add_argument("--step", type=float, default=1 / 64, help="sampling step for P in configurations")
    h.add_argument("--resolution", type=float, default=0.0, help="resolution assigned to raw point clouds")

    e = sub.add_parser("export", help="write knot curves (or an order's chains) as OBJ polylines")
    src = e.add_mutually_exclusive_group(required=True)
    src.add_argument("--config")
    src.add_argument("--order", help="comma-separated permutation, least element first")
    e.add_argument("--out", required=True)
    return p


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _sample(path: str, step: float, resolution: float) -> CompactSample:
    text = _read(path)
    if path.endswith(".json") or text.lstrip().startswith("{"):
        return removed_set_sample(config_from_json(text), step)
    return CompactSample(parse_point_cloud(text), resolution)


def _cmd_build(args, out) -> int:
    bits = BitArray.parse(_read(args.bits))
    config = build_configuration(bits, args.segments, KnotTypeRegistry(offset=args.registry_offset))
    _write(args.out, config_to_json(config))
    print(f"wrote {args.out}: {bits.rows}x{bits.cols} bits, {len(config.knots)} knots", file=out)
    return 0


def _cmd_decode(args, out) -> int:
    config = load_configuration(args.config)
    out.write(decode_configuration(config, "verified" if args.verified else "trusted").to_text())
    return 0


def _cmd_compare(args, out) -> int:
    a, b = load_configuration(args.a), load_configuration(args.b)
    mode = "verified" if args.verified else "trusted"
    ra, rb = decode_configuration(a, mode), decode_configuration(b, mode)
    if ra.shape != rb.shape:
        raise UsageError(f"shape mismatch: {ra.shape} vs {rb.shape}")
    if not 0 <= args.m <= ra.rows:
        raise UsageError(f"--m must lie in 0..{ra.rows}")
    if args.matching:
        try:
            _write(args.matching, json.dumps(match_configurations(a, b).to_json()) + "\n")
        except MatchingError as exc:
            _write(args.matching, json.dumps({"error": str(exc)}) + "\n")
    same = e1_equivalent_within(ra, rb, args.m)
    first = first_differing_row(ra, rb)
    print("equivalent" if same else "inequivalent", file=out)
    print(f"first differing row: {'none' if first is None else first}", file=out)
    return 0 if same else 1


def _cmd_invariant(args, out) -> int:
    kid = KnotTypeId.from_q(args.q) if args.q is not None else KnotTypeId(args.type_index)
    print(f"type index: {kid.index}", file=out)
    print(f"q: {kid.q}", file=out)
    print(f"determinant: {knot_determinant(kid)}", file=out)
    print(f"alexander: {json.dumps(alexander_of_two_braid(kid.q).to_json())}", file=out)
    if kid.q <= MAX_BRACKET_CROSSINGS:
        print(f"jones: {json.dumps(jones_polynomial(torus_knot_pd(kid.q)).to_json())}", file=out)
    else:
        print(f"jones: unavailable (more than {MAX_BRACKET_CROSSINGS} crossings)", file=out)
    return 0


def _cmd_verify(args, out) -> int:
    config = load_configuration(args.config)
    report = verify_properties(config)
    for r in report.results:
        print(f"{r.name}: {'pass' if r.passed else 'FAIL'}: {'; '.join(r.witnesses)}", file=out)
    ok = report.passed
    expected = expected_component_count(config.rows, config.cols)
    try:
        comps = complement_components(config)
        census = len(comps) == expected
        print(f"components: {'pass' if census else 'FAIL'}: {len(comps)} found, {expected} expected", file=out)
    except ConfigurationError as exc:
        census = False
        print(f"components: FAIL: {exc}", file=out)
    return 0 if ok and census else 1


def _cmd_distance(args, out) -> int:
    if args.step <= 0 or args.resolution < 0:
        raise UsageError("--step must be positive and --resolution non-negative")
    a = _sample(args.a, args.step, args.resolution)
    b = _sample(args.b, args.step, args.resolution)
    d, err = hausdorff_distance(a, b)
    print(f"distance: {d:.12f}", file=out)
    print(f"error bound: {err:.12f}", file=out)
    return 0


def _cmd_export(args, out) -> int:
    if args.config:
        text = config_to_obj(load_configuration(args.config))
    else:
        try:
            order = [int(x) for x in args.order.split(",")]
        except ValueError as exc:
            raise UsageError(f"bad --order: {exc}") from exc
        text = build_order_configuration(order).to_obj()
    _write(args.out, text)
    print(f"wrote {args.out}", file=out)
    return 0


COMMANDS = {
    "build": _cmd_build,
    "decode": _cmd_decode,
    "compare": _cmd_compare,
    "invariant": _cmd_invariant,
    "verify": _cmd_verify,
    "distance": _cmd_distance,
    "export": _cmd_export,
}


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (DecodeError, MatchingError) as exc:
        print(f"error: {exc}", file=err)
        return 1
    except (UsageError, FormatError, KnotError, EmbeddingError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
