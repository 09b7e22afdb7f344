import json
from fractions import Fraction as F

import numpy as np
import pytest

from knotreduce.construction import verify_properties
from knotreduce.reduction import BitArray, build_configuration, decode_configuration
from knotreduce.serialize import (
    FormatError,
    config_from_json,
    config_to_json,
    config_to_obj,
    dyadic_str,
    parse_dyadic,
    parse_point_cloud,
)


@pytest.mark.parametrize("x", [F(0), F(1), F(-3, 4), F(1, 2**128), F(255, 256), F(7)])
def test_dyadic_round_trip(x):
    assert parse_dyadic(dyadic_str(x)) == x


def test_dyadic_rejects():
    with pytest.raises(ValueError):
        dyadic_str(F(1, 3))
    for bad in ["0.1x", "1/3", 0.5, True]:
        with pytest.raises(FormatError):
            parse_dyadic(bad)


def test_json_round_trip_is_byte_stable():
    c = build_configuration(BitArray.parse("10\n01\n11\n"))
    text = config_to_json(c)
    back = config_from_json(text)
    assert config_to_json(back) == text
    assert decode_configuration(back, "verified") == decode_configuration(c)
    assert verify_properties(back).passed
    assert back.balls[(5, 1, 1)].radius == F(1, 2**48)


def test_json_layout():
    data = json.loads(config_to_json(build_configuration(BitArray.parse("1\n"))))
    assert list(data) == ["rows", "cols", "registry", "balls", "pq"]
    ball = data["balls"][0]
    assert ball["center"] == ["0", "0", "0"] and ball["radius"] == "0.0625"
    assert ball["knot"]["q"] == 5 and ball["knot"]["type_index"] == 1
    assert data["pq"]["puncture"] == [1, 1, 0.5]
    curve = np.array(ball["knot"]["curve"])
    assert np.linalg.norm(curve, axis=1).max() < 1


@pytest.mark.parametrize(
    "mutate,msg",
    [
        (lambda d: d.pop("rows"), "rows"),
        (lambda d: d.update(rows=0), "positive"),
        (lambda d: d["balls"][0].update(radius="0.1"), "dyadic"),
        (lambda d: d["balls"][0]["knot"].update(q=7), "disagrees"),
        (lambda d: d["pq"].update(puncture=[1, 1, 0.25]), "puncture"),
        (lambda d: d["balls"].append(d["balls"][0]), "duplicate"),
        (lambda d: d["balls"][0]["knot"].update(curve=[[0, 0, 0]]), "ball"),
    ],
)
def test_format_errors(mutate, msg):
    data = json.loads(config_to_json(build_configuration(BitArray.parse("1\n"))))
    mutate(data)
    with pytest.raises(FormatError, match=msg):
        config_from_json(json.dumps(data))


def test_invalid_json():
    with pytest.raises(FormatError, match="invalid JSON"):
        config_from_json("{")


def test_point_cloud_parser():
    pts = parse_point_cloud("# c\n0 0 0\n1 2 3  # x\n\n")
    assert pts.tolist() == [[0, 0, 0], [1, 2, 3]]
    with pytest.raises(FormatError):
        parse_point_cloud("1 2\n")
    with pytest.raises(FormatError):
        parse_point_cloud("# nothing\n")


def test_obj_export():
    c = build_configuration(BitArray.parse("0\n"))
    text = config_to_obj(c)
    lines = text.splitlines()
    assert sum(l.startswith("o knot_") for l in lines) == 4
    assert sum(l.startswith("v ") for l in lines) == sum(len(r.curve) for r in c.knots.values())
    assert "o knot_0_0_0" in lines
