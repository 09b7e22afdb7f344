import io
import json
import subprocess
import sys

import pytest

from knotreduce.cli import run
from knotreduce.reduction import BitArray


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def built(tmp_path):
    bits = tmp_path / "r.txt"
    bits.write_text("# two rows\n10\n\n01\n")
    conf = tmp_path / "c.json"
    assert cli("build", "--bits", str(bits), "--out", str(conf))[0] == 0
    return tmp_path, bits, conf


def test_build_decode_round_trip(built):
    _, _, conf = built
    code, out, _ = cli("decode", "--config", str(conf))
    assert code == 0 and out == "10\n01\n"
    assert cli("decode", "--config", str(conf), "--verified")[1] == "10\n01\n"


def test_round_trip_random_files(tmp_path, rng):
    for i in range(5):
        r = BitArray.random(rng.randint(1, 3), rng.randint(1, 3), rng)
        (tmp_path / f"r{i}.txt").write_text(r.to_text())
        cli("build", "--bits", str(tmp_path / f"r{i}.txt"), "--out", str(tmp_path / f"c{i}.json"))
        assert cli("decode", "--config", str(tmp_path / f"c{i}.json"))[1] == r.to_text()


def test_build_is_deterministic(built):
    tmp, bits, conf = built
    other = tmp / "again.json"
    cli("build", "--bits", str(bits), "--out", str(other))
    assert conf.read_bytes() == other.read_bytes()


def test_compare(built):
    tmp, bits, conf = built
    code, out, _ = cli("compare", "--a", str(conf), "--b", str(conf), "--m", "0")
    assert code == 0 and out.splitlines() == ["equivalent", "first differing row: none"]
    (tmp / "s.txt").write_text("00\n01\n")
    cli("build", "--bits", str(tmp / "s.txt"), "--out", str(tmp / "d.json"))
    code, out, _ = cli("compare", "--a", str(conf), "--b", str(tmp / "d.json"), "--m", "0")
    assert code == 1 and out.splitlines() == ["inequivalent", "first differing row: 0"]
    match = tmp / "m.json"
    code, _, _ = cli("compare", "--a", str(conf), "--b", str(tmp / "d.json"), "--m", "1", "--matching", str(match))
    assert code == 0
    rho = json.loads(match.read_text())["rho"]
    assert [[0, 0, 0], [0, 0, 1]] in rho


def test_invariant():
    code, out, _ = cli("invariant", "--q", "3")
    lines = dict(l.split(": ", 1) for l in out.splitlines())
    assert code == 0 and lines["determinant"] == "3"
    assert json.loads(lines["alexander"]) == {"-1": 1, "0": -1, "1": 1}
    assert json.loads(lines["jones"]) == {"-4": -1, "-3": 1, "-1": 1}
    code, out, _ = cli("invariant", "--type-index", "40")
    assert code == 0 and "determinant: 83" in out and "jones: unavailable" in out


def test_verify(built):
    tmp, _, conf = built
    code, out, _ = cli("verify", "--config", str(conf))
    assert code == 0
    assert [l.split(":")[0] for l in out.splitlines()] == ["B1", "B2", "B3", "B4", "B5", "components"]
    data = json.loads(conf.read_text())
    data["balls"][0]["radius"] = "0.5"
    bad = tmp / "bad.json"
    bad.write_text(json.dumps(data))
    code, out, _ = cli("verify", "--config", str(bad))
    assert code == 1 and "B1: FAIL" in out and "components: FAIL" in out


def test_distance(built, tmp_path):
    _, _, conf = built
    code, out, _ = cli("distance", "--a", str(conf), "--b", str(conf))
    assert code == 0 and out.splitlines()[0] == "distance: 0.000000000000"
    a, b = tmp_path / "a.xyz", tmp_path / "b.xyz"
    a.write_text("0 0 0\n")
    b.write_text("0 3 4\n")
    code, out, _ = cli("distance", "--a", str(a), "--b", str(b), "--resolution", "0.5")
    assert code == 0 and out.splitlines() == ["distance: 5.000000000000", "error bound: 1.000000000000"]


def test_export(built, tmp_path):
    _, _, conf = built
    obj = tmp_path / "k.obj"
    assert cli("export", "--config", str(conf), "--out", str(obj))[0] == 0
    assert obj.read_text().count("\no knot_") == 16
    assert cli("export", "--order", "2,0,1", "--out", str(obj))[0] == 0
    assert "order 2 < 0 < 1" in obj.read_text()


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["build", "--bits", "/nonexistent/r.txt", "--out", "/tmp/x.json"],
        ["decode"],
        ["decode", "--config", "/nonexistent.json"],
        ["invariant", "--q", "4"],
        ["invariant", "--q", "3", "--type-index", "0"],
        ["export", "--order", "0,0", "--out", "/tmp/x.obj"],
        ["export", "--order", "a,b", "--out", "/tmp/x.obj"],
    ],
)
def test_usage_and_io_errors_exit_2(argv):
    code, out, err = cli(*argv)
    assert code == 2
    assert err.startswith("error: ") and err.count("\n") == 1


def test_format_errors_exit_2(built):
    tmp, _, conf = built
    junk = tmp / "junk.json"
    junk.write_text("{not json")
    assert cli("decode", "--config", str(junk))[0] == 2
    bits = tmp / "bad.txt"
    bits.write_text("102\n")
    assert cli("build", "--bits", str(bits), "--out", str(tmp / "o.json"))[0] == 2
    assert cli("build", "--bits", str(tmp / "r.txt"), "--out", str(tmp / "o.json"), "--segments", "2")[0] == 2
    assert cli("compare", "--a", str(conf), "--b", str(conf), "--m", "9")[0] == 2


def test_shape_mismatch_exit_2(built):
    tmp, _, conf = built
    (tmp / "one.txt").write_text("1\n")
    cli("build", "--bits", str(tmp / "one.txt"), "--out", str(tmp / "one.json"))
    assert cli("compare", "--a", str(conf), "--b", str(tmp / "one.json"), "--m", "0")[0] == 2


def test_type_corruption_exit_1(built):
    tmp, _, conf = built
    data = json.loads(conf.read_text())
    data["balls"][0]["knot"]["type_index"] = 3
    data["balls"][0]["knot"]["q"] = 9
    bad = tmp / "tampered.json"
    bad.write_text(json.dumps(data))
    code, _, err = cli("decode", "--config", str(bad), "--verified")
    assert code == 1 and "type corruption" in err


def test_help_exits_0():
    assert cli("--help")[0] == 0
    assert cli("build", "--help")[0] == 0


def test_console_entry_point(built):
    _, _, conf = built
    proc = subprocess.run(
        [sys.executable, "-m", "knotreduce", "decode", "--config", str(conf)], capture_output=True, text=True
    )
    assert proc.returncode == 0 and proc.stdout == "10\n01\n"
