import pytest

from knotreduce.construction import KnotRecord
from knotreduce.knots import DEFAULT_REGISTRY, KnotTypeId, KnotTypeRegistry, registry_type, torus_knot_pd
from knotreduce.metrics import hausdorff_distance
from knotreduce.reduction import (
    BitArray,
    DecodeError,
    MatchingError,
    ReductionError,
    assign_knot_type,
    build_configuration,
    configurations_equivalent_within,
    continuity_bound,
    decode_configuration,
    e1_equivalent_within,
    first_differing_row,
    last_differing_row,
    match_configurations,
    removed_set_sample,
)


def _bits(*rows: str) -> BitArray:
    return BitArray.parse("\n".join(rows))


def test_bitarray_parse_and_text():
    r = BitArray.parse("# header\n10\n\n01  # trailing\n")
    assert r.bits == ((1, 0), (0, 1))
    assert r.to_text() == "10\n01\n"
    for bad in ["", "12\n", "10\n1\n", "# only\n"]:
        with pytest.raises(ValueError):
            BitArray.parse(bad)


def test_bitarray_from_int():
    assert BitArray.from_int(0b1001, 2, 2).bits == ((1, 0), (0, 1))


def test_e1_examples():
    r = _bits("10", "01", "11")
    assert e1_equivalent_within(r, r, 0)
    s = r.flip(0, 1)
    assert e1_equivalent_within(r, s, 1) and not e1_equivalent_within(r, s, 0)
    u = r.flip(2, 0)
    assert not any(e1_equivalent_within(r, u, m) for m in range(3))
    assert e1_equivalent_within(r, u, 3)
    assert first_differing_row(r, s) == 0 and last_differing_row(r, u) == 2
    assert first_differing_row(r, r) is None
    with pytest.raises(ReductionError):
        e1_equivalent_within(r, _bits("1", "0", "1"), 0)
    with pytest.raises(ReductionError):
        e1_equivalent_within(r, r, 4)


def test_assign_examples():
    r = BitArray.zeros(2, 4).flip(1, 3)
    for k in range(4):
        for l in (0, 1):
            assert assign_knot_type(1, k, l, r) == registry_type(1, k, l)
            assert assign_knot_type(1, k, l, r.flip(0, k)) == registry_type(1, k, l)
    assert assign_knot_type(2, 3, 0, r) == registry_type(2, 3, 1)
    assert assign_knot_type(0, 0, 1, r) == registry_type(0, 0, 1)
    with pytest.raises(ReductionError):
        assign_knot_type(4, 0, 0, r)


def test_build_example():
    c = build_configuration(_bits("10"))
    assert c.knots[(0, 0, 0)].type_id == registry_type(0, 0, 1)
    assert c.knots[(0, 1, 0)].type_id == registry_type(0, 1, 0)
    for k in range(2):
        for l in (0, 1):
            assert c.knots[(1, k, l)].type_id == registry_type(1, k, l)
    assert decode_configuration(c).bits == ((1, 0),)


def test_round_trip_exhaustive_small():
    for rows, cols in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1)]:
        for v in range(2 ** (rows * cols)):
            r = BitArray.from_int(v, rows, cols)
            c = build_configuration(r)
            assert decode_configuration(c) == r
            assert decode_configuration(c, "verified") == r


def test_round_trip_random(rng):
    for _ in range(30):
        r = BitArray.random(rng.randint(1, 4), rng.randint(1, 4), rng)
        assert decode_configuration(build_configuration(r), "verified") == r


def test_hand_swap_flips_bit():
    r = _bits("01", "10")
    c = build_configuration(r)
    c.knots[(2, 1, 0)], c.knots[(2, 1, 1)] = c.knots[(2, 1, 1)], c.knots[(2, 1, 0)]
    assert decode_configuration(c) == r.flip(1, 1)


def test_tampered_index_is_type_corruption():
    c = build_configuration(_bits("01"))
    rec = c.knots[(0, 1, 0)]
    c.knots[(0, 1, 0)] = KnotRecord(KnotTypeId(rec.type_id.index ^ 1), rec.pd, rec.curve)
    with pytest.raises(DecodeError, match="type corruption"):
        decode_configuration(c, "verified")
    # trusted mode believes the index: the bit flips
    assert decode_configuration(c) == _bits("00")


def test_calibration_tamper_detected():
    c = build_configuration(_bits("0"))
    rec = c.knots[(1, 0, 0)]
    other = c.knots[(1, 0, 1)]
    c.knots[(1, 0, 0)] = KnotRecord(other.type_id, other.pd, rec.curve)
    assert decode_configuration(c) == _bits("0")
    with pytest.raises(DecodeError, match="calibration"):
        decode_configuration(c, "verified")


def test_unknown_type():
    c = build_configuration(_bits("0"))
    rec = c.knots[(0, 0, 0)]
    kid = KnotTypeId(60)
    c.knots[(0, 0, 0)] = KnotRecord(kid, torus_knot_pd(kid.q), rec.curve)
    with pytest.raises(DecodeError, match="unknown type"):
        decode_configuration(c, "verified")


def test_matching():
    r = _bits("10", "01")
    c = build_configuration(r)
    m = match_configurations(c, build_configuration(r))
    assert m.is_identity() and len(m.rho) == 16
    assert all(cert.verdict == "indistinguishable" for cert in m.certificates.values())
    m = match_configurations(c, build_configuration(r.flip(0, 0)))
    assert m.swapped() == [(0, 0)]
    assert m.rho[(0, 0, 0)] == (0, 0, 1) and m.rho[(0, 0, 1)] == (0, 0, 0)
    assert sum(a != b for a, b in m.rho.items()) == 2
    with pytest.raises(MatchingError, match="no matching"):
        match_configurations(c, build_configuration(r, registry=KnotTypeRegistry(offset=50)))


def test_matching_coherence(rng):
    for _ in range(10):
        rows, cols = rng.randint(1, 3), rng.randint(1, 3)
        r, s = BitArray.random(rows, cols, rng), BitArray.random(rows, cols, rng)
        c, c2 = build_configuration(r), build_configuration(s)
        m = match_configurations(c, c2)
        swaps = set(m.swapped())
        s_dec = decode_configuration(c2)
        for mm in range(rows):
            for k in range(cols):
                assert r[mm, k] == s_dec[mm, k] ^ ((2 * mm, k) in swaps)
        assert all((n, k) not in swaps for n, k in swaps if n % 2)


def test_equivalence_shadow_examples():
    r = _bits("10", "01")
    c = build_configuration(r)
    assert configurations_equivalent_within(c, build_configuration(r), 0)
    c2 = build_configuration(r.flip(0, 1))
    assert configurations_equivalent_within(c, c2, 1)
    assert not configurations_equivalent_within(c, c2, 0)
    c3 = build_configuration(r.flip(0, 0).flip(1, 0))
    assert not any(configurations_equivalent_within(c, c3, m) for m in range(2))


def test_calibration_rigidity(rng):
    base = build_configuration(BitArray.zeros(3, 2))
    for _ in range(5):
        other = build_configuration(BitArray.random(3, 2, rng))
        for idx, rec in base.knots.items():
            if idx[0] % 2:
                assert other.knots[idx].type_id == rec.type_id


def test_continuity_bound():
    assert continuity_bound(0) == 0.125
    assert continuity_bound(1) == 2.0**-11
    assert all(continuity_bound(d + 1) < continuity_bound(d) for d in range(9))
    with pytest.raises(ValueError):
        continuity_bound(-1)


def test_continuity_empirical_row_one():
    r = _bits("01", "00")
    s = r.flip(1, 0).flip(1, 1)
    a, b = removed_set_sample(build_configuration(r)), removed_set_sample(build_configuration(s))
    d, err = hausdorff_distance(a, b)
    assert 0 < d <= continuity_bound(1) + err


def test_continuity_row_zero_is_not_small():
    r = _bits("0")
    step = 2.0**-12
    d, err = hausdorff_distance(
        removed_set_sample(build_configuration(r), step), removed_set_sample(build_configuration(r.flip(0, 0)), step)
    )
    assert d <= continuity_bound(0) + err
    assert d > continuity_bound(1) + err


def test_removed_set_sample_avoids_puncture():
    s = removed_set_sample(build_configuration(_bits("0")))
    dist = ((s.points - [1.0, 1.0, 0.5]) ** 2).sum(axis=1) ** 0.5
    assert dist.min() > 0
    assert s.resolution >= 1 / 128


def test_default_registry_used():
    assert build_configuration(_bits("0")).registry == DEFAULT_REGISTRY
