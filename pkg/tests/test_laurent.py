from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from knotreduce.laurent import LaurentPolynomial as L

polys = st.dictionaries(st.integers(-8, 8), st.integers(-5, 5), max_size=6).map(L)


def test_zero_coefficients_dropped():
    p = L({2: 0, -1: 3})
    assert p.coeffs == {-1: 3}
    assert L({0: 0}).is_zero


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == L()


def test_negative_power_of_monomial():
    x = L.monomial(1)
    assert x**-3 == L.monomial(-3)
    assert (-x) ** 3 == L.monomial(3, -1)
    with pytest.raises(ValueError):
        (x + 1) ** -1


def test_evaluation_is_exact():
    p = L({-2: 1, 1: -1})
    assert p(2) == Fraction(1, 4) - 2
    assert p(-1) == 2


def test_scale_and_symmetrize():
    p = L({0: 1, 1: -1, 2: 1})
    assert p.symmetrized() == L({-1: 1, 0: -1, 1: 1})
    assert p.symmetrized().is_symmetric
    assert L({4: 1, -8: 2}, var="A").scale_exponents(Fraction(-1, 4), var="t") == L({-1: 1, 2: 2})


def test_display_and_json():
    p = L({-1: 1, -3: 1, -4: -1})
    assert str(p) == "t^-1 + t^-3 - t^-4"
    assert L.from_json(p.to_json()) == p
    assert str(L()) == "0"
