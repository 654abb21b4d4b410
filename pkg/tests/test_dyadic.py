import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ispcf.exact.dyadic import Dyadic, ZERO, ONE, HALF, round_down, round_up


def test_canonical_form():
    d = Dyadic(4, 0)
    assert (d.m, d.e) == (1, 2)
    assert (Dyadic(0, 17).m, Dyadic(0, 17).e) == (0, 0)
    assert (Dyadic(12, -5).m, Dyadic(12, -5).e) == (3, -3)


def test_arith_matches_fractions():
    rng = random.Random(0)
    for _ in range(2000):
        a = Dyadic(rng.randint(-999, 999), rng.randint(-12, 12))
        b = Dyadic(rng.randint(-999, 999), rng.randint(-12, 12))
        fa, fb = a.as_fraction(), b.as_fraction()
        assert (a + b).as_fraction() == fa + fb
        assert (a - b).as_fraction() == fa - fb
        assert (a * b).as_fraction() == fa * fb
        assert (-a).as_fraction() == -fa
        assert (a < b) == (fa < fb)
        assert (a <= b) == (fa <= fb)
        assert (a == b) == (fa == fb)


@given(st.integers(min_value=-10**12, max_value=10**12),
       st.integers(min_value=-60, max_value=60))
def test_str_parse_roundtrip(m, e):
    d = Dyadic(m, e)
    assert Dyadic.parse(str(d)) == d


def test_from_fraction():
    assert Dyadic.from_fraction(Fraction(3, 8)) == Dyadic(3, -3)
    with pytest.raises(ValueError):
        Dyadic.from_fraction(Fraction(1, 3))


def test_rounding():
    q = Fraction(1, 3)
    lo = round_down(q, 8)
    hi = round_up(q, 8)
    assert lo.as_fraction() <= q <= hi.as_fraction()
    assert hi.as_fraction() - lo.as_fraction() == Fraction(1, 256)
    # exact values round to themselves
    assert round_down(Fraction(5, 8), 8) == round_up(Fraction(5, 8), 8)


def test_constants():
    assert ZERO.is_zero()
    assert float(ONE) == 1.0
    assert HALF.as_fraction() == Fraction(1, 2)
    assert ONE.sign() == 1 and (-ONE).sign() == -1 and ZERO.sign() == 0
