import math
import random
from fractions import Fraction

import mpmath
import pytest

from ispcf.exact.dyadic import Dyadic, ZERO
from ispcf.exact.interval import (
    Interval, BOTTOM, abs_lower, iv_arith, iv_add, iv_sub, iv_mul, iv_div,
    iv_neg, iv_primitive, iv_pi,
)


def iv(a, b, scale=0):
    return Interval(Dyadic(a, scale), Dyadic(b, scale))


def test_add_example():
    assert iv_add(iv(1, 2), iv(3, 4)) == iv(4, 6)


def test_mul_example_brute_force():
    # oracle: min/max over endpoint products
    cases = [((-1, 2), (3, 4)), ((-3, -1), (-2, 5)), ((0, 0), (-7, 9))]
    for (a, b), (c, d) in cases:
        got = iv_mul(iv(a, b), iv(c, d))
        prods = [x * y for x in (a, b) for y in (c, d)]
        assert got == iv(min(prods), max(prods))


def test_mul_fuzz_brute_force():
    rng = random.Random(5)
    for _ in range(4000):
        a, b = sorted(rng.randint(-50, 50) for _ in range(2))
        c, d = sorted(rng.randint(-50, 50) for _ in range(2))
        got = iv_mul(iv(a, b, -3), iv(c, d, -3))
        prods = [Fraction(x * y, 64) for x in (a, b) for y in (c, d)]
        assert got.lo.as_fraction() == min(prods)
        assert got.hi.as_fraction() == max(prods)


def test_div_straddle_is_bottom():
    assert iv_div(iv(1, 1), iv(-1, 1)).is_bottom
    assert iv_div(iv(1, 1), iv(0, 2)).is_bottom
    assert iv_arith("div", iv(1, 1), iv(-1, 1)).is_bottom


def test_div_encloses_rational_quotients():
    rng = random.Random(6)
    for _ in range(2000):
        a, b = sorted(rng.randint(-40, 40) for _ in range(2))
        c, d = sorted(x for x in (rng.randint(1, 40), rng.randint(1, 40)))
        if rng.random() < 0.5:
            c, d = -d, -c
        got = iv_div(iv(a, b), iv(c, d), 40)
        qs = [Fraction(x, y) for x in (a, b) for y in (c, d)]
        assert got.lo.as_fraction() <= min(qs)
        assert got.hi.as_fraction() >= max(qs)
        assert got.lo.as_fraction() >= min(qs) - Fraction(1, 1 << 40)
        assert got.hi.as_fraction() <= max(qs) + Fraction(1, 1 << 40)


def test_bottom_absorbs():
    for op in ("add", "sub", "mul", "div", "neg"):
        assert iv_arith(op, BOTTOM, iv(1, 2)).is_bottom
    assert iv_add(iv(1, 2), BOTTOM).is_bottom


def test_unbounded_endpoints():
    half_line = Interval(None, Dyadic(3))
    assert iv_add(half_line, iv(1, 1)).lo is None
    assert iv_add(half_line, iv(1, 1)).hi == Dyadic(4)
    assert iv_neg(half_line) == Interval(Dyadic(-3), None)
    assert iv_mul(iv(0, 0), half_line) == iv(0, 0)


def test_abs_lower_examples():
    assert abs_lower(iv(-3, -2)) == Dyadic(2)
    assert abs_lower(iv(-1, 2)) == ZERO
    assert abs_lower(BOTTOM) == ZERO
    assert abs_lower(iv(5, 9)) == Dyadic(5)
    assert abs_lower(Interval(Dyadic(2), None)) == Dyadic(2)
    assert abs_lower(Interval(None, Dyadic(-4))) == Dyadic(4)


def test_abs_lower_monotone_in_information():
    rng = random.Random(9)
    for _ in range(1000):
        a, b = sorted(rng.randint(-60, 60) for _ in range(2))
        inner_lo = rng.randint(a, b)
        inner_hi = rng.randint(inner_lo, b)
        wide = iv(a, b, -2)
        narrow = iv(inner_lo, inner_hi, -2)
        assert abs_lower(narrow) >= abs_lower(wide)


def test_exp_at_zero():
    r = iv_primitive("exp", Interval.point(ZERO), 20)
    assert r.contains(Fraction(1))
    assert r.width() <= Fraction(1, 1 << 20)


def test_log_domain_handling():
    # any reach strictly below the domain is bottom (this is the
    # monotone reading of the extension; the lower endpoint may still
    # sit exactly on the boundary)
    assert iv_primitive("log", iv(-1, 1), 20).is_bottom
    assert iv_primitive("log", iv(-2, -1), 20).is_bottom
    assert iv_primitive("log", iv(-2, 0), 20).is_bottom
    # log on [0, b] keeps its honest unbounded lower end
    r2 = iv_primitive("log", iv(0, 3), 20)
    assert r2.lo is None and r2.hi.as_fraction() >= Fraction(10986, 10000)
    # the degenerate boundary point has no defined value at all
    assert iv_primitive("log", iv(0, 0), 20).is_bottom


def test_sqrt_example():
    r = iv_primitive("sqrt", iv(4, 9), 30)
    assert r.lo.as_fraction() <= 2 <= 3 <= r.hi.as_fraction()
    assert r.hi.as_fraction() - r.lo.as_fraction() \
        <= 1 + Fraction(1, 1 << 30)
    assert iv_primitive("sqrt", iv(-2, -1), 20).is_bottom
    assert iv_primitive("sqrt", iv(-1, 4), 20).is_bottom
    touch = iv_primitive("sqrt", iv(0, 4), 20)
    assert touch.lo == ZERO and touch.hi.as_fraction() >= 2


def test_tan_pole_is_bottom():
    assert iv_primitive("tan", iv(1, 2), 20).is_bottom
    fine = iv_primitive("tan", iv(0, 1), 20)
    assert not fine.is_bottom


def test_pi_enclosure():
    r = iv_pi(40)
    pi = Fraction(
        3141592653589793238462643383279502884197, 10 ** 39)
    assert r.contains(pi)
    assert r.width() <= Fraction(1, 1 << 40)


_DOMAINS = {
    "sin": (-20, 20), "cos": (-20, 20), "exp": (-30, 5),
    "arctan": (-50, 50), "log": (Fraction(1, 1000), 50),
    "sqrt": (0, 50), "tan": (Fraction(-15, 10), Fraction(15, 10)),
}

_MP = {"sin": mpmath.sin, "cos": mpmath.cos, "tan": mpmath.tan,
       "exp": mpmath.exp, "log": mpmath.log, "sqrt": mpmath.sqrt,
       "arctan": mpmath.atan}


@pytest.mark.parametrize("name", sorted(_DOMAINS))
def test_soundness_against_high_precision_points(name):
    """The independent oracle: evaluate at 128-bit precision at random
    in-domain rationals and check containment."""
    lo, hi = _DOMAINS[name]
    rng = random.Random(hash(name) & 0xFFFF)
    with mpmath.workprec(128):
        for _ in range(700):
            q = Fraction(rng.randint(0, 10 ** 6), 10 ** 6)
            x = Fraction(lo) + q * (Fraction(hi) - Fraction(lo))
            k = rng.choice((8, 16, 24, 40))
            point = Interval.from_fractions(x, x, 80)
            enc = iv_primitive(name, point, k)
            val = _MP[name](mpmath.mpf(x.numerator) / x.denominator)
            v = mpmath.mpf(val)
            # exact rational bounds via mpf -> man/exp
            sign, man, exp, bc = v._mpf_
            fv = Fraction(int(man) * (-1 if sign else 1)) * \
                Fraction(2) ** exp
            slack = Fraction(1, 1 << 100)
            assert enc.lo is None or enc.lo.as_fraction() <= fv + slack
            assert enc.hi is None or enc.hi.as_fraction() >= fv - slack


@pytest.mark.parametrize("name", sorted(_DOMAINS))
def test_width_slack(name):
    lo, hi = _DOMAINS[name]
    rng = random.Random(1 + (hash(name) & 0xFFFF))
    for _ in range(150):
        q = Fraction(rng.randint(0, 10 ** 6), 10 ** 6)
        x = Fraction(lo) + q * (Fraction(hi) - Fraction(lo))
        for k in (10, 30, 50):
            enc = iv_primitive(name, Interval.from_fractions(x, x, 80), k)
            w = enc.width()
            assert w is not None
            # point input: image width ~ width of the argument enclosure
            # times the derivative; the 2^-k slack bound dominates here
            assert w <= Fraction(1, 1 << (k - 2))


def test_information_order_monotonicity():
    rng = random.Random(11)
    ops = ["add", "sub", "mul", "div"]
    for _ in range(1500):
        a, b = sorted(rng.randint(-40, 40) for _ in range(2))
        c, d = sorted(rng.randint(-40, 40) for _ in range(2))
        # narrower versions
        a2 = rng.randint(a, b); b2 = rng.randint(a2, b)
        c2 = rng.randint(c, d); d2 = rng.randint(c2, d)
        i, i2 = iv(a, b, -2), iv(a2, b2, -2)
        j, j2 = iv(c, d, -2), iv(c2, d2, -2)
        for op in ops:
            wide = iv_arith(op, i, j, 24)
            narrow = iv_arith(op, i2, j2, 24)
            assert wide.is_bottom or narrow.refines(wide)


def test_primitive_monotonicity_in_information():
    rng = random.Random(12)
    for name in ("sin", "exp", "log", "sqrt", "arctan", "cos", "tan"):
        for _ in range(250):
            a, b = sorted(rng.randint(-300, 300) for _ in range(2))
            a2 = rng.randint(a, b); b2 = rng.randint(a2, b)
            wide = iv_primitive(name, iv(a, b, -6), 24)
            narrow = iv_primitive(name, iv(a2, b2, -6), 24)
            assert wide.is_bottom or narrow.refines(wide)


def test_midpoint_and_keys():
    i = iv(1, 2)
    assert i.midpoint() == Dyadic(3, -1)
    assert iv(1, 2).key() == iv(1, 2).key()
    assert iv(1, 2).key() != iv(1, 3).key()
    with pytest.raises(ValueError):
        Interval(Dyadic(2), Dyadic(1))
