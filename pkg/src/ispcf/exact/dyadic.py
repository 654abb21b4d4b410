"""Exact dyadic numbers m * 2^e with arbitrary-precision mantissa.

Dyadics are the endpoint type of the interval domain: closed under
addition, subtraction and multiplication, and dense in the reals, so
every rounding step elsewhere can round to a dyadic grid exactly.
Instances are immutable by convention; arithmetic returns fresh values.
"""

from __future__ import annotations

from fractions import Fraction


class Dyadic:
    """m * 2^e in canonical form: m odd, or m == 0 and e == 0."""

    __slots__ = ("m", "e")

    def __init__(self, m: int, e: int = 0):
        if not m & 1:
            if m == 0:
                e = 0
            else:
                shift = (m & -m).bit_length() - 1
                m >>= shift
                e += shift
        self.m = m
        self.e = e

    # -- constructors

    @staticmethod
    def from_int(n: int) -> "Dyadic":
        return Dyadic(n, 0)

    @staticmethod
    def from_fraction(q: Fraction) -> "Dyadic":
        """Exact conversion; raises ValueError if q is not dyadic."""
        d = q.denominator
        if d & (d - 1):
            raise ValueError(f"{q} is not a dyadic rational")
        return Dyadic(q.numerator, -(d.bit_length() - 1))

    # -- queries

    def as_fraction(self) -> Fraction:
        if self.e >= 0:
            return Fraction(self.m << self.e, 1)
        return Fraction(self.m, 1 << -self.e)

    def __float__(self) -> float:
        try:
            return self.m * 2.0 ** self.e
        except OverflowError:
            return float(self.as_fraction())

    def sign(self) -> int:
        return (self.m > 0) - (self.m < 0)

    def is_zero(self) -> bool:
        return self.m == 0

    # -- arithmetic (exact)

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.m, self.e)

    def __add__(self, other: "Dyadic") -> "Dyadic":
        e1, e2 = self.e, other.e
        if e1 >= e2:
            return Dyadic((self.m << (e1 - e2)) + other.m, e2)
        return Dyadic(self.m + (other.m << (e2 - e1)), e1)

    def __sub__(self, other: "Dyadic") -> "Dyadic":
        e1, e2 = self.e, other.e
        if e1 >= e2:
            return Dyadic((self.m << (e1 - e2)) - other.m, e2)
        return Dyadic(self.m - (other.m << (e2 - e1)), e1)

    def __mul__(self, other: "Dyadic") -> "Dyadic":
        return Dyadic(self.m * other.m, self.e + other.e)

    # -- order (allocation-free)

    def _cmp(self, other: "Dyadic") -> int:
        e1, e2 = self.e, other.e
        if e1 >= e2:
            lhs = self.m << (e1 - e2)
            rhs = other.m
        else:
            lhs = self.m
            rhs = other.m << (e2 - e1)
        return (lhs > rhs) - (lhs < rhs)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if not isinstance(other, Dyadic):
            return NotImplemented
        return self.m == other.m and self.e == other.e

    def __hash__(self):
        return hash((self.m, self.e))

    def __repr__(self):
        return f"Dyadic({self.m}, {self.e})"

    def __str__(self):
        return f"{self.m}*2^{self.e}"

    @staticmethod
    def parse(s: str) -> "Dyadic":
        """Inverse of str(): 'm*2^e'."""
        m, _, e = s.partition("*2^")
        if not e:
            return Dyadic(int(m), 0)
        return Dyadic(int(m), int(e))


ZERO = Dyadic(0)
ONE = Dyadic(1)
HALF = Dyadic(1, -1)


def grid_down(d: Dyadic, frac_bits: int) -> Dyadic:
    """Largest multiple of 2^-frac_bits that is <= d."""
    shift = -frac_bits - d.e
    if shift <= 0:
        return d
    return Dyadic(d.m >> shift, -frac_bits)


def grid_up(d: Dyadic, frac_bits: int) -> Dyadic:
    """Smallest multiple of 2^-frac_bits that is >= d."""
    shift = -frac_bits - d.e
    if shift <= 0:
        return d
    return Dyadic(-((-d.m) >> shift), -frac_bits)


def round_down(q: Fraction, frac_bits: int) -> Dyadic:
    """Largest multiple of 2^-frac_bits that is <= q."""
    scaled = q * (1 << frac_bits)
    return Dyadic(scaled.numerator // scaled.denominator, -frac_bits)


def round_up(q: Fraction, frac_bits: int) -> Dyadic:
    """Smallest multiple of 2^-frac_bits that is >= q."""
    scaled = q * (1 << frac_bits)
    return Dyadic(-((-scaled.numerator) // scaled.denominator), -frac_bits)
