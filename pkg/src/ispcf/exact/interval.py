"""Closed real intervals with dyadic endpoints, plus a bottom element.

This is the runtime value domain for reals.  Ordering is by reverse
inclusion (wider = less information); the bottom element is identified
with the whole line [-oo, +oo].  add/sub/mul/neg are exact on dyadic
endpoints; division and the transcendental enclosures round outward to
a requested precision.

Transcendental enclosures are delegated to mpmath's directed-rounding
interval kernels (libmpi) at an adaptive working precision; the width
contract (slack <= 2^-k over the true image) is enforced by raising the
working precision with the magnitude of the result, and is checked
against an independent high-precision point oracle in the test suite.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from mpmath.libmp import from_man_exp, fzero, finf, fninf
import mpmath.libmp.libmpi as _mpi

from .dyadic import Dyadic, ZERO, round_down, round_up, grid_down, grid_up

# endpoint value None encodes -oo (lo) / +oo (hi)
End = Optional[Dyadic]


class Interval:
    """Immutable by convention; construct fresh values instead of
    mutating."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: End, hi: End):
        if lo is not None and hi is not None and lo._cmp(hi) > 0:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    @property
    def is_bottom(self) -> bool:
        return self.lo is None and self.hi is None

    @staticmethod
    def point(d: Dyadic) -> "Interval":
        return Interval(d, d)

    @staticmethod
    def from_fractions(lo: Fraction, hi: Fraction, frac_bits: int = 64) -> "Interval":
        """Smallest enclosing interval on the 2^-frac_bits grid."""
        return Interval(round_down(lo, frac_bits), round_up(hi, frac_bits))

    # -- queries

    def width(self) -> Optional[Fraction]:
        """None if unbounded on either side."""
        if self.lo is None or self.hi is None:
            return None
        return (self.hi - self.lo).as_fraction()

    def midpoint(self) -> Dyadic:
        if self.lo is None or self.hi is None:
            raise ValueError("midpoint of unbounded interval")
        s = self.lo + self.hi
        return Dyadic(s.m, s.e - 1)

    def contains(self, q: Fraction) -> bool:
        if self.lo is not None and q < self.lo.as_fraction():
            return False
        if self.hi is not None and q > self.hi.as_fraction():
            return False
        return True

    def refines(self, other: "Interval") -> bool:
        """self carries at least as much information (self subseteq other)."""
        if other.lo is not None and (self.lo is None or self.lo < other.lo):
            return False
        if other.hi is not None and (self.hi is None or self.hi > other.hi):
            return False
        return True

    def straddles_zero(self) -> bool:
        lo_le0 = self.lo is None or self.lo.m <= 0
        hi_ge0 = self.hi is None or self.hi.m >= 0
        return lo_le0 and hi_ge0

    def intersect(self, other: "Interval") -> "Interval":
        lo = self.lo if other.lo is None else (
            other.lo if self.lo is None else max(self.lo, other.lo))
        hi = self.hi if other.hi is None else (
            other.hi if self.hi is None else min(self.hi, other.hi))
        if lo is not None and hi is not None and lo > hi:
            raise RuntimeError(f"disjoint enclosures {self} and {other}")
        return Interval(lo, hi)

    def __eq__(self, other):
        if not isinstance(other, Interval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "inf" if self.hi is None else str(self.hi)
        return f"[{lo}, {hi}]"

    def key(self):
        """Sortable/hashable encoding, used for valuation normalization."""
        lo = (self.lo.m, self.lo.e) if self.lo is not None else (None,)
        hi = (self.hi.m, self.hi.e) if self.hi is not None else (None,)
        return (lo, hi)


BOTTOM = Interval(None, None)


def abs_lower(iv: Interval) -> Dyadic:
    """Distance of the interval from 0 on its near side; 0 if it straddles.

    This is the weight a score step contributes.
    """
    if iv.lo is not None and iv.lo.m > 0:
        return iv.lo
    if iv.hi is not None and iv.hi.m < 0:
        return -iv.hi
    return ZERO


# ---------------------------------------------------------------------------
# arithmetic


def iv_neg(i: Interval) -> Interval:
    if i.is_bottom:
        return BOTTOM
    return Interval(None if i.hi is None else -i.hi,
                    None if i.lo is None else -i.lo)


def iv_add(i: Interval, j: Interval) -> Interval:
    if i.is_bottom or j.is_bottom:
        return BOTTOM
    lo = None if (i.lo is None or j.lo is None) else i.lo + j.lo
    hi = None if (i.hi is None or j.hi is None) else i.hi + j.hi
    return Interval(lo, hi)


def iv_sub(i: Interval, j: Interval) -> Interval:
    return iv_add(i, iv_neg(j))


def _mul_finite(a: Dyadic, b: Dyadic, c: Dyadic, d: Dyadic) -> Interval:
    # sign-split endpoint selection for [a,b] * [c,d], all finite
    if a.m >= 0:
        if c.m >= 0:
            return Interval(a * c, b * d)
        if d.m <= 0:
            return Interval(b * c, a * d)
        return Interval(b * c, b * d)
    if b.m <= 0:
        if c.m >= 0:
            return Interval(a * d, b * c)
        if d.m <= 0:
            return Interval(b * d, a * c)
        return Interval(a * d, a * c)
    if c.m >= 0:
        return Interval(a * d, b * d)
    if d.m <= 0:
        return Interval(b * c, a * c)
    lo1, lo2 = a * d, b * c
    hi1, hi2 = a * c, b * d
    return Interval(lo1 if lo1._cmp(lo2) <= 0 else lo2,
                    hi1 if hi1._cmp(hi2) >= 0 else hi2)


def _mul_candidates(i: Interval, j: Interval):
    # endpoints as (dyadic, inf_sign): inf_sign -1/+1 only when dyadic is None
    # 0 * inf = 0, which keeps the result the closure of the image of the
    # finite parts
    ends_i = [(i.lo, -1), (i.hi, +1)]
    ends_j = [(j.lo, -1), (j.hi, +1)]
    for (a, sa) in ends_i:
        for (b, sb) in ends_j:
            if a is not None and b is not None:
                yield (a * b, 0)
            elif a is not None:  # b infinite
                if a.m == 0:
                    yield (ZERO, 0)
                else:
                    yield (None, a.sign() * sb)
            elif b is not None:
                if b.m == 0:
                    yield (ZERO, 0)
                else:
                    yield (None, b.sign() * sa)
            else:
                yield (None, sa * sb)


def iv_mul(i: Interval, j: Interval) -> Interval:
    if i.is_bottom or j.is_bottom:
        return BOTTOM
    if i.lo is not None and i.hi is not None and j.lo is not None \
            and j.hi is not None:
        return _mul_finite(i.lo, i.hi, j.lo, j.hi)
    lo = hi = None
    lo_inf = hi_inf = False
    for val, inf_sign in _mul_candidates(i, j):
        if val is None:
            if inf_sign < 0:
                lo_inf = True
            else:
                hi_inf = True
        else:
            if lo is None or val < lo:
                lo = val
            if hi is None or val > hi:
                hi = val
    return Interval(None if lo_inf else lo, None if hi_inf else hi)


def _div_round(x: Dyadic, y: Dyadic, frac_bits: int, up: bool) -> Dyadic:
    """x / y rounded to the 2^-frac_bits grid, downward or upward."""
    s = x.e - y.e + frac_bits
    num = x.m << s if s >= 0 else x.m
    den = y.m << -s if s < 0 else y.m
    if den < 0:
        num, den = -num, -den
    q = -((-num) // den) if up else num // den
    return Dyadic(q, -frac_bits)


def iv_div(i: Interval, j: Interval, prec: int = 64) -> Interval:
    """Outward-rounded quotient; bottom when the divisor can be 0."""
    if i.is_bottom or j.is_bottom or j.straddles_zero():
        return BOTTOM
    a, b, c, d = i.lo, i.hi, j.lo, j.hi
    if a is not None and b is not None and c is not None and d is not None:
        # divisor sign is constant; pick the two extreme quotients
        if c.m > 0:
            lo = _div_round(a, d if a.m >= 0 else c, prec, up=False)
            hi = _div_round(b, c if b.m >= 0 else d, prec, up=True)
        else:
            lo = _div_round(b, d if b.m >= 0 else c, prec, up=False)
            hi = _div_round(a, c if a.m >= 0 else d, prec, up=True)
        return Interval(lo, hi)
    # unbounded endpoints: fall back to rational candidates
    cands: list[tuple[Optional[Fraction], int]] = []
    for (x, sx) in [(a, -1), (b, +1)]:
        for (y, sy) in [(c, -1), (d, +1)]:
            if y is None:
                # dividing by +-infinity: contributes 0
                cands.append((Fraction(0), 0))
            elif x is None:
                cands.append((None, sx * y.sign()))
            else:
                cands.append((x.as_fraction() / y.as_fraction(), 0))
    lo_inf = any(s < 0 for v, s in cands if v is None)
    hi_inf = any(s > 0 for v, s in cands if v is None)
    finite = [v for v, _ in cands if v is not None]
    lo = None if lo_inf else round_down(min(finite), prec)
    hi = None if hi_inf else round_up(max(finite), prec)
    return Interval(lo, hi)


def iv_arith(op: str, i: Interval, j: Interval, prec: int = 64) -> Interval:
    if op == "add":
        return iv_add(i, j)
    if op == "sub":
        return iv_sub(i, j)
    if op == "mul":
        return iv_mul(i, j)
    if op == "div":
        return iv_div(i, j, prec)
    if op == "neg":
        return iv_neg(i)
    raise ValueError(f"unknown arithmetic op {op!r}")


# ---------------------------------------------------------------------------
# transcendental enclosures


def _to_raw(d: End, which: int):
    if d is None:
        return fninf if which < 0 else finf
    if d.m == 0:
        return fzero
    return from_man_exp(d.m, d.e)


def _from_raw(x) -> End:
    sign, man, exp, bc = x
    if man == 0:
        if x == fzero:
            return ZERO
        return None  # +-infinity
    m = int(man)
    return Dyadic(-m if sign else m, exp)


def _magnitude_exp(x) -> int:
    sign, man, exp, bc = x
    if man == 0:
        return 0
    return exp + bc


_MPI_FUNCS = {
    "sin": _mpi.mpi_sin,
    "cos": _mpi.mpi_cos,
    "tan": _mpi.mpi_tan,
    "exp": _mpi.mpi_exp,
    "log": _mpi.mpi_log,
    "sqrt": _mpi.mpi_sqrt,
    "arctan": _mpi.mpi_atan,
}

PRIMITIVE_NAMES = ("sin", "cos", "tan", "exp", "log", "sqrt", "arctan", "pi")


def _run_adaptive(fn, raw, k: int) -> Interval:
    """Run an interval kernel, then snap outward to the 2^-(k+8) grid.

    The working precision scales with the result's magnitude so the
    rounding error stays below the absolute 2^-k slack contract; the
    grid snap makes results canonical, which keeps the operation
    monotone in the information order (kernel endpoints may wobble a
    few ulps between nearby inputs, far below one grid step).
    """
    wp = k + 32
    res = fn(raw, wp)
    mag = max(_magnitude_exp(res[0]), _magnitude_exp(res[1]))
    if mag > 0:
        res = fn(raw, wp + mag)
    lo, hi = _from_raw(res[0]), _from_raw(res[1])
    if lo is None and hi is None:
        return BOTTOM
    if lo is not None:
        lo = grid_down(lo, k + 8)
    if hi is not None:
        hi = grid_up(hi, k + 8)
    return Interval(lo, hi)


def iv_pi(k: int) -> Interval:
    res = _mpi.mpi_pi(k + 16)
    return Interval(_from_raw(res[0]), _from_raw(res[1]))


def iv_primitive(name: str, i: Optional[Interval], k: int = 64) -> Interval:
    """Sound enclosure of the named function's image, width slack <= 2^-k.

    Any input reaching strictly below a partial function's domain gives
    bottom (this is what keeps the operation monotone in the
    information order); an input whose lower endpoint sits exactly on
    the boundary keeps its honest unbounded end, e.g. log of [0, b] is
    [-oo, log b].  An interval across a tan pole collapses to bottom,
    i.e. the whole line.
    """
    if name == "pi":
        return iv_pi(k)
    if i is None:
        raise ValueError(f"{name} needs an interval argument")
    if i.is_bottom:
        return BOTTOM
    if name in ("log", "sqrt") and (i.lo is None or i.lo.m < 0):
        return BOTTOM
    fn = _MPI_FUNCS[name]
    raw = (_to_raw(i.lo, -1), _to_raw(i.hi, +1))
    return _run_adaptive(fn, raw, k)
