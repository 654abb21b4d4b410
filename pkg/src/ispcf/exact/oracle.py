"""Refinable exact reals: monotone precision -> interval oracles.

Every runtime real is one of these.  Literals are exact (constant)
oracles; sampled values are stream-backed; compound reals are lazy DAG
nodes that query their children at slightly higher precision and cache
the best enclosure seen so far (intersecting, so refinement is monotone
by construction).  Sign tests and binary-digit extraction refine on a
doubling precision schedule up to a bit budget, surfacing an explicit
undecided state instead of diverging.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .dyadic import Dyadic, HALF
from .interval import (
    Interval, BOTTOM, iv_arith, iv_primitive, iv_pi,
)
from .base import RealOracle
from .bits import num_prefix, pair_index

DEFAULT_BUDGET = 1 << 16
_PAD = 2  # extra child precision per DAG level


class ExactReal(RealOracle):
    """Constant oracle around a fixed interval (real literals)."""

    exact = True
    __slots__ = ("interval",)

    def __init__(self, interval: Interval):
        super().__init__()
        self.interval = interval

    def _compute(self, k: int) -> Interval:
        return self.interval

    def query(self, k: int) -> Interval:
        return self.interval


def exact_real(iv: Interval) -> ExactReal:
    return ExactReal(iv)


class ArithReal(RealOracle):
    __slots__ = ("op", "left", "right")

    def __init__(self, op: str, left: RealOracle, right: Optional[RealOracle]):
        super().__init__()
        self.op = op
        self.left = left
        self.right = right

    def _compute(self, k: int) -> Interval:
        a = self.left.query(k + _PAD)
        b = self.right.query(k + _PAD) if self.right is not None else None
        return iv_arith(self.op, a, b, k + _PAD)


class PrimReal(RealOracle):
    __slots__ = ("name", "arg")

    def __init__(self, name: str, arg: RealOracle):
        super().__init__()
        self.name = name
        self.arg = arg

    def _compute(self, k: int) -> Interval:
        return iv_primitive(self.name, self.arg.query(k + _PAD), k)


class PiReal(RealOracle):
    __slots__ = ()

    def _compute(self, k: int) -> Interval:
        return iv_pi(k)


# ---------------------------------------------------------------------------
# sign decisions


def _schedule(budget: int, start: int = 4):
    k = start
    while k < budget:
        yield k
        k <<= 1
    yield budget


class Sign:
    POSITIVE = 1
    NEGATIVE = -1
    UNDECIDED = 0


def decide_sign(x: RealOracle, budget: int = DEFAULT_BUDGET):
    """(sign, certain): sign 0 means the test stays undetermined.

    certain=True with sign 0 means the value provably straddles or hits
    0 (the semantic bottom of a sign test), as opposed to running out
    of budget.
    """
    for k in _schedule(budget):
        iv = x.query(k)
        if iv.lo is not None and iv.lo.m > 0:
            return Sign.POSITIVE, True
        if iv.hi is not None and iv.hi.m < 0:
            return Sign.NEGATIVE, True
        if x.exact or (iv.lo is not None and iv.lo == iv.hi):
            return Sign.UNDECIDED, True
    return Sign.UNDECIDED, False


def pos_decide(x: RealOracle, budget: int = DEFAULT_BUDGET) -> Optional[bool]:
    """True / False / None(undecided) sign test, per the runtime's pos."""
    sign, _certain = decide_sign(x, budget)
    if sign == Sign.POSITIVE:
        return True
    if sign == Sign.NEGATIVE:
        return False
    return None


def compare(x: RealOracle, cutoff: Fraction, budget: int = DEFAULT_BUDGET):
    """Sign of x - cutoff for a rational cutoff; (sign, certain)."""
    for k in _schedule(budget):
        iv = x.query(k)
        if iv.lo is not None and iv.lo.as_fraction() > cutoff:
            return Sign.POSITIVE, True
        if iv.hi is not None and iv.hi.as_fraction() < cutoff:
            return Sign.NEGATIVE, True
        if x.exact or (iv.lo is not None and iv.lo == iv.hi):
            return Sign.UNDECIDED, True
    return Sign.UNDECIDED, False


# ---------------------------------------------------------------------------
# binary expansion and demultiplexing


class BinExpansion:
    """Lazily decided binary digits of a real, as in the digit-emitting
    doubling recursion: after t digits forming the integer M_t, digit t
    compares 2^t*x - M_t against 1/2; exact hits stay undecided.
    """

    __slots__ = ("x", "budget", "bits", "stuck", "_m")

    def __init__(self, x: RealOracle, budget: int = DEFAULT_BUDGET):
        self.x = x
        self.budget = budget
        self.bits: list[int] = []
        self.stuck = False
        self._m = 0  # integer M_t formed by the decided bits

    def _try_decide_next(self) -> bool:
        t = len(self.bits)
        for k in _schedule(self.budget, start=max(4, t + 4)):
            iv = self.x.query(k)
            if iv.is_bottom or iv.lo is None or iv.hi is None:
                continue
            c_lo = Dyadic(iv.lo.m, iv.lo.e + t) - Dyadic(self._m)
            c_hi = Dyadic(iv.hi.m, iv.hi.e + t) - Dyadic(self._m)
            if c_hi < HALF:
                self.bits.append(0)
                self._m = self._m << 1
                return True
            if c_lo > HALF:
                self.bits.append(1)
                self._m = (self._m << 1) | 1
                return True
            if self.x.exact or iv.lo == iv.hi:
                break
        self.stuck = True
        return False

    def decide_up_to(self, n: int) -> int:
        """Ensure bits[0..n] are decided if possible; returns #decided."""
        while len(self.bits) <= n and not self.stuck:
            self._try_decide_next()
        return len(self.bits)

    def bit(self, n: int) -> Optional[int]:
        """The n-th binary digit, or None if undecidable within budget."""
        self.decide_up_to(n)
        return self.bits[n] if n < len(self.bits) else None


class StreamExpansion:
    """Digit extraction specialized to stream-backed reals.

    A stream-backed real is the exact sum of its bits, so its binary
    expansion IS the bit stream whenever the real is not dyadic; the
    stream sources here never produce an eventually-constant tail, so
    reading digits directly agrees with the comparison chain (and is
    random access instead of sequential)."""

    __slots__ = ("stream",)

    stuck = False

    def __init__(self, x):
        self.stream = x.stream

    def bit(self, n: int) -> Optional[int]:
        return self.stream.bit(n)


def bin_prime(x: RealOracle, k: int, budget: int = DEFAULT_BUDGET,
              _cache: Optional[dict] = None) -> Optional[int]:
    """k-th digit of the binary expansion; None exactly when the
    comparison chain hits 1/2 (dyadic inputs) or exhausts the budget.

    This entry point always runs the generic comparison chain; it is
    the reference the specialized stream path is checked against."""
    exp = _expansion_of(x, budget, _cache, fast=False)
    return exp.bit(k)


def _expansion_of(x: RealOracle, budget: int, cache: Optional[dict],
                  fast: bool = True):
    from .bits import StreamReal
    if cache is None:
        if fast and isinstance(x, StreamReal):
            return StreamExpansion(x)
        return BinExpansion(x, budget)
    key = ("bin", id(x))
    exp = cache.get(key)
    if exp is None:
        if fast and isinstance(x, StreamReal):
            exp = StreamExpansion(x)
        else:
            exp = BinExpansion(x, budget)
        cache[key] = exp
    return exp


class MuxReal(RealOracle):
    """Demultiplexed real: digits of channel m of x's binary expansion,
    reassembled into a real in [0, 1].  Channel digits live at the
    pair-interleaved indices of the expansion."""

    __slots__ = ("expansion", "m")

    def __init__(self, x: RealOracle, m: int, budget: int = DEFAULT_BUDGET,
                 cache: Optional[dict] = None):
        super().__init__()
        self.expansion = _expansion_of(x, budget, cache)
        self.m = m

    def _compute(self, k: int) -> Interval:
        bits = []
        for n in range(k):
            b = self.expansion.bit(pair_index(self.m, n))
            if b is None:
                break
            bits.append(b)
        return num_prefix(bits)


def mux(x: RealOracle, m: int, budget: int = DEFAULT_BUDGET,
        cache: Optional[dict] = None) -> MuxReal:
    return MuxReal(x, m, budget, cache)
