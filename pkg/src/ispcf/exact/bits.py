"""Deterministic random bit streams and the interleaving pairing.

A stream is an infinite sequence of i.i.d. uniform bits addressed by
index; bit n is a pure function of (seed, n), computed blockwise by a
counter-keyed 64-bit mixer, so any substream can be read without
generating its predecessors.  Substream m of s is n |-> s[pair(m, n)]
where pair interleaves binary representations; distinct substreams hit
disjoint index sets, hence are independent.
"""

from __future__ import annotations

from fractions import Fraction

from .dyadic import Dyadic
from .interval import Interval
from .base import RealOracle

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    """splitmix64 finalizer."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(master: int, index: int) -> int:
    """Per-sample seed; collision-free in practice and order-independent."""
    return _mix64(_mix64(master & _MASK64) ^ ((index * _GOLDEN) & _MASK64))


def pair_index(m: int, n: int) -> int:
    """Interleave binary digits: bits of m at even positions, n at odd."""
    return _spread(m) | (_spread(n) << 1)


def unpair_index(p: int) -> tuple[int, int]:
    return _unspread(p), _unspread(p >> 1)


_SPREAD_CACHE: dict[int, int] = {}


def _spread(n: int) -> int:
    cached = _SPREAD_CACHE.get(n)
    if cached is not None:
        return cached
    out = 0
    i = 0
    m = n
    while m:
        out |= (m & 1) << (2 * i)
        m >>= 1
        i += 1
    if n < (1 << 20):
        _SPREAD_CACHE[n] = out
    return out


def _unspread(p: int) -> int:
    out = 0
    i = 0
    while p:
        out |= (p & 1) << i
        p >>= 2
        i += 1
    return out


class BitStream:
    """Root stream: bit(n) keyed on (seed, n), memoized in 64-bit blocks."""

    def __init__(self, seed: int):
        self.seed = seed & _MASK64
        self._base = _mix64(self.seed ^ _GOLDEN)
        self._blocks: dict[int, int] = {}

    def _block(self, j: int) -> int:
        w = self._blocks.get(j)
        if w is None:
            w = _mix64((self._base + j * _GOLDEN) & _MASK64)
            self._blocks[j] = w
        return w

    def bit(self, n: int) -> int:
        return (self._block(n >> 6) >> (n & 63)) & 1


class SubStream:
    """Lazy view n |-> base[pair(m, n)]; shares the base's memo table."""

    def __init__(self, base: BitStream, m: int):
        self.base = base
        self.m = m
        self._even = _spread(m)

    def bit(self, n: int) -> int:
        return self.base.bit(self._even | (_spread(n) << 1))


class ShiftStream:
    """View t with substream(t, m) = substream(base, m+1) for all m."""

    def __init__(self, base):
        self.base = base

    def bit(self, n: int) -> int:
        m, k = unpair_index(n)
        return self.base.bit(pair_index(m + 1, k))


def substream(s, m: int):
    if isinstance(s, BitStream):
        return SubStream(s, m)
    return _GenericSubStream(s, m)


class _GenericSubStream:
    def __init__(self, base, m: int):
        self.base = base
        self.m = m

    def bit(self, n: int) -> int:
        return self.base.bit(pair_index(self.m, n))


def shift(s) -> ShiftStream:
    return ShiftStream(s)


def num_prefix(bits) -> Interval:
    """[x, x + 2^-k] where x has binary expansion given by the k bits."""
    v = 0
    k = 0
    for b in bits:
        v = (v << 1) | b
        k += 1
    return Interval(Dyadic(v, -k), Dyadic(v + 1, -k))


class StreamReal(RealOracle):
    """Refinable real in [0, 1] read off a bit stream.

    query(k) returns the prefix interval of width 2^-k; successive
    queries extend the materialized prefix in 64-bit chunks (no
    enclosure cache needed: the prefix itself is the cache).
    """

    __slots__ = ("stream", "_value", "_k")

    exact = False

    def __init__(self, stream):
        self.stream = stream
        self._value = 0
        self._k = 0

    def query(self, k: int) -> Interval:
        if k > self._k:
            v = self._value
            n = self._k
            bit = self.stream.bit
            while n < k:
                step = min(64, k - n)
                w = 0
                for i in range(step):
                    w = (w << 1) | bit(n + i)
                v = (v << step) | w
                n += step
            self._value = v
            self._k = n
        k = self._k
        return Interval(Dyadic(self._value, -k), Dyadic(self._value + 1, -k))

    def known_fraction(self) -> Fraction:
        """Lower endpoint of the best interval so far (test hook)."""
        return Fraction(self._value, 1 << self._k)


def stream_real(s) -> StreamReal:
    return StreamReal(s)
