"""Semantic values of observable type, as produced by constant application
and carried by normal forms.

Reals are refinable oracles.  Bottom and Undecided are distinct
sentinels: Bottom is a provable semantic gap (sign test of exactly 0,
division by an interval through 0 with exact endpoints), Undecided
means a refinement budget ran out.
"""

from __future__ import annotations

from ..exact.oracle import RealOracle


class _Sentinel:
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name


BOTTOM_VAL = _Sentinel("bottom")
UNDECIDED_VAL = _Sentinel("undecided")
UNIT_VAL = _Sentinel("unit")


class PairV:
    __slots__ = ("left", "right")

    def __init__(self, left, right):
        self.left = left
        self.right = right

    def __repr__(self):
        return f"({self.left!r}, {self.right!r})"


class InjV:
    __slots__ = ("index", "value")

    def __init__(self, index: int, value):
        self.index = index
        self.value = value

    def __repr__(self):
        return f"inj{self.index}({self.value!r})"


TRUE_VAL = InjV(1, UNIT_VAL)
FALSE_VAL = InjV(2, UNIT_VAL)


def is_real(v) -> bool:
    return isinstance(v, RealOracle)
