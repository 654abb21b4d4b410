"""Shared base for refinable exact reals.

query(k) returns interval enclosures that only ever shrink; the best
enclosure seen so far is cached with the largest precision answered, so
re-queries at or below it are free and refinement is monotone by
construction.  Subclasses provide _compute(k) or override query.
"""

from __future__ import annotations

from typing import Optional

from .interval import Interval


class RealOracle:
    exact = False
    __slots__ = ("_best", "_best_k")

    def __init__(self):
        self._best: Optional[Interval] = None
        self._best_k = -1

    def _compute(self, k: int) -> Interval:
        raise NotImplementedError

    def query(self, k: int) -> Interval:
        best = self._best
        if best is not None and k <= self._best_k:
            return best
        res = self._compute(k)
        if best is not None:
            res = res.intersect(best)
        self._best = res
        self._best_k = k
        return res
