"""Exact algebra of simple valuations and partition approximations.

A simple valuation is a finite weighted sum of point masses with
nonnegative exact-rational weights.  Everything here is exact, so the
algebraic laws (monad laws, linearity, modularity, the double-integral
interchange) are checkable by literal equality.

Partitions of the line induce finite approximations of a measure: mass
of each half-open step placed on the corresponding closed interval
point.  Refining the partition only increases the mass any open set of
intervals can see, and the dyadic partition chain exhausts the measure
in the limit.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Generic, Iterable, Optional, TypeVar

from .exact.dyadic import Dyadic
from .exact.interval import Interval

A = TypeVar("A")
B = TypeVar("B")

_ZERO = Fraction(0)


def _as_weight(w) -> Fraction:
    w = Fraction(w)
    if w < 0:
        raise ValueError(f"negative weight {w}")
    return w


class SimpleValuation(Generic[A]):
    """Finite list of (weight, point); weights nonnegative rationals."""

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable[tuple] = ()):
        self.entries = [(_as_weight(w), x) for (w, x) in entries]

    @property
    def mass(self) -> Fraction:
        return sum((w for w, _ in self.entries), _ZERO)

    def scaled(self, a) -> "SimpleValuation[A]":
        a = _as_weight(a)
        return SimpleValuation((a * w, x) for w, x in self.entries)

    def normalized(self, key: Optional[Callable] = None) -> list[tuple]:
        """Entries merged by point and sorted by key; zero weights dropped.

        Points must be hashable (or a key function given).
        """
        key = key or (lambda x: x)
        acc: dict = {}
        rep: dict = {}
        for w, x in self.entries:
            if w == 0:
                continue
            k = key(x)
            acc[k] = acc.get(k, _ZERO) + w
            rep.setdefault(k, x)
        return [(acc[k], rep[k]) for k in sorted(acc, key=_sort_token)]

    def agrees_with(self, other: "SimpleValuation[A]",
                    opens: Iterable[Callable[[A], bool]]) -> bool:
        """Equality as measures on a caller-supplied basis of opens."""
        return all(measure_open(self, u) == measure_open(other, u)
                   for u in opens)

    def __repr__(self):
        inner = " + ".join(f"{w}.d({x!r})" for w, x in self.entries)
        return f"<valuation {inner or '0'}>"


def _sort_token(k):
    # total order across mixed key shapes
    return (str(type(k)), repr(k))


def dirac(x: A) -> SimpleValuation[A]:
    return SimpleValuation([(Fraction(1), x)])


def zero() -> SimpleValuation:
    return SimpleValuation()


def lin(a, nu: SimpleValuation[A], b, xi: SimpleValuation[A]
        ) -> SimpleValuation[A]:
    """a*nu + b*xi; coefficients must be nonnegative."""
    a, b = _as_weight(a), _as_weight(b)
    out = SimpleValuation()
    out.entries = ([(a * w, x) for w, x in nu.entries]
                   + [(b * w, x) for w, x in xi.entries])
    return out


def add(nu: SimpleValuation[A], xi: SimpleValuation[A]) -> SimpleValuation[A]:
    return lin(1, nu, 1, xi)


def bind(nu: SimpleValuation[A],
         f: Callable[[A], SimpleValuation[B]]) -> SimpleValuation[B]:
    out = SimpleValuation()
    for w, x in nu.entries:
        for w2, y in f(x).entries:
            out.entries.append((w * w2, y))
    return out


def product(nu: SimpleValuation[A], xi: SimpleValuation[B]
            ) -> SimpleValuation[tuple]:
    out = SimpleValuation()
    for w, x in nu.entries:
        for w2, y in xi.entries:
            out.entries.append((w * w2, (x, y)))
    return out


def integrate(nu: SimpleValuation[A], h: Callable[[A], Fraction]) -> Fraction:
    total = _ZERO
    for w, x in nu.entries:
        v = Fraction(h(x))
        if v < 0:
            raise ValueError("integrand must be nonnegative")
        total += w * v
    return total


def measure_open(nu: SimpleValuation[A], u: Callable[[A], bool]) -> Fraction:
    """Mass of an open set given by its indicator (upward closure is the
    caller's obligation)."""
    return sum((w for w, x in nu.entries if w and u(x)), _ZERO)


# ---------------------------------------------------------------------------
# partitions and measure approximation


class Partition:
    """Strictly increasing finite list of dyadic cut points."""

    __slots__ = ("points",)

    def __init__(self, points: Iterable[Dyadic]):
        pts = list(points)
        if not pts:
            raise ValueError("a partition needs at least one point")
        for a, b in zip(pts, pts[1:]):
            if not a < b:
                raise ValueError("partition points must strictly increase")
        self.points = pts

    def cells(self) -> list[Interval]:
        pts = self.points
        return [Interval(a, b) for a, b in zip(pts, pts[1:])]

    def __len__(self):
        return len(self.points)

    def refines(self, other: "Partition") -> bool:
        return set((p.m, p.e) for p in other.points) <= \
            set((p.m, p.e) for p in self.points)


class MeasureSpec:
    """A measure on the line, presented by its mass on half-open steps
    (a, b] with dyadic endpoints."""

    __slots__ = ("name", "half_open_mass")

    def __init__(self, name: str,
                 half_open_mass: Callable[[Dyadic, Dyadic], Fraction]):
        self.name = name
        self.half_open_mass = half_open_mass

    def __repr__(self):
        return f"<measure {self.name}>"


def _uniform01_mass(a: Dyadic, b: Dyadic) -> Fraction:
    lo = max(a.as_fraction(), Fraction(0))
    hi = min(b.as_fraction(), Fraction(1))
    return max(hi - lo, _ZERO)


def uniform01() -> MeasureSpec:
    return MeasureSpec("uniform01", _uniform01_mass)


def lebesgue() -> MeasureSpec:
    return MeasureSpec(
        "lebesgue", lambda a, b: b.as_fraction() - a.as_fraction())


def lebesgue_restricted(n: int) -> MeasureSpec:
    lo, hi = Fraction(-n), Fraction(n)

    def mass(a: Dyadic, b: Dyadic) -> Fraction:
        x = max(a.as_fraction(), lo)
        y = min(b.as_fraction(), hi)
        return max(y - x, _ZERO)

    return MeasureSpec(f"lebesgue[-{n},{n}]", mass)


def point_mass(c: Fraction) -> MeasureSpec:
    c = Fraction(c)

    def mass(a: Dyadic, b: Dyadic) -> Fraction:
        return Fraction(int(a.as_fraction() < c <= b.as_fraction()))

    return MeasureSpec(f"point:{c}", mass)


BUILTIN_MEASURES = {
    "uniform01": uniform01,
    "lebesgue": lebesgue,
}


def resolve_measure(name: str) -> MeasureSpec:
    """Measure by CLI name: uniform01 | lebesgue | lebesgue_r:<n> |
    point:<p/q>."""
    if name in BUILTIN_MEASURES:
        return BUILTIN_MEASURES[name]()
    if name.startswith("lebesgue_r:"):
        return lebesgue_restricted(int(name.split(":", 1)[1]))
    if name.startswith("point:"):
        return point_mass(Fraction(name.split(":", 1)[1]))
    raise KeyError(f"unknown measure {name!r}")


def partition_valuation(mu: MeasureSpec, p: Partition
                        ) -> SimpleValuation[Interval]:
    """Step masses mu((a_{i-1}, a_i]) placed on the interval points
    [a_{i-1}, a_i]; the one-point partition gives the zero valuation."""
    out = SimpleValuation()
    for cell in p.cells():
        w = Fraction(mu.half_open_mass(cell.lo, cell.hi))
        if w < 0:
            raise ValueError(f"{mu.name} gave negative step mass")
        out.entries.append((w, cell))
    return out


def dyadic_partition(n: int) -> Partition:
    """All multiples of 2^-n between -n and n."""
    if n < 0:
        raise ValueError("level must be >= 0")
    step = Dyadic(1, -n)
    count = 2 * n * (1 << n)
    start = Dyadic(-n)
    return Partition(
        [start + Dyadic(k, -n) for k in range(count + 1)])


def scott_open_of(a: Fraction, b: Fraction) -> Callable[[Interval], bool]:
    """The open set of interval points sitting strictly inside (a, b);
    the trace of (a, b) on the interval domain."""
    a, b = Fraction(a), Fraction(b)

    def u(iv: Interval) -> bool:
        if iv.is_bottom or iv.lo is None or iv.hi is None:
            return False
        return a < iv.lo.as_fraction() and iv.hi.as_fraction() < b

    return u


def serialize_valuation(nu: SimpleValuation, point_repr: Callable) -> list:
    return [{"weight": f"{w.numerator}/{w.denominator}",
             "point": point_repr(x)} for w, x in nu.entries]
