"""Abstract syntax, substitution, printing, and the template/environment
factorization of closed terms.

Real literals in surface programs carry exact intervals; the machine
also builds terms whose real literals carry refinable oracles, so the
payload type of RealLit is Interval-or-oracle.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Optional

from ..exact.interval import Interval
from .types import Type

_fresh_counter = itertools.count()


def fresh_name(base: str = "x", avoid=frozenset()) -> str:
    base = base.lstrip("_").rstrip("0123456789") or "x"
    while True:
        name = f"_{base}{next(_fresh_counter)}"
        if name not in avoid:
            return name


class Term:
    # subclasses set ty/pos/_fv inline (hot allocation path)
    __slots__ = ("ty", "pos", "_fv")

    def children(self) -> tuple:
        return ()

    @property
    def fv(self) -> frozenset:
        s = self._fv
        if s is None:
            s = self._compute_fv()
            self._fv = s
        return s

    def _compute_fv(self) -> frozenset:
        out: frozenset = frozenset()
        for c in self.children():
            out |= c.fv
        return out

    def __repr__(self):
        from .printer import to_source
        return f"<{type(self).__name__} {to_source(self)}>"


class Var(Term):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.ty = None; self.pos = None; self._fv = None
        self.name = name

    def _compute_fv(self):
        return frozenset((self.name,))


class ConstRef(Term):
    """Reference to a named registry constant (sin, pos, add, pi, ...)."""

    __slots__ = ("name",)

    def __init__(self, name: str):
        self.ty = None; self.pos = None; self._fv = None
        self.name = name


class RealLit(Term):
    # value: Interval (surface) or RealOracle (machine);
    # text: source spelling when parsed, for faithful printing;
    # wrapped: cached constant oracle for an interval payload
    __slots__ = ("value", "text", "wrapped")

    def __init__(self, value, text=None):
        self.ty = None; self.pos = None; self._fv = None
        self.value = value
        self.text = text
        self.wrapped = None


class IntLit(Term):
    __slots__ = ("value",)

    def __init__(self, value: int):
        self.ty = None; self.pos = None; self._fv = None
        self.value = value


class UnitLit(Term):
    __slots__ = ()

    def __init__(self):
        self.ty = None; self.pos = None; self._fv = None


class TemplateVar(Term):
    """Placeholder for the i-th real constant of a configuration."""

    __slots__ = ("index",)

    def __init__(self, index: int):
        self.ty = None; self.pos = None; self._fv = None
        self.index = index


class Lam(Term):
    __slots__ = ("var", "ann", "body")

    def __init__(self, var: str, ann: Optional[Type], body: Term):
        self.ty = None; self.pos = None; self._fv = None
        self.var = var
        self.ann = ann
        self.body = body

    def children(self):
        return (self.body,)

    def _compute_fv(self):
        return self.body.fv - {self.var}


class App(Term):
    __slots__ = ("fun", "arg")

    def __init__(self, fun: Term, arg: Term):
        self.ty = None; self.pos = None; self._fv = None
        self.fun = fun
        self.arg = arg

    def children(self):
        return (self.fun, self.arg)


class Rec(Term):
    __slots__ = ("body",)

    def __init__(self, body: Term):
        self.ty = None; self.pos = None; self._fv = None
        self.body = body

    def children(self):
        return (self.body,)


class Ret(Term):
    __slots__ = ("body",)

    def __init__(self, body: Term):
        self.ty = None; self.pos = None; self._fv = None
        self.body = body

    def children(self):
        return (self.body,)


class Do(Term):
    __slots__ = ("var", "first", "rest")

    def __init__(self, var: str, first: Term, rest: Term):
        self.ty = None; self.pos = None; self._fv = None
        self.var = var
        self.first = first
        self.rest = rest

    def children(self):
        return (self.first, self.rest)

    def _compute_fv(self):
        return self.first.fv | (self.rest.fv - {self.var})


class Pair(Term):
    __slots__ = ("left", "right")

    def __init__(self, left: Term, right: Term):
        self.ty = None; self.pos = None; self._fv = None
        self.left = left
        self.right = right

    def children(self):
        return (self.left, self.right)


class Proj(Term):
    __slots__ = ("index", "body")  # index 1 or 2

    def __init__(self, index: int, body: Term):
        self.ty = None; self.pos = None; self._fv = None
        self.index = index
        self.body = body

    def children(self):
        return (self.body,)


class Inj(Term):
    __slots__ = ("index", "ann", "body")  # ann: the *other* component type

    def __init__(self, index: int, ann: Optional[Type], body: Term):
        self.ty = None; self.pos = None; self._fv = None
        self.index = index
        self.ann = ann
        self.body = body

    def children(self):
        return (self.body,)


class Case(Term):
    __slots__ = ("scrutinee", "left", "right")

    def __init__(self, scrutinee: Term, left: Term, right: Term):
        self.ty = None; self.pos = None; self._fv = None
        self.scrutinee = scrutinee
        self.left = left
        self.right = right

    def children(self):
        return (self.scrutinee, self.left, self.right)


class Sample(Term):
    __slots__ = ()

    def __init__(self):
        self.ty = None; self.pos = None; self._fv = None


class SampleFin(Term):
    """Internal: sample from a finite weighted list of interval points.

    The machine caches drawing tables (uniform-power-of-two detection,
    cumulative weights) on the node, since the node is shared across
    runs.
    """

    __slots__ = ("entries", "draw_table")

    def __init__(self, entries: tuple):
        self.ty = None; self.pos = None; self._fv = None
        self.entries = entries
        self.draw_table = None


class Score(Term):
    __slots__ = ("body",)

    def __init__(self, body: Term):
        self.ty = None; self.pos = None; self._fv = None
        self.body = body

    def children(self):
        return (self.body,)


# surface-only nodes, resolved away by the checker


class BinOp(Term):
    __slots__ = ("op", "left", "right")  # op in + - * / =

    def __init__(self, op: str, left: Term, right: Term):
        self.ty = None; self.pos = None; self._fv = None
        self.op = op
        self.left = left
        self.right = right

    def children(self):
        return (self.left, self.right)


class UMinus(Term):
    __slots__ = ("body",)

    def __init__(self, body: Term):
        self.ty = None; self.pos = None; self._fv = None
        self.body = body

    def children(self):
        return (self.body,)


# ---------------------------------------------------------------------------
# substitution


def subst(m: Term, var: str, n: Term) -> Term:
    """Capture-avoiding m[var := n]; shares untouched subtrees."""
    if var not in m.fv:
        return m
    cls = type(m)
    if cls is Var:
        return n
    if cls is Lam:
        if m.var == var:
            return m
        if m.var in n.fv:
            newv = fresh_name(m.var, n.fv | m.body.fv)
            body = subst(m.body, m.var, Var(newv))
            out = Lam(newv, m.ann, subst(body, var, n))
        else:
            out = Lam(m.var, m.ann, subst(m.body, var, n))
    elif cls is Do:
        first = subst(m.first, var, n)
        if m.var == var:
            rest = m.rest
        elif m.var in n.fv and m.var in m.rest.fv:
            newv = fresh_name(m.var, n.fv | m.rest.fv)
            rest = subst(subst(m.rest, m.var, Var(newv)), var, n)
            out = Do(newv, first, rest)
            out.ty = m.ty
            return out
        else:
            rest = subst(m.rest, var, n)
        out = Do(m.var, first, rest)
    elif cls is App:
        out = App(subst(m.fun, var, n), subst(m.arg, var, n))
    elif cls is Rec:
        out = Rec(subst(m.body, var, n))
    elif cls is Ret:
        out = Ret(subst(m.body, var, n))
    elif cls is Score:
        out = Score(subst(m.body, var, n))
    elif cls is Pair:
        out = Pair(subst(m.left, var, n), subst(m.right, var, n))
    elif cls is Proj:
        out = Proj(m.index, subst(m.body, var, n))
    elif cls is Inj:
        out = Inj(m.index, m.ann, subst(m.body, var, n))
    elif cls is Case:
        out = Case(subst(m.scrutinee, var, n),
                   subst(m.left, var, n), subst(m.right, var, n))
    elif cls is BinOp:
        out = BinOp(m.op, subst(m.left, var, n), subst(m.right, var, n))
    elif cls is UMinus:
        out = UMinus(subst(m.body, var, n))
    else:
        return m
    out.ty = m.ty
    return out


# ---------------------------------------------------------------------------
# structural equality up to renaming of bound variables
# (checked types and positions are ignored)


def term_eq(a: Term, b: Term, _ea=None, _eb=None, _d: int = 0) -> bool:
    if _ea is None:
        _ea, _eb = {}, {}
    if type(a) is not type(b):
        return False
    cls = type(a)
    if cls is Var:
        da, db = _ea.get(a.name), _eb.get(b.name)
        return da == db and (da is not None or a.name == b.name)
    if cls is ConstRef:
        return a.name == b.name
    if cls is RealLit:
        va, vb = a.value, b.value
        if isinstance(va, Interval) and isinstance(vb, Interval):
            return va == vb
        return va is vb
    if cls is IntLit:
        return a.value == b.value
    if cls is TemplateVar:
        return a.index == b.index
    if cls is Lam:
        if a.ann != b.ann:
            return False
        ea = dict(_ea); ea[a.var] = _d
        eb = dict(_eb); eb[b.var] = _d
        return term_eq(a.body, b.body, ea, eb, _d + 1)
    if cls is Do:
        if not term_eq(a.first, b.first, _ea, _eb, _d):
            return False
        ea = dict(_ea); ea[a.var] = _d
        eb = dict(_eb); eb[b.var] = _d
        return term_eq(a.rest, b.rest, ea, eb, _d + 1)
    if cls is Proj:
        return a.index == b.index and term_eq(a.body, b.body, _ea, _eb, _d)
    if cls is Inj:
        return (a.index == b.index and a.ann == b.ann
                and term_eq(a.body, b.body, _ea, _eb, _d))
    if cls is BinOp:
        return (a.op == b.op and term_eq(a.left, b.left, _ea, _eb, _d)
                and term_eq(a.right, b.right, _ea, _eb, _d))
    if cls is SampleFin:
        return a.entries == b.entries
    ca, cb = a.children(), b.children()
    return len(ca) == len(cb) and all(
        term_eq(x, y, _ea, _eb, _d) for x, y in zip(ca, cb))


# ---------------------------------------------------------------------------
# configurations: template shape + real-constant environment


class Config:
    """A closed term factored as (shape with numbered placeholders,
    environment of its real constants, numbered left to right)."""

    __slots__ = ("template", "theta")

    def __init__(self, template: Term, theta: dict[int, Interval]):
        self.template = template
        self.theta = theta


def to_config(term: Term) -> Config:
    theta: dict[int, Interval] = {}

    def walk(t: Term) -> Term:
        cls = type(t)
        if cls is RealLit:
            if not isinstance(t.value, Interval):
                raise ValueError("only interval-valued literals templatize")
            idx = len(theta) + 1
            theta[idx] = t.value
            out = TemplateVar(idx)
            out.ty = t.ty
            return out
        if cls is Var or cls is ConstRef or cls is IntLit or cls is UnitLit \
                or cls is Sample or cls is TemplateVar or cls is SampleFin:
            return t
        if cls is Lam:
            out = Lam(t.var, t.ann, walk(t.body))
        elif cls is App:
            out = App(walk(t.fun), walk(t.arg))
        elif cls is Rec:
            out = Rec(walk(t.body))
        elif cls is Ret:
            out = Ret(walk(t.body))
        elif cls is Do:
            out = Do(t.var, walk(t.first), walk(t.rest))
        elif cls is Score:
            out = Score(walk(t.body))
        elif cls is Pair:
            out = Pair(walk(t.left), walk(t.right))
        elif cls is Proj:
            out = Proj(t.index, walk(t.body))
        elif cls is Inj:
            out = Inj(t.index, t.ann, walk(t.body))
        elif cls is Case:
            out = Case(walk(t.scrutinee), walk(t.left), walk(t.right))
        else:
            raise ValueError(f"cannot templatize node {cls.__name__}")
        out.ty = t.ty
        return out

    return Config(walk(term), theta)


def untemplate(config: Config) -> Term:
    theta = config.theta

    def walk(t: Term) -> Term:
        cls = type(t)
        if cls is TemplateVar:
            out = RealLit(theta[t.index])
            out.ty = t.ty
            return out
        if not t.children() and cls is not Lam:
            return t
        if cls is Lam:
            out = Lam(t.var, t.ann, walk(t.body))
        elif cls is App:
            out = App(walk(t.fun), walk(t.arg))
        elif cls is Rec:
            out = Rec(walk(t.body))
        elif cls is Ret:
            out = Ret(walk(t.body))
        elif cls is Do:
            out = Do(t.var, walk(t.first), walk(t.rest))
        elif cls is Score:
            out = Score(walk(t.body))
        elif cls is Pair:
            out = Pair(walk(t.left), walk(t.right))
        elif cls is Proj:
            out = Proj(t.index, walk(t.body))
        elif cls is Inj:
            out = Inj(t.index, t.ann, walk(t.body))
        elif cls is Case:
            out = Case(walk(t.scrutinee), walk(t.left), walk(t.right))
        else:
            return t
        out.ty = t.ty
        return out

    return walk(config.template)
