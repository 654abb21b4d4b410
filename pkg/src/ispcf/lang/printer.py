"""Source printer; inverse of the parser on surface programs.

Machine-internal payloads (oracle-backed literals, finite-choice
sample nodes) print in an unparseable but readable debug form.
"""

from __future__ import annotations

from fractions import Fraction

from ..exact.interval import Interval
from .types import UNIT, type_to_str
from .ast import (
    Term, Var, ConstRef, RealLit, IntLit, UnitLit, TemplateVar, Lam, App,
    Rec, Ret, Do, Pair, Proj, Inj, Case, Sample, SampleFin, Score, BinOp,
    UMinus,
)
from .constants import CONST_TO_OPERATOR

# precedence levels: 0 statement, 1 comparison, 2 additive,
# 3 multiplicative, 4 application, 5 atom
_OP_LEVEL = {"=": 1, "+": 2, "-": 2, "*": 3, "/": 3}


def _paren(s: str, level: int, ctx: int) -> str:
    return f"({s})" if level < ctx else s


def _decimal_of_point(iv: Interval) -> str:
    lo = iv.lo
    q = lo.as_fraction()
    if q.denominator == 1:
        return f"{q.numerator}.0"
    f = q.denominator.bit_length() - 1
    digits = abs(q.numerator) * 5 ** f
    s = str(digits).rjust(f + 1, "0")
    sign = "-" if q.numerator < 0 else ""
    return f"{sign}{s[:-f]}.{s[-f:]}"


def _real_text(node: RealLit) -> str:
    if node.text:
        return node.text
    v = node.value
    if isinstance(v, Interval):
        if not v.is_bottom and v.lo == v.hi:
            return _decimal_of_point(v)
        return f"<real {v!r}>"
    return "<real oracle>"


def to_source(t: Term, ctx: int = 0) -> str:
    cls = type(t)
    if cls is Var:
        return t.name
    if cls is ConstRef:
        return t.name
    if cls is RealLit:
        s = _real_text(t)
        return _paren(s, 2, ctx) if s.startswith("-") else s
    if cls is IntLit:
        s = str(t.value)
        return _paren(s, 2, ctx) if t.value < 0 else s
    if cls is UnitLit:
        return "()"
    if cls is TemplateVar:
        return f"<slot {t.index}>"
    if cls is Sample:
        return "sample"
    if cls is SampleFin:
        n = len(t.entries)
        return f"<sample_fin {n} branches>"
    if cls is Lam:
        ann = f": {type_to_str(t.ann)}" if t.ann is not None else ""
        return _paren(f"fn {t.var}{ann} => {to_source(t.body)}", 0, ctx)
    if cls is App:
        # resugar resolved binary operators
        if (type(t.fun) is App and type(t.fun.fun) is ConstRef
                and t.fun.fun.name in CONST_TO_OPERATOR):
            op = CONST_TO_OPERATOR[t.fun.fun.name]
            lvl = _OP_LEVEL[op]
            left = to_source(t.fun.arg, lvl)
            right = to_source(t.arg, lvl + 1)
            return _paren(f"{left} {op} {right}", lvl, ctx)
        if type(t.fun) is ConstRef and t.fun.name == "neg":
            return _paren(f"- {to_source(t.arg, 4)}", 2, ctx)
        return _paren(f"{to_source(t.fun, 4)} {to_source(t.arg, 5)}", 4, ctx)
    if cls is Rec:
        return _paren(f"rec {to_source(t.body, 5)}", 4, ctx)
    if cls is Ret:
        return _paren(f"ret {to_source(t.body, 5)}", 4, ctx)
    if cls is Score:
        return _paren(f"score {to_source(t.body, 5)}", 4, ctx)
    if cls is Do:
        if t.var.startswith("_") and t.var not in t.rest.fv:
            s = f"{to_source(t.first, 1)}; {to_source(t.rest)}"
        else:
            s = f"do {t.var} <- {to_source(t.first, 1)}; {to_source(t.rest)}"
        return _paren(s, 0, ctx)
    if cls is Pair:
        return f"({to_source(t.left)}, {to_source(t.right)})"
    if cls is Proj:
        kw = "fst" if t.index == 1 else "snd"
        return _paren(f"{kw} {to_source(t.body, 5)}", 4, ctx)
    if cls is Inj:
        kw = "inl" if t.index == 1 else "inr"
        if t.ann == UNIT and type(t.body) is UnitLit:
            return "true" if t.index == 1 else "false"
        ann = type_to_str(t.ann) if t.ann is not None else "?"
        return _paren(f"{kw}[{ann}] {to_source(t.body, 5)}", 4, ctx)
    if cls is Case:
        l, r = t.left, t.right
        if (type(l) is Lam and type(r) is Lam and l.ann == UNIT
                and l.var not in l.body.fv and r.var not in r.body.fv):
            s = (f"if {to_source(t.scrutinee, 1)} then {to_source(l.body)} "
                 f"else {to_source(r.body)}")
            return _paren(s, 0, ctx)
        if type(l) is Lam and type(r) is Lam:
            s = (f"case {to_source(t.scrutinee, 1)} of "
                 f"inl {l.var} => {to_source(l.body)} "
                 f"| inr {r.var} => {to_source(r.body)}")
            return _paren(s, 0, ctx)
        s = (f"<case {to_source(t.scrutinee, 5)} {to_source(l, 5)} "
             f"{to_source(r, 5)}>")
        return s
    if cls is BinOp:
        lvl = _OP_LEVEL[t.op]
        s = f"{to_source(t.left, lvl)} {t.op} {to_source(t.right, lvl + 1)}"
        return _paren(s, lvl, ctx)
    if cls is UMinus:
        return _paren(f"- {to_source(t.body, 4)}", 2, ctx)
    raise TypeError(f"cannot print {cls.__name__}")
