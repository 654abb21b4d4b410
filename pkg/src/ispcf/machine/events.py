"""Event predicates over observable normal forms.

Surface syntax (the --event flag):

    event ::= clause ('and' clause)*
    clause ::= 'all'
             | path* 'real' 'in' '(' num ',' num ')'
             | path* 'int' '=' int
             | path* ('inl' | 'inr') clause?
             | path* 'unit'
    path  ::= 'fst' | 'snd'

Interval membership uses open endpoints, so each clause denotes an open
set of values; reals refine until membership is decided or the budget
runs out (an undecided run contributes nothing to any estimate).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Optional

from ..exact.oracle import RealOracle, compare, Sign
from ..lang.values import UNIT_VAL, PairV, InjV


class EventSyntaxError(Exception):
    pass


class EventPredicate:
    """Callable: value -> True / False / None (undecided)."""

    def __init__(self, clauses, text: str):
        self.clauses = clauses
        self.text = text

    def __call__(self, value, budget: int = 1 << 16) -> Optional[bool]:
        verdict = True
        for clause in self.clauses:
            r = clause(value, budget)
            if r is False:
                return False
            if r is None:
                verdict = None
        return verdict

    def __repr__(self):
        return f"<event {self.text!r}>"


_TOK = re.compile(r"\s*(and|all|fst|snd|real|int|unit|inl|inr|in"
                  r"|=|\(|\)|,|-?\d+(?:\.\d+)?(?:/\d+)?)")


def _tokenize(text: str) -> list[str]:
    out, i = [], 0
    while i < len(text):
        m = _TOK.match(text, i)
        if m is None:
            if text[i:].strip():
                raise EventSyntaxError(f"bad event syntax at {text[i:]!r}")
            break
        out.append(m.group(1))
        i = m.end()
    return out


class _P:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self):
        t = self.peek()
        if t is None:
            raise EventSyntaxError("unexpected end of event")
        self.i += 1
        return t

    def expect(self, t):
        got = self.next()
        if got != t:
            raise EventSyntaxError(f"expected {t!r}, found {got!r}")

    def clause(self):
        t = self.peek()
        if t == "all":
            self.next()
            return lambda v, b: True
        return self.pathed()

    def pathed(self):
        t = self.next()
        if t == "fst":
            sub = self.pathed()
            return _on_component(1, sub)
        if t == "snd":
            sub = self.pathed()
            return _on_component(2, sub)
        if t == "real":
            self.expect("in")
            self.expect("(")
            a = Fraction(self.next())
            self.expect(",")
            b = Fraction(self.next())
            self.expect(")")
            if not a < b:
                raise EventSyntaxError("empty interval in event")
            return _real_in(a, b)
        if t == "int":
            self.expect("=")
            n = int(self.next())
            return _int_eq(n)
        if t == "unit":
            return lambda v, b: v is UNIT_VAL
        if t in ("inl", "inr"):
            idx = 1 if t == "inl" else 2
            nxt = self.peek()
            sub = None
            if nxt is not None and nxt != "and":
                sub = self.pathed()
            return _tagged(idx, sub)
        raise EventSyntaxError(f"unexpected token {t!r} in event")


def _on_component(idx, sub):
    def f(v, budget):
        if not isinstance(v, PairV):
            return False
        return sub(v.left if idx == 1 else v.right, budget)
    return f


def _real_in(a: Fraction, b: Fraction):
    def f(v, budget):
        if not isinstance(v, RealOracle):
            return False
        sa, ca = compare(v, a, budget)
        if sa == Sign.NEGATIVE:
            return False
        sb, cb = compare(v, b, budget)
        if sb == Sign.POSITIVE:
            return False
        if sa == Sign.POSITIVE and sb == Sign.NEGATIVE:
            return True
        # sitting on an endpoint (outside the open set) or out of budget
        return False if (ca and cb) else None
    return f


def _int_eq(n: int):
    def f(v, budget):
        return isinstance(v, int) and v == n
    return f


def _tagged(idx, sub):
    def f(v, budget):
        if not isinstance(v, InjV) or v.index != idx:
            return False
        if sub is None:
            return True
        return sub(v.value, budget)
    return f


def parse_event(text: str) -> EventPredicate:
    toks = _tokenize(text)
    p = _P(toks)
    clauses = [p.clause()]
    while p.peek() == "and":
        p.next()
        clauses.append(p.clause())
    if p.peek() is not None:
        raise EventSyntaxError(f"trailing tokens {p.toks[p.i:]!r}")
    return EventPredicate(clauses, text)


EVENT_ALL = parse_event("all")
