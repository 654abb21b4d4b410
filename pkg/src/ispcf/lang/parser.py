"""Concrete syntax.

Surface grammar (one program per file, `--` line comments):

    term  ::= 'do' pat '<-' rhs ';' term
            | 'let' pat '=' rhs 'in' term
            | 'fn' x [':' type] '=>' term
            | 'if' term 'then' term 'else' term
            | 'case' term 'of' 'inl' x '=>' term '|' 'inr' x '=>' term
            | cmp [';' term]
    rhs   ::= 'fn' ... | cmp            (parenthesize anything larger)
    cmp   ::= add ['=' add]             (integer equality)
    add   ::= ['-'] mul (('+'|'-') mul)*
    mul   ::= app (('*'|'/') app)*
    app   ::= head atom*
    head  ::= 'ret' atom | 'score' atom | 'observe' atom | 'rec' atom
            | 'fst' atom | 'snd' atom
            | ('inl'|'inr') '[' type ']' atom | atom
    atom  ::= INT | REAL | ident | 'sample' | 'true' | 'false'
            | '(' ')' | '(' term ')' | '(' term ',' term ')'
    pat   ::= x | '_' | '(' x ',' x ')'
    type  ::= tsum ['->' type]
    tsum  ::= tprod ('+' tprod)*
    tprod ::= tatom ('*' tatom)*
    tatom ::= 'unit' | 'void' | 'int' | 'real' | 'bool'
            | ('dist'|'Dist') tatom | '(' type ')'

`;`, `if` and `case` branches, and `fn` bodies extend as far to the
right as possible.  Decimal literals become the smallest enclosing
dyadic interval at the configured number of fractional bits (exact
when the decimal is a dyadic rational).
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..exact.interval import Interval
from ..exact.dyadic import Dyadic
from .types import Type, UNIT, VOID, INT, REAL, BOOL, SumT, ProdT, FunT, DistT
from . import ast
from .ast import (
    Term, Var, RealLit, IntLit, UnitLit, Lam, App, Rec, Ret, Do, Pair, Proj,
    Inj, Case, Sample, Score, BinOp, UMinus, fresh_name,
)


class ParseError(Exception):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.line = line
        self.col = col


_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+|--[^\n]*)
  | (?P<real>\d+\.\d+)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>=>|->|<-|[()\[\],;:|=+\-*/])
""", re.VERBOSE)

KEYWORDS = {
    "do", "let", "in", "fn", "rec", "ret", "score", "sample", "observe",
    "if", "then", "else", "case", "of", "inl", "inr", "true", "false",
    "fst", "snd", "unit", "void", "int", "real", "bool", "dist", "Dist",
}

_BASE_TYPES = {"unit": UNIT, "void": VOID, "int": INT, "real": REAL,
               "bool": BOOL}


class Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col

    def __repr__(self):
        return f"{self.kind}:{self.text!r}"


def tokenize(src: str) -> list[Token]:
    out = []
    line, col = 1, 1
    i = 0
    while i < len(src):
        m = _TOKEN_RE.match(src, i)
        if m is None:
            raise ParseError(f"unexpected character {src[i]!r}", line, col)
        text = m.group(0)
        kind = m.lastgroup
        if kind != "ws":
            if kind == "ident" and text in KEYWORDS:
                kind = "kw"
            out.append(Token(kind, text, line, col))
        nl = text.count("\n")
        if nl:
            line += nl
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        i = m.end()
    out.append(Token("eof", "", line, col))
    return out


def literal_interval(text: str, frac_bits: int) -> Interval:
    q = Fraction(text)
    d = q.denominator
    # strip 2s; exact iff nothing but powers of two remain
    if d & (d - 1) == 0:
        pt = Dyadic(q.numerator, -(d.bit_length() - 1))
        return Interval(pt, pt)
    return Interval.from_fractions(q, q, frac_bits)


class Parser:
    def __init__(self, tokens: list[Token], frac_bits: int = 64):
        self.toks = tokens
        self.i = 0
        self.frac_bits = frac_bits

    # -- token helpers

    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, kind, text=None) -> bool:
        t = self.peek()
        return t.kind == kind and (text is None or t.text == text)

    def expect(self, kind, text=None) -> Token:
        t = self.peek()
        if not self.at(kind, text):
            want = text or kind
            raise ParseError(f"expected {want!r}, found {t.text!r}",
                             t.line, t.col)
        return self.next()

    def err(self, msg) -> ParseError:
        t = self.peek()
        return ParseError(msg, t.line, t.col)

    def _mark(self, node: Term, tok: Token) -> Term:
        node.pos = (tok.line, tok.col)
        return node

    # -- terms

    def term(self) -> Term:
        t = self.peek()
        if t.kind == "kw":
            if t.text == "do":
                return self.do_term()
            if t.text == "let":
                return self.let_term()
            if t.text == "fn":
                return self.fn_term()
            if t.text == "if":
                return self.if_term()
            if t.text == "case":
                return self.case_term()
        return self.seq_term()

    def pattern(self):
        if self.at("sym", "("):
            self.next()
            x = self.expect("ident").text
            self.expect("sym", ",")
            y = self.expect("ident").text
            self.expect("sym", ")")
            return ("pair", x, y)
        return ("var", self.expect("ident").text)

    def rhs_term(self) -> Term:
        if self.at("kw", "fn"):
            return self.fn_term()
        return self.cmp_term()

    def do_term(self) -> Term:
        t0 = self.expect("kw", "do")
        pat = self.pattern()
        self.expect("sym", "<-")
        first = self.rhs_term()
        self.expect("sym", ";")
        rest = self.term()
        return self._mark(self._bind(pat, first, rest), t0)

    def _bind(self, pat, first: Term, rest: Term) -> Term:
        if pat[0] == "var":
            return Do(pat[1], first, rest)
        _, x, y = pat
        p = fresh_name("p", rest.fv | {x, y})
        body = App(Lam(x, None, App(Lam(y, None, rest), Proj(2, Var(p)))),
                   Proj(1, Var(p)))
        return Do(p, first, body)

    def let_term(self) -> Term:
        t0 = self.expect("kw", "let")
        pat = self.pattern()
        self.expect("sym", "=")
        rhs = self.rhs_term()
        self.expect("kw", "in")
        body = self.term()
        if pat[0] == "var":
            return self._mark(App(Lam(pat[1], None, body), rhs), t0)
        _, x, y = pat
        p = fresh_name("p", body.fv | {x, y})
        inner = App(Lam(x, None, App(Lam(y, None, body), Proj(2, Var(p)))),
                    Proj(1, Var(p)))
        return self._mark(App(Lam(p, None, inner), rhs), t0)

    def fn_term(self) -> Term:
        t0 = self.expect("kw", "fn")
        x = self.expect("ident").text
        ann = None
        if self.at("sym", ":"):
            self.next()
            ann = self.type_expr()
        self.expect("sym", "=>")
        body = self.term()
        return self._mark(Lam(x, ann, body), t0)

    def if_term(self) -> Term:
        t0 = self.expect("kw", "if")
        cond = self.term()
        self.expect("kw", "then")
        then = self.term()
        self.expect("kw", "else")
        other = self.term()
        return self._mark(_make_if(cond, then, other), t0)

    def case_term(self) -> Term:
        t0 = self.expect("kw", "case")
        scr = self.term()
        self.expect("kw", "of")
        self.expect("kw", "inl")
        xl = self.expect("ident").text
        self.expect("sym", "=>")
        left = self.term()
        self.expect("sym", "|")
        self.expect("kw", "inr")
        xr = self.expect("ident").text
        self.expect("sym", "=>")
        right = self.term()
        return self._mark(
            Case(scr, Lam(xl, None, left), Lam(xr, None, right)), t0)

    def seq_term(self) -> Term:
        t0 = self.peek()
        e = self.cmp_term()
        if self.at("sym", ";"):
            self.next()
            rest = self.term()
            v = fresh_name("seq", rest.fv)
            return self._mark(Do(v, e, rest), t0)
        return e

    def cmp_term(self) -> Term:
        a = self.add_term()
        if self.at("sym", "="):
            t0 = self.next()
            b = self.add_term()
            return self._mark(BinOp("=", a, b), t0)
        return a

    def add_term(self) -> Term:
        if self.at("sym", "-"):
            t0 = self.next()
            a = self._mark(_fold_uminus(self.mul_term()), t0)
        else:
            a = self.mul_term()
        while self.at("sym", "+") or self.at("sym", "-"):
            op = self.next()
            b = self.mul_term()
            a = self._mark(BinOp(op.text, a, b), op)
        return a

    def mul_term(self) -> Term:
        a = self.app_term()
        while self.at("sym", "*") or self.at("sym", "/"):
            op = self.next()
            b = self.app_term()
            a = self._mark(BinOp(op.text, a, b), op)
        return a

    _HEADS = {"ret", "score", "observe", "rec", "fst", "snd", "inl", "inr"}

    def app_term(self) -> Term:
        head = self.head_term()
        while self.starts_atom():
            arg = self.atom()
            head = App(head, arg)
        return head

    def head_term(self) -> Term:
        t = self.peek()
        if t.kind == "kw" and t.text in self._HEADS:
            self.next()
            if t.text == "ret":
                return self._mark(Ret(self.atom()), t)
            if t.text == "score":
                return self._mark(Score(self.atom()), t)
            if t.text == "observe":
                b = self.atom()
                one = RealLit(Interval.point(Dyadic(1)))
                zero = RealLit(Interval.point(Dyadic(0)))
                one.text, zero.text = "1.0", "0.0"
                return self._mark(Score(_make_if(b, one, zero)), t)
            if t.text == "rec":
                return self._mark(Rec(self.atom()), t)
            if t.text == "fst":
                return self._mark(Proj(1, self.atom()), t)
            if t.text == "snd":
                return self._mark(Proj(2, self.atom()), t)
            # inl / inr
            self.expect("sym", "[")
            ann = self.type_expr()
            self.expect("sym", "]")
            idx = 1 if t.text == "inl" else 2
            return self._mark(Inj(idx, ann, self.atom()), t)
        return self.atom()

    def starts_atom(self) -> bool:
        t = self.peek()
        if t.kind in ("int", "real", "ident"):
            return True
        if t.kind == "sym" and t.text == "(":
            return True
        if t.kind == "kw" and t.text in ("sample", "true", "false"):
            return True
        return False

    def atom(self) -> Term:
        t = self.peek()
        if t.kind == "int":
            self.next()
            return self._mark(IntLit(int(t.text)), t)
        if t.kind == "real":
            self.next()
            lit = RealLit(literal_interval(t.text, self.frac_bits))
            lit.text = t.text
            return self._mark(lit, t)
        if t.kind == "ident":
            self.next()
            return self._mark(Var(t.text), t)
        if t.kind == "kw":
            if t.text == "sample":
                self.next()
                return self._mark(Sample(), t)
            if t.text == "true":
                self.next()
                return self._mark(Inj(1, UNIT, UnitLit()), t)
            if t.text == "false":
                self.next()
                return self._mark(Inj(2, UNIT, UnitLit()), t)
        if self.at("sym", "("):
            self.next()
            if self.at("sym", ")"):
                self.next()
                return self._mark(UnitLit(), t)
            inner = self.term()
            if self.at("sym", ","):
                self.next()
                right = self.term()
                self.expect("sym", ")")
                return self._mark(Pair(inner, right), t)
            self.expect("sym", ")")
            return inner
        raise self.err(f"expected a term, found {t.text!r}")

    # -- types

    def type_expr(self) -> Type:
        t = self.type_sum()
        if self.at("sym", "->"):
            self.next()
            return FunT(t, self.type_expr())
        return t

    def type_sum(self) -> Type:
        t = self.type_prod()
        while self.at("sym", "+"):
            self.next()
            t = SumT(t, self.type_prod())
        return t

    def type_prod(self) -> Type:
        t = self.type_atom()
        while self.at("sym", "*"):
            self.next()
            t = ProdT(t, self.type_atom())
        return t

    def type_atom(self) -> Type:
        t = self.peek()
        if t.kind == "kw" and t.text in _BASE_TYPES:
            self.next()
            return _BASE_TYPES[t.text]
        if t.kind == "kw" and t.text in ("dist", "Dist"):
            self.next()
            return DistT(self.type_atom())
        if self.at("sym", "("):
            self.next()
            inner = self.type_expr()
            self.expect("sym", ")")
            return inner
        raise self.err(f"expected a type, found {t.text!r}")


def _make_if(cond: Term, then: Term, other: Term) -> Term:
    v1 = fresh_name("u", then.fv)
    v2 = fresh_name("u", other.fv)
    return Case(cond, Lam(v1, UNIT, then), Lam(v2, UNIT, other))


def _fold_uminus(t: Term) -> Term:
    """Apply unary minus, folding literals."""
    if isinstance(t, IntLit):
        return IntLit(-t.value)
    if isinstance(t, RealLit) and isinstance(t.value, Interval):
        from ..exact.interval import iv_neg
        lit = RealLit(iv_neg(t.value))
        lit.text = "-" + t.text if getattr(t, "text", None) else None
        return lit
    return UMinus(t)


def parse(src: str, literal_prec: int = 64) -> Term:
    p = Parser(tokenize(src), literal_prec)
    out = p.term()
    p.expect("eof")
    return out


def parse_type(src: str) -> Type:
    p = Parser(tokenize(src))
    out = p.type_expr()
    p.expect("eof")
    return out
