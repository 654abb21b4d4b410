"""The built-in constant registry.

Every constant is first order (basic argument types, observable result)
and strict: bottom in, bottom out.  Evaluators receive semantic values
and an evaluation context that supplies precision budgets and a
node cache, so repeated applications to the same operands share one
oracle node.
"""

from __future__ import annotations

from typing import Callable, Optional

from ..exact.interval import Interval
from ..exact.oracle import (
    RealOracle, ExactReal, ArithReal, PrimReal, PiReal, decide_sign, Sign,
    MuxReal, DEFAULT_BUDGET,
)
from ..exact.interval import iv_arith, iv_primitive
from .types import Type, REAL, INT, BOOL, FunT
from .values import (
    BOTTOM_VAL, UNDECIDED_VAL, TRUE_VAL, FALSE_VAL, is_real,
)


class EvalCtx:
    """Budgets and per-run caches threaded through constant evaluation."""

    __slots__ = ("cmp_budget", "exact_prec", "cache")

    def __init__(self, cmp_budget: int = DEFAULT_BUDGET, exact_prec: int = 64,
                 cache: Optional[dict] = None):
        self.cmp_budget = cmp_budget
        self.exact_prec = exact_prec
        self.cache = cache if cache is not None else {}


DEFAULT_CTX = EvalCtx()


class ConstantSig:
    __slots__ = ("name", "arg_types", "result", "evaluator", "strict",
                 "arity")

    def __init__(self, name: str, arg_types: tuple, result: Type,
                 evaluator: Callable, strict: bool = True):
        self.name = name
        self.arg_types = arg_types
        self.result = result
        self.evaluator = evaluator
        self.strict = strict
        self.arity = len(arg_types)

    @property
    def type(self) -> Type:
        t = self.result
        for a in reversed(self.arg_types):
            t = FunT(a, t)
        return t

    def apply(self, args, ctx: EvalCtx):
        if self.strict and any(v is BOTTOM_VAL for v in args):
            return BOTTOM_VAL
        return self.evaluator(args, ctx)


def _arith_eval(op):
    def ev(args, ctx: EvalCtx):
        a = args[0]
        b = args[1] if len(args) > 1 else None
        if isinstance(a, ExactReal) and (b is None or isinstance(b, ExactReal)):
            iv = iv_arith(op, a.interval,
                          b.interval if b is not None else None,
                          ctx.exact_prec)
            return ExactReal(iv)
        key = (op, id(a), id(b))
        node = ctx.cache.get(key)
        if node is None:
            node = ArithReal(op, a, b)
            ctx.cache[key] = node
        return node
    return ev


def _prim_eval(name):
    def ev(args, ctx: EvalCtx):
        a = args[0]
        if isinstance(a, ExactReal):
            return ExactReal(iv_primitive(name, a.interval, ctx.exact_prec))
        key = (name, id(a))
        node = ctx.cache.get(key)
        if node is None:
            node = PrimReal(name, a)
            ctx.cache[key] = node
        return node
    return ev


def _pos_eval(args, ctx: EvalCtx):
    sign, certain = decide_sign(args[0], ctx.cmp_budget)
    if sign == Sign.POSITIVE:
        return TRUE_VAL
    if sign == Sign.NEGATIVE:
        return FALSE_VAL
    return BOTTOM_VAL if certain else UNDECIDED_VAL


def _odd_eval(args, ctx: EvalCtx):
    return TRUE_VAL if args[0] % 2 != 0 else FALSE_VAL


def _mux_eval(args, ctx: EvalCtx):
    x, m = args
    if m < 0:
        return BOTTOM_VAL
    key = ("mux", id(x), m)
    node = ctx.cache.get(key)
    if node is None:
        node = MuxReal(x, m, ctx.cmp_budget, ctx.cache)
        ctx.cache[key] = node
    return node


_PI = PiReal()


def _pi_eval(args, ctx: EvalCtx):
    return _PI


def build_registry() -> dict[str, ConstantSig]:
    reg: dict[str, ConstantSig] = {}

    def add(name, arg_types, result, evaluator):
        reg[name] = ConstantSig(name, tuple(arg_types), result, evaluator)

    for op in ("add", "sub", "mul", "div"):
        add(op, (REAL, REAL), REAL, _arith_eval(op))
    add("neg", (REAL,), REAL, _arith_eval("neg"))
    for fn in ("sin", "cos", "tan", "exp", "log", "sqrt", "arctan"):
        add(fn, (REAL,), REAL, _prim_eval(fn))
    add("pi", (), REAL, _pi_eval)
    add("pos", (REAL,), BOOL, _pos_eval)
    add("odd", (INT,), BOOL, _odd_eval)
    add("iadd", (INT, INT), INT, lambda a, c: a[0] + a[1])
    add("isub", (INT, INT), INT, lambda a, c: a[0] - a[1])
    add("ieq", (INT, INT), BOOL,
        lambda a, c: TRUE_VAL if a[0] == a[1] else FALSE_VAL)
    add("mux", (REAL, INT), REAL, _mux_eval)
    return reg


REGISTRY = build_registry()

# operator spellings resolved by the type checker
OPERATOR_TABLE = {
    ("+", REAL): "add",
    ("-", REAL): "sub",
    ("*", REAL): "mul",
    ("/", REAL): "div",
    ("+", INT): "iadd",
    ("-", INT): "isub",
    ("=", INT): "ieq",
}

# printable names for resolved operator constants
CONST_TO_OPERATOR = {
    "add": "+", "sub": "-", "mul": "*", "div": "/",
    "iadd": "+", "isub": "-", "ieq": "=",
}
