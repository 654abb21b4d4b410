"""Syntax-directed type checking.

Annotates every node with its type, resolves operator spellings to
registry constants by operand type, and fills in omitted binder
annotations where the context determines them (let-style applications
and case branches).
"""

from __future__ import annotations

from typing import Optional

from .types import (
    Type, UNIT, INT, REAL, BOOL, SumT, ProdT, FunT, DistT, type_to_str,
)
from .ast import (
    Term, Var, ConstRef, RealLit, IntLit, UnitLit, TemplateVar, Lam, App,
    Rec, Ret, Do, Pair, Proj, Inj, Case, Sample, SampleFin, Score, BinOp,
    UMinus,
)
from .constants import REGISTRY, OPERATOR_TABLE


class TypeCheckError(Exception):
    def __init__(self, msg: str, pos=None):
        if pos:
            msg = f"{pos[0]}:{pos[1]}: {msg}"
        super().__init__(msg)
        self.pos = pos


def typecheck(term: Term, env: Optional[dict] = None,
              registry: Optional[dict] = None) -> Type:
    """Checks and annotates in place (operator nodes are rewritten);
    returns the type.  Raises TypeCheckError otherwise.

    Note: BinOp/UMinus nodes are replaced by constant applications, so
    callers should re-take the root via `check_term` when the root
    itself could be an operator node.
    """
    checked = check_term(term, env, registry)
    if checked is not term:
        raise TypeCheckError("root operator node; use check_term")
    return term.ty


def check_term(term: Term, env: Optional[dict] = None,
               registry: Optional[dict] = None) -> Term:
    """Like typecheck but returns the (possibly rewritten) root node."""
    c = _Checker(registry if registry is not None else REGISTRY)
    return c.check(term, env or {})


class _Checker:
    def __init__(self, registry):
        self.registry = registry

    def fail(self, msg, node) -> TypeCheckError:
        return TypeCheckError(msg, node.pos)

    def expect(self, node: Term, got: Type, want: Type):
        if got != want:
            raise self.fail(
                f"expected {type_to_str(want)}, found {type_to_str(got)}",
                node)

    def check(self, t: Term, env: dict, domain_hint: Optional[Type] = None
              ) -> Term:
        cls = type(t)

        if cls is Var:
            ty = env.get(t.name)
            if ty is None:
                sig = self.registry.get(t.name)
                if sig is None:
                    raise self.fail(f"unbound variable {t.name!r}", t)
                out = ConstRef(t.name)
                out.pos = t.pos
                out.ty = sig.type
                return out
            t.ty = ty
            return t

        if cls is ConstRef:
            sig = self.registry.get(t.name)
            if sig is None:
                raise self.fail(f"unknown constant {t.name!r}", t)
            t.ty = sig.type
            return t

        if cls is RealLit:
            t.ty = REAL
            return t
        if cls is IntLit:
            t.ty = INT
            return t
        if cls is UnitLit:
            t.ty = UNIT
            return t
        if cls is TemplateVar:
            t.ty = REAL
            return t
        if cls is Sample or cls is SampleFin:
            t.ty = DistT(REAL)
            return t

        if cls is Lam:
            if t.ann is None:
                if domain_hint is None:
                    raise self.fail(
                        f"binder {t.var!r} needs a type annotation", t)
                t.ann = domain_hint
            elif domain_hint is not None and t.ann != domain_hint:
                raise self.fail(
                    f"binder {t.var!r}: annotated {type_to_str(t.ann)}, "
                    f"context requires {type_to_str(domain_hint)}", t)
            inner = dict(env)
            inner[t.var] = t.ann
            t.body = self.check(t.body, inner)
            t.ty = FunT(t.ann, t.body.ty)
            return t

        if cls is App:
            if type(t.fun) is Lam and t.fun.ann is None:
                t.arg = self.check(t.arg, env)
                t.fun = self.check(t.fun, env, domain_hint=t.arg.ty)
            else:
                t.fun = self.check(t.fun, env)
                if not isinstance(t.fun.ty, FunT):
                    raise self.fail(
                        f"cannot apply a value of type "
                        f"{type_to_str(t.fun.ty)}", t)
                t.arg = self.check(t.arg, env)
                self.expect(t.arg, t.arg.ty, t.fun.ty.arg)
            t.ty = t.fun.ty.res
            return t

        if cls is Rec:
            t.body = self.check(t.body, env)
            bt = t.body.ty
            if not (isinstance(bt, FunT) and bt.arg == bt.res):
                raise self.fail(
                    f"rec needs an endofunction, found {type_to_str(bt)}", t)
            t.ty = bt.arg
            return t

        if cls is Ret:
            t.body = self.check(t.body, env)
            t.ty = DistT(t.body.ty)
            return t

        if cls is Do:
            t.first = self.check(t.first, env)
            ft = t.first.ty
            if not isinstance(ft, DistT):
                raise self.fail(
                    f"do needs a distribution, found {type_to_str(ft)}", t)
            inner = dict(env)
            inner[t.var] = ft.inner
            t.rest = self.check(t.rest, inner)
            if not isinstance(t.rest.ty, DistT):
                raise self.fail(
                    f"do body must be a distribution, found "
                    f"{type_to_str(t.rest.ty)}", t)
            t.ty = t.rest.ty
            return t

        if cls is Score:
            t.body = self.check(t.body, env)
            self.expect(t.body, t.body.ty, REAL)
            t.ty = DistT(UNIT)
            return t

        if cls is Pair:
            t.left = self.check(t.left, env)
            t.right = self.check(t.right, env)
            t.ty = ProdT(t.left.ty, t.right.ty)
            return t

        if cls is Proj:
            t.body = self.check(t.body, env)
            bt = t.body.ty
            if not isinstance(bt, ProdT):
                raise self.fail(
                    f"projection needs a pair, found {type_to_str(bt)}", t)
            t.ty = bt.left if t.index == 1 else bt.right
            return t

        if cls is Inj:
            t.body = self.check(t.body, env)
            if t.ann is None:
                raise self.fail("injection needs its other component type", t)
            t.ty = (SumT(t.body.ty, t.ann) if t.index == 1
                    else SumT(t.ann, t.body.ty))
            return t

        if cls is Case:
            t.scrutinee = self.check(t.scrutinee, env)
            st = t.scrutinee.ty
            if not isinstance(st, SumT):
                raise self.fail(
                    f"case needs a sum, found {type_to_str(st)}", t)
            t.left = self.check(t.left, env, domain_hint=st.left)
            t.right = self.check(t.right, env, domain_hint=st.right)
            lt, rt = t.left.ty, t.right.ty
            if not isinstance(lt, FunT) or lt.arg != st.left:
                raise self.fail("left branch must consume the left summand",
                                t)
            if not isinstance(rt, FunT) or rt.arg != st.right:
                raise self.fail("right branch must consume the right summand",
                                t)
            if lt.res != rt.res:
                raise self.fail(
                    f"branch types differ: {type_to_str(lt.res)} vs "
                    f"{type_to_str(rt.res)}", t)
            t.ty = lt.res
            return t

        if cls is BinOp:
            left = self.check(t.left, env)
            right = self.check(t.right, env)
            key = (t.op, left.ty)
            name = OPERATOR_TABLE.get(key)
            if name is None or right.ty != left.ty:
                raise self.fail(
                    f"operator {t.op!r} undefined at "
                    f"{type_to_str(left.ty)} and {type_to_str(right.ty)}", t)
            out = App(App(_const(name, self.registry, t.pos), left), right)
            out.fun.ty = FunT(right.ty, self.registry[name].result)
            out.ty = self.registry[name].result
            out.pos = t.pos
            return out

        if cls is UMinus:
            body = self.check(t.body, env)
            if body.ty != REAL:
                raise self.fail(
                    f"unary minus needs a real, found "
                    f"{type_to_str(body.ty)}", t)
            out = App(_const("neg", self.registry, t.pos), body)
            out.ty = REAL
            out.pos = t.pos
            return out

        raise self.fail(f"cannot type node {cls.__name__}", t)


def _const(name: str, registry, pos) -> ConstRef:
    c = ConstRef(name)
    c.ty = registry[name].type
    c.pos = pos
    return c
