"""The type algebra: unit, void, int, real, sums, products, arrows, dist."""

from __future__ import annotations


class Type:
    __slots__ = ()

    def __eq__(self, other):
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self):
        return hash((type(self).__name__, self._key()))

    def _key(self):
        return ()

    def __repr__(self):
        return type_to_str(self)


class BaseType(Type):
    __slots__ = ("name",)

    def __init__(self, name: str):
        object.__setattr__(self, "name", name)

    def _key(self):
        return (self.name,)


UNIT = BaseType("unit")
VOID = BaseType("void")
INT = BaseType("int")
REAL = BaseType("real")


class SumT(Type):
    __slots__ = ("left", "right")

    def __init__(self, left: Type, right: Type):
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    def _key(self):
        return (self.left, self.right)


class ProdT(Type):
    __slots__ = ("left", "right")

    def __init__(self, left: Type, right: Type):
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    def _key(self):
        return (self.left, self.right)


class FunT(Type):
    __slots__ = ("arg", "res")

    def __init__(self, arg: Type, res: Type):
        object.__setattr__(self, "arg", arg)
        object.__setattr__(self, "res", res)

    def _key(self):
        return (self.arg, self.res)


class DistT(Type):
    __slots__ = ("inner",)

    def __init__(self, inner: Type):
        object.__setattr__(self, "inner", inner)

    def _key(self):
        return (self.inner,)


BOOL = SumT(UNIT, UNIT)

BASIC = "basic"
OBSERVABLE = "observable"
GENERAL = "general"


def classify_type(t: Type) -> str:
    """basic < observable < general; observable types have no arrow/dist."""
    if isinstance(t, BaseType):
        return BASIC
    if isinstance(t, (SumT, ProdT)):
        l = classify_type(t.left)
        r = classify_type(t.right)
        if l != GENERAL and r != GENERAL:
            return OBSERVABLE
        return GENERAL
    return GENERAL


def is_observable(t: Type) -> bool:
    return classify_type(t) != GENERAL


def type_to_str(t: Type, _ctx: int = 0) -> str:
    """_ctx: 0 arrow position, 1 sum, 2 product, 3 atom position.

    Sums and products associate to the left; arrows to the right;
    Dist binds tightest.
    """
    if isinstance(t, BaseType):
        return t.name
    if isinstance(t, DistT):
        s = f"Dist {type_to_str(t.inner, 3)}"
        return f"({s})" if _ctx >= 3 else s
    if isinstance(t, FunT):
        s = f"{type_to_str(t.arg, 1)} -> {type_to_str(t.res, 0)}"
        return f"({s})" if _ctx >= 1 else s
    if isinstance(t, SumT):
        s = f"{type_to_str(t.left, 1)} + {type_to_str(t.right, 2)}"
        return f"({s})" if _ctx >= 2 else s
    if isinstance(t, ProdT):
        s = f"{type_to_str(t.left, 2)} * {type_to_str(t.right, 3)}"
        return f"({s})" if _ctx >= 3 else s
    raise TypeError(f"unknown type {t!r}")
