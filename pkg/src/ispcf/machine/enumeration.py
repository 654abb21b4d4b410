"""Finite discretization of samplers and exact bounded-depth enumeration.

Discretizing replaces every uniform draw with a finite choice over the
level-n dyadic cells of [0, 1], each carrying its exact probability.
The enumerator then computes the reachability mass of every normal form
within a step bound, exactly: deterministic steps recurse one level
down, finite choices branch with their weights, and score steps scale
the branch by the score literal's near-side distance from zero (a
dyadic, hence an exact rational).  Blocked branches and branches that
run out of depth contribute nothing.
"""

from __future__ import annotations

from fractions import Fraction

from ..exact.dyadic import Dyadic
from ..exact.interval import Interval
from ..exact.oracle import ExactReal
from ..lang.ast import (
    Term, Lam, App, Rec, Ret, Do, Pair, Proj, Inj, Case, Sample, SampleFin,
    Score,
)
from ..lang.printer import to_source
from ..lang.constants import EvalCtx
from ..valuation import (
    SimpleValuation, partition_valuation, uniform01, Partition,
)
from .engine import (
    State, Budgets, _locate, _fire, _Outcome, NORMAL, MachineError,
)


class BranchExplosion(Exception):
    pass


def level_cells(n: int) -> tuple:
    """The level-n cells of [0, 1] with their uniform weights."""
    pts = [Dyadic(k, -n) for k in range((1 << n) + 1)]
    nu = partition_valuation(uniform01(), Partition(pts))
    return tuple((w, cell) for w, cell in nu.entries)


def discretize(term: Term, n: int) -> Term:
    """Replace every uniform draw with the level-n finite choice."""
    entries = level_cells(n)

    def walk(t: Term) -> Term:
        cls = type(t)
        if cls is Sample:
            out = SampleFin(entries)
            out.ty = t.ty
            return out
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
        out.pos = t.pos
        return out

    return walk(term)


def normal_form_key(t: Term):
    """Hashable structural key for a normal form; interval literals
    compare by endpoints."""
    from ..lang.ast import RealLit, IntLit, UnitLit, ConstRef
    cls = type(t)
    if cls is RealLit:
        v = t.value
        if isinstance(v, ExactReal):
            return ("real", v.interval.key())
        if isinstance(v, Interval):
            return ("real", v.key())
        return ("real", id(v))
    if cls is IntLit:
        return ("int", t.value)
    if cls is UnitLit:
        return ("unit",)
    if cls is ConstRef:
        return ("const", t.name)
    if cls is Ret:
        return ("ret", normal_form_key(t.body))
    if cls is Pair:
        return ("pair", normal_form_key(t.left), normal_form_key(t.right))
    if cls is Inj:
        return ("inj", t.index, normal_form_key(t.body))
    if cls is Lam:
        return ("lam", to_source(t))
    return ("term", to_source(t))


def enumerate_mass(term: Term, depth: int,
                   budgets: Budgets | None = None) -> SimpleValuation[Term]:
    """Exact normal-form mass reachable within `depth` steps.

    The term's probabilistic choices must all be finite (discretize
    first); hitting `budgets.max_branches` live branches raises
    BranchExplosion.
    """
    budgets = budgets or Budgets()
    ctx = EvalCtx(budgets.cmp_budget, budgets.literal_prec)
    root = State(term, budgets, ctx)

    acc: dict = {}
    rep: dict = {}
    spawned = 1

    def settle(key_state: State, weight: Fraction):
        total = weight * key_state.score.as_fraction()
        if total == 0:
            return
        nf = key_state.term()
        k = normal_form_key(nf)
        acc[k] = acc.get(k, Fraction(0)) + total
        rep.setdefault(k, nf)

    stack = [(root, Fraction(1))]
    while stack:
        state, weight = stack.pop()
        # run this branch until it terminates, branches, or runs out
        while True:
            try:
                rule = _locate(state)
            except _Outcome as o:
                if o.kind == NORMAL:
                    settle(state, weight)
                break
            if state.steps >= depth:
                break
            if rule[0] == "sample_fin":
                entries = state.focus.entries
                spawned += len(entries)
                if spawned > budgets.max_branches:
                    raise BranchExplosion(
                        f"more than {budgets.max_branches} branches "
                        f"explored")
                for w, cell in entries:
                    if w == 0:
                        continue
                    child = state.fork()
                    child.i += 1
                    child.steps += 1
                    child.focus = Ret(_cell_literal(cell))
                    stack.append((child, weight * w))
                break
            if rule[0] == "sample":
                raise MachineError(
                    "enumeration needs a discretized program")
            try:
                _fire(state, rule, None, budgets)
            except _Outcome:
                # blocked or undecided branches carry no mass
                break
            if rule[0] == "score" and state.score.is_zero():
                break

    out = SimpleValuation()
    for k in sorted(acc, key=repr):
        if acc[k] != 0:
            out.entries.append((acc[k], rep[k]))
    return out


def _cell_literal(cell: Interval):
    from ..lang.ast import RealLit
    return RealLit(ExactReal(cell))

