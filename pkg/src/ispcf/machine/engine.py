"""Small-step reduction engine.

The reduction relation factors every closed term uniquely as a context
around a focus.  Contexts come in two kinds: the weak frames (score,
application, do, case, projections, constant arguments) under which the
probabilistic rules may fire, and the constructor frames (ret, pairs,
injections) under which only deterministic rules apply.  Constructor
frames only ever sit outside weak frames, and the engine enforces both
disciplines with two counters instead of re-scanning the whole term.

The engine keeps the current focus plus an explicit frame stack, so one
reduction step costs amortized O(1) decomposition work plus the local
rewrite itself.
"""

from __future__ import annotations

from bisect import bisect_right
from fractions import Fraction
from typing import Optional

from ..exact.dyadic import Dyadic, ONE
from ..exact.interval import Interval, abs_lower
from ..exact.oracle import RealOracle, ExactReal
from ..exact.bits import stream_real, substream
from ..lang.ast import (
    Term, Var, ConstRef, RealLit, IntLit, UnitLit, Lam, App, Rec, Ret, Do,
    Pair, Proj, Inj, Case, Sample, SampleFin, Score, subst,
)
from ..lang.types import SumT, ProdT, Type
from ..lang.constants import REGISTRY, EvalCtx
from ..lang.values import (
    BOTTOM_VAL, UNDECIDED_VAL, UNIT_VAL, PairV, InjV,
)

# frame tags
F_APPFUN = 0   # weak: hole in function position, pending argument
F_APPARG = 1   # weak: hole in a constant's argument, function part done
F_DO = 2       # weak
F_SCORE = 3    # weak
F_CASE = 4     # weak
F_PROJ = 5     # weak
F_RET = 6      # constructor
F_PAIRL = 7    # constructor
F_PAIRR = 8    # constructor
F_INJ = 9      # constructor

_CONSTRUCTOR_FRAMES = (F_RET, F_PAIRL, F_PAIRR, F_INJ)

# outcomes
STEPPED = "stepped"
NORMAL = "normal"
BLOCKED = "blocked"
UNDECIDED = "undecided"
BRANCH = "branch"  # internal: enumerator drives a finite choice

DETERMINISTIC_RULES = frozenset(
    ("rec", "beta", "const", "proj1", "proj2", "case_inl", "case_inr"))
PROBABILISTIC_RULES = frozenset(("sample", "sample_fin", "score", "do_ret"))


class MachineError(Exception):
    pass


class Budgets:
    __slots__ = ("cmp_budget", "score_prec", "literal_prec", "value_prec",
                 "max_steps", "max_branches")

    def __init__(self, cmp_budget: int = 1 << 16, score_prec: int = 64,
                 literal_prec: int = 64, value_prec: int = 48,
                 max_steps: int = 100_000, max_branches: int = 1 << 20):
        self.cmp_budget = cmp_budget
        self.score_prec = score_prec
        self.literal_prec = literal_prec
        self.value_prec = value_prec
        self.max_steps = max_steps
        self.max_branches = max_branches

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__slots__}


class State:
    """Enriched configuration plus its context decomposition."""

    __slots__ = ("focus", "stack", "n_constructor", "n_weakframes",
                 "i", "score", "steps", "ctx")

    def __init__(self, term: Term, budgets: Budgets,
                 ctx: Optional[EvalCtx] = None):
        self.focus = term
        self.stack: list = []
        self.n_constructor = 0   # constructor frames on the stack
        self.n_weakframes = 0    # weak frames on the stack
        self.i = 0
        self.score = ONE
        self.steps = 0
        self.ctx = ctx or EvalCtx(budgets.cmp_budget, budgets.literal_prec)

    def fork(self) -> "State":
        s = State.__new__(State)
        s.focus = self.focus
        s.stack = list(self.stack)
        s.n_constructor = self.n_constructor
        s.n_weakframes = self.n_weakframes
        s.i = self.i
        s.score = self.score
        s.steps = self.steps
        s.ctx = self.ctx
        return s

    def term(self) -> Term:
        """Reassemble the whole term from focus and stack."""
        t = self.focus
        for fr in reversed(self.stack):
            tag = fr[0]
            if tag == F_APPFUN:
                t = App(t, fr[1])
            elif tag == F_APPARG:
                t = App(fr[1], t)
            elif tag == F_DO:
                t = Do(fr[1], t, fr[2])
            elif tag == F_SCORE:
                t = Score(t)
            elif tag == F_CASE:
                t = Case(t, fr[1], fr[2])
            elif tag == F_PROJ:
                t = Proj(fr[1], t)
            elif tag == F_RET:
                t = Ret(t)
            elif tag == F_PAIRL:
                t = Pair(t, fr[1])
            elif tag == F_PAIRR:
                t = Pair(fr[1], t)
            elif tag == F_INJ:
                t = Inj(fr[1], fr[2], t)
        return t

    def _push(self, frame):
        self.stack.append(frame)
        if frame[0] >= F_RET:
            self.n_constructor += 1
        else:
            self.n_weakframes += 1

    def _pop(self):
        frame = self.stack.pop()
        if frame[0] >= F_RET:
            self.n_constructor -= 1
        else:
            self.n_weakframes -= 1
        return frame


def is_literal(t: Term) -> bool:
    """Zero-ary constants of basic type: the a-underline class."""
    cls = type(t)
    if cls is RealLit or cls is IntLit or cls is UnitLit:
        return True
    if cls is ConstRef:
        sig = REGISTRY.get(t.name)
        return sig is not None and sig.arity == 0
    return False


def literal_value(t: Term, ctx: EvalCtx):
    cls = type(t)
    if cls is RealLit:
        v = t.value
        if isinstance(v, Interval):
            w = t.wrapped
            if w is None:
                w = ExactReal(v)
                t.wrapped = w
            return w
        return v
    if cls is IntLit:
        return t.value
    if cls is UnitLit:
        return UNIT_VAL
    if cls is ConstRef:
        return REGISTRY[t.name].apply((), ctx)
    raise MachineError(f"not a literal: {t!r}")


def _const_spine(t: Term):
    """(sig, args) if t is a constant applied to literal values only."""
    args = []
    while type(t) is App:
        args.append(t.arg)
        t = t.fun
    if type(t) is not ConstRef:
        return None
    sig = REGISTRY.get(t.name)
    if sig is None:
        return None
    args.reverse()
    if len(args) > sig.arity or not all(is_literal(a) for a in args):
        return None
    return sig, args


def underline(v, ty: Type) -> Term:
    """Term literal for an observable semantic value."""
    if isinstance(v, RealOracle):
        return RealLit(v)
    if isinstance(v, bool):
        raise MachineError("raw bool has no literal")
    if isinstance(v, int):
        return IntLit(v)
    if v is UNIT_VAL:
        return UnitLit()
    if isinstance(v, PairV):
        if not isinstance(ty, ProdT):
            raise MachineError("pair value at non-product type")
        return Pair(underline(v.left, ty.left), underline(v.right, ty.right))
    if isinstance(v, InjV):
        if not isinstance(ty, SumT):
            raise MachineError("injection value at non-sum type")
        if v.index == 1:
            return Inj(1, ty.right, underline(v.value, ty.left))
        return Inj(2, ty.left, underline(v.value, ty.right))
    raise MachineError(f"cannot underline {v!r}")


def term_value(t: Term, ctx: EvalCtx):
    """Semantic value of a normal form of observable type."""
    cls = type(t)
    if cls is Pair:
        return PairV(term_value(t.left, ctx), term_value(t.right, ctx))
    if cls is Inj:
        return InjV(t.index, term_value(t.body, ctx))
    return literal_value(t, ctx)


class _Outcome(Exception):
    """Internal non-step outcome raised during location/firing."""

    def __init__(self, kind, reason=None, payload=None):
        self.kind = kind
        self.reason = reason
        self.payload = payload


def _locate(state: State):
    """Advance the decomposition until a rule can fire; returns a rule
    descriptor ('rule_id', data) or raises _Outcome for terminal states.

    Descending mutates only the stack (no reductions are performed), so
    the represented term never changes here.  Stack bookkeeping is
    inlined with local variables and written back on every exit.
    """
    focus = state.focus
    stack = state.stack
    push = stack.append
    pop = stack.pop
    ncon = state.n_constructor
    nweak = state.n_weakframes

    def _sync():
        state.n_constructor = ncon
        state.n_weakframes = nweak

    try:
        while True:
            # descend phase: extend the context along the unique spine
            while True:
                cls = type(focus)
                if cls is App:
                    push((F_APPFUN, focus.arg))
                    nweak += 1
                    focus = focus.fun
                elif cls is Do:
                    push((F_DO, focus.var, focus.rest))
                    nweak += 1
                    focus = focus.first
                elif cls is Score:
                    push((F_SCORE,))
                    nweak += 1
                    focus = focus.body
                elif cls is Case:
                    push((F_CASE, focus.left, focus.right))
                    nweak += 1
                    focus = focus.scrutinee
                elif cls is Proj:
                    push((F_PROJ, focus.index))
                    nweak += 1
                    focus = focus.body
                elif cls is Rec:
                    state.focus = focus
                    return ("rec",)
                elif cls is Sample:
                    state.focus = focus
                    if ncon == 0:
                        return ("sample",)
                    raise _Outcome(NORMAL)
                elif cls is SampleFin:
                    state.focus = focus
                    if ncon == 0:
                        return ("sample_fin",)
                    raise _Outcome(NORMAL)
                elif cls is Ret and nweak == 0:
                    push((F_RET,))
                    ncon += 1
                    focus = focus.body
                elif cls is Pair and nweak == 0:
                    push((F_PAIRL, focus.right))
                    ncon += 1
                    focus = focus.left
                elif cls is Inj and nweak == 0:
                    push((F_INJ, focus.index, focus.ann))
                    ncon += 1
                    focus = focus.body
                elif cls is Var:
                    raise MachineError(
                        f"free variable {focus.name!r} at focus")
                else:
                    break

            # pop phase: focus is a value (atom, abstraction, partial
            # constant application, or constructor we may not enter);
            # `spine` caches the constant-application shape of the focus
            spine = None
            while True:
                if not stack:
                    state.focus = focus
                    raise _Outcome(NORMAL)
                top = stack[-1]
                tag = top[0]
                if tag == F_APPFUN:
                    if type(focus) is Lam:
                        state.focus = focus
                        return ("beta", top[1])
                    if spine is None:
                        spine = _const_spine(focus)
                    if spine is None:
                        raise MachineError(
                            f"application of a non-function {focus!r}")
                    sig, args = spine
                    if len(args) >= sig.arity:
                        raise MachineError(
                            f"constant {sig.name} over-applied")
                    arg = top[1]
                    acls = type(arg)
                    if acls is RealLit or acls is IntLit \
                            or acls is UnitLit or is_literal(arg):
                        pop()
                        nweak -= 1
                        args = args + [arg]
                        if len(args) == sig.arity:
                            state.focus = focus
                            return ("const", sig, args)
                        focus = App(focus, arg)
                        spine = (sig, args)
                        continue
                    pop()
                    push((F_APPARG, focus, sig, args))
                    focus = arg
                    break
                if tag == F_APPARG:
                    if not is_literal(focus):
                        raise MachineError(
                            "constant argument did not reduce to a "
                            "literal")
                    pop()
                    nweak -= 1
                    sig, args = top[2], top[3]
                    args = args + [focus]
                    rebuilt = App(top[1], focus)
                    if len(args) == sig.arity:
                        state.focus = rebuilt
                        return ("const", sig, args)
                    focus = rebuilt
                    spine = (sig, args)
                    continue
                if tag == F_DO:
                    if type(focus) is Ret:
                        state.focus = focus
                        if ncon == 0:
                            return ("do_ret", top[1], top[2])
                        raise _Outcome(NORMAL)
                    raise MachineError("do of a non-ret value")
                if tag == F_CASE:
                    if type(focus) is Inj:
                        state.focus = focus
                        return ("case_inl" if focus.index == 1
                                else "case_inr", top[1], top[2])
                    raise MachineError("case of a non-injection value")
                if tag == F_PROJ:
                    if type(focus) is Pair:
                        state.focus = focus
                        return ("proj1" if top[1] == 1 else "proj2",)
                    raise MachineError("projection of a non-pair value")
                if tag == F_SCORE:
                    if is_literal(focus):
                        state.focus = focus
                        if ncon == 0:
                            return ("score",)
                        raise _Outcome(NORMAL)
                    raise MachineError("score of a non-real value")
                if tag == F_RET:
                    pop()
                    ncon -= 1
                    focus = Ret(focus)
                    spine = None
                    continue
                if tag == F_PAIRL:
                    pop()
                    push((F_PAIRR, focus))
                    focus = top[1]
                    break
                if tag == F_PAIRR:
                    pop()
                    ncon -= 1
                    focus = Pair(top[1], focus)
                    spine = None
                    continue
                if tag == F_INJ:
                    pop()
                    ncon -= 1
                    focus = Inj(top[1], top[2], focus)
                    spine = None
                    continue
            state.focus = focus
            # loop: descend into the new focus
    finally:
        _sync()


def _fire(state: State, rule, stream, budgets: Budgets):
    """Apply the located rule; mutates state; returns the rule id."""
    rid = rule[0]
    focus = state.focus
    if rid == "rec":
        state.focus = App(focus.body, focus)
    elif rid == "beta":
        state._pop()
        state.focus = subst(focus.body, focus.var, rule[1])
    elif rid == "const":
        _, sig, args = rule
        ctx = state.ctx
        vals = [literal_value(a, ctx) for a in args]
        res = sig.apply(vals, ctx)
        if res is BOTTOM_VAL:
            raise _Outcome(BLOCKED, reason=f"{sig.name} has no value here")
        if res is UNDECIDED_VAL:
            raise _Outcome(
                UNDECIDED,
                reason=f"{sig.name} undecided within {budgets.cmp_budget} "
                       f"bits")
        state.focus = underline(res, sig.result)
    elif rid == "do_ret":
        state._pop()
        state.focus = subst(rule[2], rule[1], focus.body)
    elif rid == "case_inl" or rid == "case_inr":
        state._pop()
        state.focus = App(rule[1] if rid == "case_inl" else rule[2],
                          focus.body)
    elif rid == "proj1":
        state._pop()
        state.focus = focus.left
    elif rid == "proj2":
        state._pop()
        state.focus = focus.right
    elif rid == "score":
        state._pop()
        w = _score_weight(focus, state.ctx, budgets)
        state.score = state.score * w
        state.focus = Ret(UnitLit())
    elif rid == "sample":
        if stream is None:
            raise MachineError("sample outside a seeded run; discretize "
                               "or provide a bit stream")
        oracle = stream_real(substream(stream, state.i))
        state.i += 1
        state.focus = Ret(RealLit(oracle))
    elif rid == "sample_fin":
        if stream is None:
            raise _Outcome(BRANCH, payload=focus.entries)
        cell = _draw_finite(focus, stream, state.i, budgets)
        state.i += 1
        if cell is None:
            raise _Outcome(UNDECIDED, reason="finite draw on a boundary")
        state.focus = Ret(RealLit(ExactReal(cell)))
    else:
        raise MachineError(f"unknown rule {rid}")
    state.steps += 1
    return rid


def _score_weight(lit: Term, ctx: EvalCtx, budgets: Budgets) -> Dyadic:
    v = literal_value(lit, ctx)
    if isinstance(v, ExactReal):
        return abs_lower(v.interval)
    return abs_lower(v.query(budgets.score_prec))


def _finite_draw_table(node):
    table = node.draw_table
    if table is None:
        entries = node.entries
        n = len(entries)
        bits = n.bit_length() - 1
        if n == (1 << bits) and all(
                w == Fraction(1, n) for w, _ in entries):
            table = ("uniform", bits)
        else:
            cum = [Fraction(0)]
            for w, _ in entries:
                cum.append(cum[-1] + w)
            if cum[-1] != 1:
                raise MachineError("finite sampling needs total mass 1")
            table = ("general", cum)
        node.draw_table = table
    return table


def _draw_finite(node, stream, i, budgets: Budgets):
    """Pick a branch of a finite distribution with the i-th substream.

    Entries must carry probability weights (total mass 1).  Equal
    dyadic weights read the cell index straight off the bit prefix;
    otherwise the uniform draw is refined until it separates two
    cumulative cutoffs (a draw exactly on a cutoff never separates and
    reports no branch).
    """
    entries = node.entries
    kind, data = _finite_draw_table(node)
    sub = substream(stream, i)
    if kind == "uniform":
        idx = 0
        for j in range(data):
            idx = (idx << 1) | sub.bit(j)
        return entries[idx][1]
    cum = data
    u = stream_real(sub)
    k = max(4, (len(entries) - 1).bit_length())
    while k <= budgets.cmp_budget:
        iv = u.query(k)
        lo = iv.lo.as_fraction()
        hi = iv.hi.as_fraction()
        j = bisect_right(cum, lo) - 1
        if j >= len(entries):
            j = len(entries) - 1
        if hi < cum[j + 1] or (hi == cum[j + 1] == 1):
            return entries[j][1]
        if k == budgets.cmp_budget:
            break
        k = min(k * 2, budgets.cmp_budget)
    return None


class StepOutcome:
    """Result of one reduction attempt on an enriched configuration."""

    __slots__ = ("kind", "rule", "state", "reason")

    def __init__(self, kind, rule=None, state=None, reason=None):
        self.kind = kind      # stepped | normal | blocked | undecided
        self.rule = rule
        self.state = state
        self.reason = reason

    def __repr__(self):
        extra = f" {self.rule}" if self.rule else ""
        return f"<{self.kind}{extra}>"


class RunResult:
    __slots__ = ("outcome", "value", "score", "steps", "samples_used",
                 "reason", "trace")

    def __init__(self, outcome, value, score, steps, samples_used,
                 reason=None, trace=None):
        self.outcome = outcome   # normal | diverged | blocked | undecided
        self.value = value       # normal-form term when outcome == normal
        self.score = score       # exact dyadic
        self.steps = steps
        self.samples_used = samples_used
        self.reason = reason
        self.trace = trace

    def score_float(self) -> float:
        return float(self.score)


def classify(term: Term, budgets: Optional[Budgets] = None):
    """('redex', rule_id) / ('normal',) / ('blocked', reason) for a
    closed well-typed term, via the unique context decomposition."""
    budgets = budgets or Budgets()
    state = State(term, budgets)
    try:
        rule = _locate(state)
    except _Outcome as o:
        if o.kind == NORMAL:
            return ("normal",)
        return (o.kind, o.reason)
    if rule[0] == "const":
        # applying the constant may still block; classification must say so
        probe = state.fork()
        try:
            _fire(probe, rule, None, budgets)
        except _Outcome as o:
            if o.kind == BLOCKED:
                return ("blocked", o.reason)
            return (o.kind, o.reason)
    return ("redex", rule[0])


def step_det(term: Term, budgets: Optional[Budgets] = None) -> Term:
    """One deterministic step; the caller must know (via classify) that a
    deterministic rule applies."""
    budgets = budgets or Budgets()
    state = State(term, budgets)
    rule = _locate(state)
    if rule[0] not in DETERMINISTIC_RULES:
        raise MachineError(f"rule {rule[0]} is not deterministic")
    _fire(state, rule, None, budgets)
    return state.term()


def step_seeded(stream, state: State, budgets: Budgets) -> StepOutcome:
    """One reduction step of the seeded machine."""
    try:
        rule = _locate(state)
        rid = _fire(state, rule, stream, budgets)
    except _Outcome as o:
        return StepOutcome(o.kind, state=state, reason=o.reason)
    return StepOutcome(STEPPED, rule=rid, state=state)


def run_seeded(stream, term: Term, budgets: Optional[Budgets] = None,
               max_steps: Optional[int] = None, trace: bool = False,
               type_check_each_step: bool = False) -> RunResult:
    """Reduce to a normal form under one bit stream.

    Deterministic in (stream, budgets): same inputs, same trace.
    """
    budgets = budgets or Budgets()
    limit = max_steps if max_steps is not None else budgets.max_steps
    state = State(term, budgets)
    log = [] if trace else None
    slow = trace or type_check_each_step
    try:
        if slow:
            while True:
                rule = _locate(state)
                if state.steps >= limit:
                    break
                rid = _fire(state, rule, stream, budgets)
                if log is not None:
                    log.append((state.steps, rid, state.i,
                                float(state.score)))
                if type_check_each_step:
                    from ..lang.check import check_term
                    check_term(state.term())
        else:
            while True:
                rule = _locate(state)
                if state.steps >= limit:
                    break
                _fire(state, rule, stream, budgets)
    except _Outcome as o:
        if o.kind == NORMAL:
            return RunResult("normal", state.term(), state.score,
                             state.steps, state.i, trace=log)
        return RunResult(o.kind, None, state.score, state.steps, state.i,
                         reason=o.reason, trace=log)
    return RunResult("diverged", None, state.score, state.steps, state.i,
                     reason=f"no normal form within {limit} steps",
                     trace=log)
