from fractions import Fraction as F

import mpmath
import pytest

from ispcf.exact.bits import BitStream, substream
from ispcf.exact.dyadic import Dyadic
from ispcf.lang import parse, check_term, to_source, term_eq
from ispcf.machine import (
    Budgets, classify, step_det, run_seeded, MachineError, mc_estimate,
    parse_event, term_value, State,
)
from ispcf.machine.engine import step_seeded
from ispcf.stdlib import program_source


def chk(src):
    return check_term(parse(src))


def run(src, seed=0, **kw):
    return run_seeded(BitStream(seed), chk(src), **kw)


# -- classification


def test_classify_examples():
    assert classify(chk("ret 0.5")) == ("normal",)
    assert classify(chk("do x <- ret 1.0; ret x")) == ("redex", "do_ret")
    assert classify(chk("ret sample")) == ("normal",)
    assert classify(chk("sample")) == ("redex", "sample")
    assert classify(chk("score 0.5")) == ("redex", "score")
    assert classify(chk("rec (fn x: int => x)")) == ("redex", "rec")
    assert classify(chk("fst (1.0, 2.0)")) == ("redex", "proj1")
    assert classify(chk("pos 1.0")) == ("redex", "const")
    # a sign test of an exact zero cannot produce an observable value
    assert classify(chk("pos 0.0"))[0] == "blocked"
    assert classify(chk("pos (0.0 - 1.0)")) == ("redex", "const")
    assert classify(chk("fn x: real => x")) == ("normal",)
    # probabilistic rules stay out of constructor contexts
    assert classify(chk("ret (score 1.0)")) == ("normal",)
    assert classify(chk("(ret sample, ret 1)")) == ("normal",)


def test_unique_rule_on_corpus_steps():
    # every reachable configuration classifies deterministically; stepping
    # twice from the same term gives identical results
    term = chk(program_source("randbool"))
    r1 = run_seeded(BitStream(5), term, trace=True)
    r2 = run_seeded(BitStream(5), chk(program_source("randbool")),
                    trace=True)
    assert [x[1] for x in r1.trace] == [x[1] for x in r2.trace]


# -- deterministic steps


def test_step_det_examples():
    t = step_det(chk("rec (fn f: real -> real => f)"))
    assert term_eq(t, chk(
        "(fn f: real -> real => f) (rec (fn f: real -> real => f))"))
    assert term_eq(step_det(chk("fst (1.0, 2.0)")), chk("1.0"))
    stepped = step_det(chk(
        "case inl[unit] () of inl x => ret x | inr y => ret y"))
    assert to_source(stepped) == "(fn x: unit => ret x) ()"
    with pytest.raises(MachineError):
        step_det(chk("sample"))


def test_beta_under_ret():
    # deterministic rules fire below constructors
    t = chk("ret (fst (1.0, 2.0))")
    assert classify(t) == ("redex", "proj1")
    assert term_eq(step_det(t), chk("ret 1.0"))


# -- seeded runs


def test_run_trivial():
    r = run("ret (ret 1)")
    assert r.outcome == "normal" and r.steps == 0
    assert float(r.score) == 1.0
    assert to_source(r.value) == "ret (ret 1)"


def test_run_divergence():
    r = run("rec (fn x: dist int => x)", max_steps=500)
    assert r.outcome == "diverged"
    assert r.steps == 500


def test_randbool_hand_trace():
    # substream-0 bits starting 1,1 put the draw in [3/4, 1]: true branch
    seed = next(s for s in range(100)
                if substream(BitStream(s), 0).bit(0) == 1
                and substream(BitStream(s), 0).bit(1) == 1)
    r = run(program_source("randbool"), seed=seed)
    assert r.outcome == "normal"
    assert to_source(r.value) == "ret true"


def test_score_multiplication():
    r = run("do u <- (score 2.5; ret ()); ret u")
    assert r.outcome == "normal"
    assert float(r.score) == 2.5
    # negative literals score their distance from zero on the near side
    r2 = run("score (-2.0); ret ()")
    assert float(r2.score) == 2.0
    # zero annihilates and stays zero
    r3 = run("score 0.0; score 3.0; ret ()")
    assert r3.outcome == "normal" and float(r3.score) == 0.0


def test_score_of_unscored_program_is_one():
    for name in ("randbool", "expo_prime", "von_neumann", "L"):
        r = run_seeded(BitStream(3), chk(program_source(name)))
        assert r.outcome == "normal" and float(r.score) == 1.0


def test_run_score_weight_of_compound_argument():
    # the score argument reduces via constant application inside the
    # score context before the score rule fires
    r = run("score (2.0 * 3.0); ret ()")
    assert float(r.score) == 6.0


def test_sigma_k_monotone():
    term = chk(program_source("randbool"))
    full = run_seeded(BitStream(9), term)
    assert full.outcome == "normal"
    k = full.steps
    # below the termination step: no normal form yet
    for limit in range(k):
        partial = run_seeded(BitStream(9), chk(program_source("randbool")),
                             max_steps=limit)
        assert partial.outcome == "diverged"
    # at and above: identical outcome and score
    for limit in (k, k + 1, k + 50):
        again = run_seeded(BitStream(9), chk(program_source("randbool")),
                           max_steps=limit)
        assert again.outcome == "normal"
        assert again.score == full.score
        assert again.steps == k


def test_seed_determinism_bitwise():
    a = run(program_source("expo_prime"), seed=7, trace=True)
    b = run(program_source("expo_prime"), seed=7, trace=True)
    assert a.trace == b.trace
    assert a.score == b.score
    va = term_value(a.value.body, None).query(50)
    vb = term_value(b.value.body, None).query(50)
    assert va == vb


def test_step_seeded_api():
    budgets = Budgets()
    state = State(chk("do x <- ret 1.0; ret x"), budgets)
    out = step_seeded(BitStream(0), state, budgets)
    assert out.kind == "stepped" and out.rule == "do_ret"
    out2 = step_seeded(BitStream(0), state, budgets)
    assert out2.kind == "normal"
    assert to_source(state.term()) == "ret 1.0"


def test_subject_reduction_on_corpus():
    for name in ("randbool", "expo_prime", "observe", "L"):
        r = run_seeded(BitStream(1), chk(program_source(name)),
                       type_check_each_step=True)
        assert r.outcome == "normal"


def test_expo_prime_replay_oracle():
    """The produced value is -log of the sampled uniform: replay the
    substream bits through an independent high-precision evaluation."""
    r = run(program_source("expo_prime"), seed=7)
    assert r.outcome == "normal"
    body = r.value.body
    got = term_value(body, None).query(60)
    bits = [substream(BitStream(7), 0).bit(n) for n in range(200)]
    u = sum(F(b, 1 << (i + 1)) for i, b in enumerate(bits))
    with mpmath.workprec(250):
        true = -mpmath.log(mpmath.mpf(u.numerator) / u.denominator)
        assert got.lo.as_fraction() <= float(true) + 1e-15
        assert got.hi.as_fraction() >= float(true) - 1e-15


def test_samples_used_counts_draws():
    r = run(program_source("box_muller"), seed=2)
    assert r.samples_used == 2
    r2 = run(program_source("randbool"), seed=2)
    assert r2.samples_used == 1


def test_mc_trivial_exact():
    out = mc_estimate(term=chk("ret 0"), event="int = 0", n=50)
    assert out["mean"] == 1.0 and out["variance"] == 0.0
    out2 = mc_estimate(term=chk("ret 1"), event="int = 0", n=50)
    assert out2["mean"] == 0.0


def test_mc_blocked_and_diverged_fractions():
    out = mc_estimate(term=chk("score 0.0; ret (pos 0.0)"), n=20)
    assert out["blocked_fraction"] == 1.0
    slow = Budgets(max_steps=100)
    out2 = mc_estimate(term=chk("rec (fn x: dist int => x)"), n=10,
                       budgets=slow)
    assert out2["diverged_fraction"] == 1.0
    assert out2["mean"] == 0.0


def test_event_boundary_point_is_decidably_outside():
    # an exact literal on the endpoint of an open interval is outside it
    out = mc_estimate(term=chk("ret 0.5"), event="real in (0.5, 1)", n=8)
    assert out["mean"] == 0.0 and out["undecided_fraction"] == 0.0
    out2 = mc_estimate(term=chk("ret 0.5"), event="real in (0, 1)", n=8)
    assert out2["mean"] == 1.0


def test_event_undecided_counted():
    # x - x never separates from 0 at any precision: the membership
    # test exhausts its budget
    out = mc_estimate(term=chk("do x <- sample; ret (x - x)"),
                      event="real in (0, 1)", n=8,
                      budgets=Budgets(cmp_budget=256))
    assert out["undecided_fraction"] == 1.0
    assert out["mean"] == 0.0
