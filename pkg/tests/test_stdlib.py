import pytest

from ispcf.exact.bits import BitStream
from ispcf.lang import parse, check_term, parse_type, type_to_str
from ispcf.machine import run_seeded, mc_estimate, Budgets
from ispcf.stdlib import (
    list_programs, load_program, program_entry, program_source,
)


def test_registry_size_and_names():
    entries = list_programs()
    assert len(entries) >= 16
    names = {e.name for e in entries}
    for expected in ("randbool", "eqbool", "rej", "rej_prime", "observe",
                     "normal", "box_muller", "box_muller_prime",
                     "box_muller_dprime", "prod", "L", "discp", "uniform",
                     "lebesgue", "exp_density", "expo", "expo_prime",
                     "longest_decreasing_run", "von_neumann",
                     "rand_uniform_seq", "rand_uniform_seq4", "find_pair",
                     "box_muller_engine", "box_muller_transform",
                     "pick_a_stick", "dirichlet_demo",
                     "wrong_infinite_prod"):
        assert expected in names, expected


def test_all_programs_typecheck_to_declared_types():
    for entry in list_programs():
        term = entry.load()
        assert term.ty == parse_type(entry.declared_type), entry.name


def test_load_program_examples():
    assert type_to_str(load_program("randbool").ty) == "Dist (unit + unit)"
    assert type_to_str(load_program("box_muller").ty) == \
        "Dist (real * real)"
    with pytest.raises(KeyError):
        load_program("no_such_program")
    with pytest.raises(KeyError):
        program_entry("missing")


def test_runnable_flags_match_types():
    from ispcf.lang.types import DistT, is_observable
    for entry in list_programs():
        term = entry.load()
        runnable = isinstance(term.ty, DistT) and is_observable(
            term.ty.inner)
        assert entry.runnable == runnable, entry.name


def test_wrong_infinite_prod_diverges_when_forced():
    src = ("let wip = (" + program_source("wrong_infinite_prod") + ") in "
           "do g <- wip (fn n: int => sample); ret (pos (g 0 - 0.5))")
    term = check_term(parse(src))
    r = run_seeded(BitStream(0), term, max_steps=2000)
    assert r.outcome == "diverged"


def test_observe_program_conditions():
    out = mc_estimate(source=program_source("observe"),
                      event="real in (0.5, 1)", n=1500, master_seed=0)
    # mass 1/2, all of it above 1/2
    assert abs(out["mean"] - 0.5) < 0.05
    below = mc_estimate(source=program_source("observe"),
                        event="real in (0, 0.5)", n=1500, master_seed=0)
    assert below["mean"] == 0.0


def test_eqbool_agreement_probability():
    out = mc_estimate(source=program_source("eqbool"), event="inl",
                      n=2000, master_seed=4)
    assert abs(out["mean"] - 0.5) < 0.05


def test_dirichlet_demo_marginal():
    out = mc_estimate(source=program_source("dirichlet_demo"),
                      event="int = 1", n=800, master_seed=1)
    assert abs(out["mean"] - 0.5) < 0.07
    other = mc_estimate(source=program_source("dirichlet_demo"),
                        event="int = 0", n=800, master_seed=1)
    assert abs(out["mean"] + other["mean"] - 1.0) < 0.05


def test_scores_nonnegative_and_unscored_report_one():
    for name in ("randbool", "expo_prime", "von_neumann", "L",
                 "rand_uniform_seq4", "eqbool"):
        r = run_seeded(BitStream(11), load_program(name))
        assert r.outcome == "normal"
        assert float(r.score) == 1.0
    for name in ("expo", "lebesgue", "normal", "box_muller_dprime",
                 "observe"):
        r = run_seeded(BitStream(11), load_program(name))
        assert float(r.score) >= 0.0
