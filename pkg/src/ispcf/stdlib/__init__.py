"""The example-program library: checked sources plus a registry with
declared types and reference statistics.
"""

from __future__ import annotations

from importlib import resources
from typing import Optional

from ..lang.ast import Term
from ..lang.parser import parse, parse_type
from ..lang.check import check_term
from ..lang.types import type_to_str


class ProgramEntry:
    __slots__ = ("name", "filename", "declared_type", "runnable",
                 "reference", "notes")

    def __init__(self, name: str, declared_type: str, runnable: bool,
                 reference: Optional[dict] = None, notes: str = ""):
        self.name = name
        self.filename = f"{name}.ispcf"
        self.declared_type = declared_type
        self.runnable = runnable
        self.reference = reference or {}
        self.notes = notes

    def source(self) -> str:
        return (resources.files(__package__) / "programs"
                / self.filename).read_text(encoding="utf-8")

    def load(self, literal_prec: int = 64) -> Term:
        term = check_term(parse(self.source(), literal_prec))
        declared = parse_type(self.declared_type)
        if term.ty != declared:
            raise TypeError(
                f"{self.name}: declared {self.declared_type}, "
                f"checked {type_to_str(term.ty)}")
        return term


_ENTRIES = [
    ProgramEntry(
        "randbool", "dist bool", True,
        {"p_true": 0.5}, "fair coin from one uniform draw"),
    ProgramEntry(
        "eqbool", "dist bool", True,
        {"p_true": 0.5}, "two independent coins agree half the time"),
    ProgramEntry(
        "rej", "dist real -> (real -> dist bool) -> dist real", False,
        notes="rejection sampling by recursion"),
    ProgramEntry(
        "rej_prime", "dist real -> (real -> dist bool) -> dist real", False,
        notes="rejection sampling by scoring"),
    ProgramEntry(
        "observe", "dist real", True,
        {"mass": 0.5, "mean_given_accept": 0.75},
        "uniform conditioned on exceeding 1/2"),
    ProgramEntry(
        "uniform", "real -> real -> dist real", False,
        notes="affine transport onto [a, b]"),
    ProgramEntry(
        "lebesgue", "dist real", True,
        {"mass_0_1": 1.0, "mass_-2_3": 5.0},
        "flat line measure; weighted events over (a, b) estimate b - a"),
    ProgramEntry(
        "exp_density", "real -> real", False,
        notes="unit exponential density, undefined exactly at 0"),
    ProgramEntry(
        "expo", "dist real", True,
        {"mean": 1.0, "variance": 1.0},
        "unit exponential via density scoring"),
    ProgramEntry(
        "expo_prime", "dist real", True,
        {"mean": 1.0, "variance": 1.0}, "unit exponential by inversion"),
    ProgramEntry(
        "longest_decreasing_run", "real -> int -> dist int", False,
        notes="run-length helper for the parity method"),
    ProgramEntry(
        "von_neumann", "dist real", True,
        {"mean": 1.0, "variance": 1.0},
        "unit exponential by run-length parity"),
    ProgramEntry(
        "normal", "dist real", True,
        {"mean": 0.0, "variance": 1.0},
        "standard normal via density scoring over the flat measure"),
    ProgramEntry(
        "prod", "dist real -> dist real -> dist (real * real)", False,
        notes="product measure by sequential draws"),
    ProgramEntry(
        "L", "dist real", True,
        {"mean": 0.0, "variance": 1.0 / 3.0}, "uniform on [-1, 1]"),
    ProgramEntry(
        "discp", "real * real -> dist bool", False,
        notes="open unit disc membership"),
    ProgramEntry(
        "box_muller", "dist (real * real)", True,
        {"mean": 0.0, "variance": 1.0, "correlation": 0.0},
        "pair of independent standard normals"),
    ProgramEntry(
        "box_muller_prime", "dist (real * real)", True,
        {"mean": 0.0, "variance": 1.0, "correlation": 0.0},
        "polar-method variant with recursive rejection"),
    ProgramEntry(
        "box_muller_dprime", "dist (real * real)", True,
        {"mean_score": 0.7853981633974483},
        "polar-method variant with score rejection; mass pi/4"),
    ProgramEntry(
        "rand_uniform_seq", "dist (int -> real)", False,
        notes="infinite independent uniforms from one draw"),
    ProgramEntry(
        "rand_uniform_seq4", "dist ((real * real) * (real * real))", True,
        {"mean": 0.5},
        "first four demultiplexed channels, observable wrapper"),
    ProgramEntry(
        "find_pair",
        "(real -> real -> bool) -> (int -> real) -> real * real", False,
        notes="first adjacent pair satisfying a test"),
    ProgramEntry(
        "box_muller_engine", "(int -> real) -> real * real", False,
        notes="polar method over a given list of uniforms"),
    ProgramEntry(
        "box_muller_transform", "real -> real * real", False,
        notes="deterministic seed-to-normals transform"),
    ProgramEntry(
        "box_muller_seeded", "dist (real * real)", True,
        {"mean": 0.0, "variance": 1.0},
        "runnable wrapper for the seed-driven polar method"),
    ProgramEntry(
        "pick_a_stick", "(int -> real) -> (int -> real) -> int -> int",
        False, notes="stick-breaking index selection"),
    ProgramEntry(
        "dirichlet_demo", "dist int", True,
        {"p_one": 0.5},
        "stick-breaking draw over a fair two-point base"),
    ProgramEntry(
        "wrong_infinite_prod",
        "((int -> dist real) -> dist (int -> real))", False,
        notes="unguarded infinite product; diverges when forced"),
]

_BY_NAME = {e.name: e for e in _ENTRIES}


def list_programs() -> list[ProgramEntry]:
    return list(_ENTRIES)


def load_program(name: str, literal_prec: int = 64) -> Term:
    entry = _BY_NAME.get(name)
    if entry is None:
        raise KeyError(f"unknown program {name!r}")
    return entry.load(literal_prec)


def program_entry(name: str) -> ProgramEntry:
    entry = _BY_NAME.get(name)
    if entry is None:
        raise KeyError(f"unknown program {name!r}")
    return entry


def program_source(name: str) -> str:
    return program_entry(name).source()
