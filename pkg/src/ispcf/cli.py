"""Command-line driver.

    ispcf check  <program>
    ispcf run    <program> [--seed S] [--max-steps K] [--trace]
    ispcf sample <program> [--samples N] [--seed S] [--event E]
                           [--bins B] [--moments] [--ks CDF]
    ispcf enumerate <program> [--level n] [--depth d] [--event E]
    ispcf measure-approx --measure NAME [--level n] [--open "(a,b)"]

<program> is a path to a .ispcf file or the name of a library program.
Exit codes: 0 ok, 1 user error, 2 resource guard (branch explosion).
ISPCF_THREADS caps sampling parallelism (default 1).
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from fractions import Fraction

from .lang.parser import parse, ParseError
from .lang.check import check_term, TypeCheckError
from .lang.printer import to_source
from .lang.types import type_to_str, DistT, REAL, is_observable
from .machine.engine import Budgets, run_seeded
from .machine.estimate import mc_estimate, extract_reals, worker_cap
from .machine.events import parse_event, EventSyntaxError
from .machine.enumeration import (
    discretize, enumerate_mass, BranchExplosion,
)
from .machine import engine
from .exact.bits import BitStream
from .valuation import (
    resolve_measure, partition_valuation, dyadic_partition, scott_open_of,
    measure_open,
)
from .stats import (
    weighted_moments, ks_statistic, REFERENCE_CDFS, weighted_histogram,
)
from .report import Report, fraction_str, interval_json, valuation_json
from . import stdlib


class UserError(Exception):
    pass


def _budget_flags(p: argparse.ArgumentParser):
    p.add_argument("--cmp-budget", type=int, default=65536,
                   help="max bits a sign test may read (default 65536)")
    p.add_argument("--score-prec", type=int, default=64,
                   help="bits used to evaluate score arguments")
    p.add_argument("--literal-precision", type=int, default=64,
                   help="fractional bits for decimal literals")
    p.add_argument("--value-prec", type=int, default=48,
                   help="bits used to read reported real values")
    p.add_argument("--max-steps", type=int, default=100_000)
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ispcf",
        description="interpreter for a statistical language with exact "
                    "real arithmetic")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="type-check a program")
    p.add_argument("program")
    _budget_flags(p)

    p = sub.add_parser("run", help="one seeded run")
    p.add_argument("program")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace", action="store_true")
    _budget_flags(p)

    p = sub.add_parser("sample", help="Monte-Carlo estimation")
    p.add_argument("program")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--event", default="all")
    p.add_argument("--bins", type=int, default=0)
    p.add_argument("--moments", action="store_true")
    p.add_argument("--ks", choices=sorted(REFERENCE_CDFS), default=None)
    p.add_argument("--level", type=int, default=None,
                   help="discretize the sampler at this level first")
    _budget_flags(p)

    p = sub.add_parser("enumerate", help="exact finite enumeration")
    p.add_argument("program")
    p.add_argument("--level", type=int, default=3)
    p.add_argument("--depth", type=int, default=200)
    p.add_argument("--event", default=None)
    p.add_argument("--max-branches", type=int, default=1 << 20)
    _budget_flags(p)

    p = sub.add_parser("measure-approx",
                       help="partition approximation of a measure")
    p.add_argument("--measure", required=True,
                   help="uniform01 | lebesgue | lebesgue_r:<n> | point:<q>")
    p.add_argument("--level", type=int, default=3)
    p.add_argument("--open", dest="open_interval", default=None,
                   metavar="(a,b)")
    _budget_flags(p)
    return ap


def _budgets(args) -> Budgets:
    return Budgets(
        cmp_budget=args.cmp_budget,
        score_prec=args.score_prec,
        literal_prec=args.literal_precision,
        value_prec=args.value_prec,
        max_steps=args.max_steps,
        max_branches=getattr(args, "max_branches", 1 << 20),
    )


def load_source(name: str) -> str:
    try:
        return stdlib.program_source(name)
    except KeyError:
        pass
    if os.path.exists(name):
        with open(name, encoding="utf-8") as fh:
            return fh.read()
    raise UserError(f"no program file or library entry named {name!r}")


def _checked(source: str, budgets: Budgets):
    try:
        return check_term(parse(source, budgets.literal_prec))
    except (ParseError, TypeCheckError) as e:
        raise UserError(str(e))


def _config_dict(args, budgets: Budgets, **extra) -> dict:
    cfg = {"program": getattr(args, "program", None),
           "budgets": budgets.as_dict()}
    cfg.update(extra)
    return {k: v for k, v in cfg.items() if v is not None}


def cmd_check(args) -> Report:
    budgets = _budgets(args)
    term = _checked(load_source(args.program), budgets)
    rep = Report("check", _config_dict(args, budgets))
    rep.results = {"type": type_to_str(term.ty)}
    return rep


def cmd_run(args) -> Report:
    budgets = _budgets(args)
    term = _checked(load_source(args.program), budgets)
    if not isinstance(term.ty, DistT) or not is_observable(term.ty.inner):
        raise UserError(
            f"run needs a program of observable distribution type, "
            f"got {type_to_str(term.ty)}")
    res = run_seeded(BitStream(args.seed), term, budgets, trace=args.trace)
    rep = Report("run", _config_dict(args, budgets, seed=args.seed))
    rep.results = {
        "outcome": res.outcome,
        "score": str(res.score),
        "score_float": float(res.score),
        "steps": res.steps,
        "samples_used": res.samples_used,
    }
    if res.outcome == "normal":
        rep.results["value"] = to_source(res.value)
        body = res.value.body if isinstance(res.value, engine.Ret) \
            else res.value
        comps = extract_reals(engine.term_value(body, None),
                              budgets.value_prec)
        if comps:
            rep.results["reals"] = list(comps)
    if res.reason:
        rep.results["reason"] = res.reason
    if args.trace:
        rep.results["trace"] = [
            {"step": s, "rule": r, "i": i, "score": sc}
            for (s, r, i, sc) in res.trace]
    return rep


def cmd_sample(args) -> Report:
    budgets = _budgets(args)
    source = load_source(args.program)
    term = _checked(source, budgets)
    if not isinstance(term.ty, DistT) or not is_observable(term.ty.inner):
        raise UserError(
            f"sample needs a program of observable distribution type, "
            f"got {type_to_str(term.ty)}")
    if args.ks is not None and term.ty.inner != REAL:
        raise UserError("--ks needs a program returning a single real")
    try:
        parse_event(args.event)
    except EventSyntaxError as e:
        raise UserError(str(e))
    need_values = bool(args.bins or args.moments or args.ks)
    out = mc_estimate(
        source=source, event=args.event, n=args.samples,
        master_seed=args.seed, budgets=budgets,
        discretize_level=args.level, extract=need_values)
    rep = Report("sample", _config_dict(
        args, budgets, seed=args.seed, samples=args.samples,
        event=args.event, level=args.level, threads=worker_cap()))
    rep.results = {k: out[k] for k in (
        "samples", "mean", "variance", "ci95", "undecided_fraction",
        "blocked_fraction", "diverged_fraction", "normal_count")}
    if need_values:
        pairs = out["weighted_values"]
        ncomp = max((len(c) for _, c in pairs), default=0)
        if args.moments:
            rep.results["moments"] = [
                weighted_moments((w, c[k]) for w, c in pairs)
                for k in range(ncomp)]
        if args.bins:
            if ncomp == 0:
                raise UserError("--bins needs real output components")
            rep.results["histogram"] = weighted_histogram(
                ((w, c[0]) for w, c in pairs), args.bins)
        if args.ks is not None:
            xs = [c[0] for _, c in pairs]
            ws = [w for w, _ in pairs]
            rep.results["ks"] = {
                "cdf": args.ks,
                "statistic": ks_statistic(xs, REFERENCE_CDFS[args.ks],
                                          weights=ws),
            }
    return rep


def cmd_enumerate(args) -> Report:
    budgets = _budgets(args)
    term = _checked(load_source(args.program), budgets)
    if not isinstance(term.ty, DistT):
        raise UserError("enumerate needs a program of distribution type")
    fin = discretize(term, args.level)
    nu = enumerate_mass(fin, args.depth, budgets)
    rep = Report("enumerate", _config_dict(
        args, budgets, level=args.level, depth=args.depth,
        event=args.event))
    rep.results = {
        "valuation": valuation_json(nu, to_source),
        "total_mass": fraction_str(nu.mass),
    }
    if args.event is not None:
        try:
            pred = parse_event(args.event)
        except EventSyntaxError as e:
            raise UserError(str(e))
        mass = Fraction(0)
        for w, nf in nu.entries:
            body = nf.body if isinstance(nf, engine.Ret) else nf
            if pred(engine.term_value(body, None),
                    budgets.cmp_budget) is True:
                mass += w
        rep.results["event_mass"] = fraction_str(mass)
    return rep


def cmd_measure_approx(args) -> Report:
    budgets = _budgets(args)
    try:
        mu = resolve_measure(args.measure)
    except KeyError as e:
        raise UserError(str(e.args[0]))
    nu = partition_valuation(mu, dyadic_partition(args.level))
    rep = Report("measure-approx", _config_dict(
        args, budgets, measure=args.measure, level=args.level,
        open=args.open_interval))
    rep.results = {
        "valuation": valuation_json(nu, interval_json),
        "total_mass": fraction_str(nu.mass),
    }
    if args.open_interval:
        text = args.open_interval.strip()
        if not (text.startswith("(") and text.endswith(")")):
            raise UserError('--open wants "(a,b)"')
        try:
            a_s, b_s = text[1:-1].split(",")
            a, b = Fraction(a_s.strip()), Fraction(b_s.strip())
        except ValueError:
            raise UserError('--open wants "(a,b)" with rational endpoints')
        mass = measure_open(nu, scott_open_of(a, b))
        rep.results["open_mass"] = fraction_str(mass)
    return rep


_COMMANDS = {
    "check": cmd_check,
    "run": cmd_run,
    "sample": cmd_sample,
    "enumerate": cmd_enumerate,
    "measure-approx": cmd_measure_approx,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        rep = _COMMANDS[args.command](args)
    except UserError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except BranchExplosion as e:
        print(f"resource guard: {e}", file=sys.stderr)
        return 2
    rep.timing = time.perf_counter() - t0
    if getattr(args, "format", "json") == "csv":
        try:
            sys.stdout.write(rep.to_csv())
        except ValueError as e:
            print(f"error: {e}", file=sys.stderr)
            return 1
    else:
        print(rep.to_json())
    return 0


if __name__ == "__main__":
    sys.exit(main())
