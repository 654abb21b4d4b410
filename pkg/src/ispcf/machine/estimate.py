"""Monte-Carlo estimation of termination mass and output statistics.

Each sample j runs the seeded machine on its own bit stream, keyed by
(master seed, j), so samples are independent, reproducible, and safe to
farm out to worker processes.  Aggregation always walks results in
index order; worker count cannot change any reported number.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Optional

from ..exact.bits import BitStream, derive_seed
from ..exact.oracle import RealOracle
from ..lang.ast import Term, Ret
from ..lang.parser import parse
from ..lang.check import check_term
from ..lang.values import PairV, InjV, UNIT_VAL
from ..stats import mean_var_ci
from .engine import Budgets, run_seeded, term_value
from .events import parse_event
from .enumeration import discretize


def extract_reals(value, prec: int, out: Optional[list] = None
                  ) -> Optional[tuple]:
    """All real components of an observable value, left to right, as
    floats read at the given precision; None when any stays unbounded."""
    top = out is None
    if out is None:
        out = []
    if isinstance(value, RealOracle):
        iv = value.query(prec)
        if iv.lo is None or iv.hi is None:
            return None
        out.append(float(iv.midpoint()))
    elif isinstance(value, PairV):
        if extract_reals(value.left, prec, out) is None:
            return None
        if extract_reals(value.right, prec, out) is None:
            return None
    elif isinstance(value, InjV):
        if extract_reals(value.value, prec, out) is None:
            return None
    elif isinstance(value, int) or value is UNIT_VAL:
        pass
    return tuple(out) if top else ()


def _run_range(term: Term, event, master_seed: int, start: int, stop: int,
               budgets: Budgets, extract: bool) -> list:
    records = []
    for j in range(start, stop):
        stream = BitStream(derive_seed(master_seed, j))
        res = run_seeded(stream, term, budgets)
        if res.outcome != "normal":
            records.append((res.outcome, 0.0, 0.0, None))
            continue
        body = res.value.body if type(res.value) is Ret else res.value
        value = term_value(body, None)
        score = float(res.score)
        hit = event(value, budgets.cmp_budget)
        if hit is None:
            records.append(("undecided", 0.0, score, None))
            continue
        comps = (extract_reals(value, budgets.value_prec)
                 if extract else None)
        records.append(("normal", score if hit else 0.0, score, comps))
    return records


def _worker(args):
    (source, level, event_text, master_seed, start, stop, budget_items,
     extract) = args
    budgets = Budgets(**dict(budget_items))
    term = check_term(parse(source, budgets.literal_prec))
    if level is not None:
        term = discretize(term, level)
    event = parse_event(event_text)
    return _run_range(term, event, master_seed, start, stop, budgets,
                      extract)


def worker_cap() -> int:
    """Worker count from ISPCF_THREADS; defaults to 1 (serial)."""
    raw = os.environ.get("ISPCF_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def mc_estimate(term: Optional[Term] = None, *, source: Optional[str] = None,
                event: str = "all", n: int = 10_000, master_seed: int = 0,
                budgets: Optional[Budgets] = None,
                discretize_level: Optional[int] = None,
                workers: Optional[int] = None,
                extract: bool = False) -> dict:
    """Average score over n seeded runs whose normal form lands in the
    event, plus bookkeeping on runs that did not produce a verdict.

    Parallel execution needs `source` (workers re-parse it); results are
    identical for every worker count.
    """
    budgets = budgets or Budgets()
    pred = parse_event(event)
    if workers is None:
        workers = worker_cap()
    if term is None:
        if source is None:
            raise ValueError("need a term or its source")
        term = check_term(parse(source, budgets.literal_prec))
        if discretize_level is not None:
            term = discretize(term, discretize_level)

    if workers > 1 and source is not None and n >= 4 * workers:
        chunk = (n + workers - 1) // workers
        jobs = []
        for w in range(workers):
            start, stop = w * chunk, min((w + 1) * chunk, n)
            if start >= stop:
                break
            jobs.append((source, discretize_level, event, master_seed,
                         start, stop, tuple(budgets.as_dict().items()),
                         extract))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_worker, jobs))
        records = [r for ch in chunks for r in ch]
    else:
        records = _run_range(term, pred, master_seed, 0, n, budgets,
                             extract)

    contributions = [r[1] for r in records]
    outcomes = [r[0] for r in records]
    base = mean_var_ci(contributions)
    result = {
        "samples": n,
        "mean": base["mean"],
        "variance": base["variance"],
        "ci95": base["ci95"],
        "undecided_fraction": outcomes.count("undecided") / n,
        "blocked_fraction": outcomes.count("blocked") / n,
        "diverged_fraction": outcomes.count("diverged") / n,
        "normal_count": outcomes.count("normal"),
    }
    if extract:
        result["weighted_values"] = [
            (r[2], r[3]) for r in records
            if r[0] == "normal" and r[3] is not None]
    return result


def standard_error(result: dict) -> float:
    return math.sqrt(result["variance"] / result["samples"]) \
        if result["samples"] else 0.0
