"""Plain statistics helpers: weighted moments, empirical-CDF distances,
histograms.  Kept dependency-free; sample sizes here are modest enough
for sorted-list algorithms.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable, Optional, Sequence


def mean_var_ci(xs: Sequence[float]) -> dict:
    """Mean, unbiased sample variance, and a 95% normal CI half-width."""
    n = len(xs)
    if n == 0:
        return {"mean": 0.0, "variance": 0.0, "ci95": 0.0, "count": 0}
    m = math.fsum(xs) / n
    if n > 1:
        var = math.fsum((x - m) ** 2 for x in xs) / (n - 1)
    else:
        var = 0.0
    ci = 1.96 * math.sqrt(var / n) if n else 0.0
    return {"mean": m, "variance": var, "ci95": ci, "count": n}


def weighted_moments(pairs: Iterable[tuple[float, float]]) -> dict:
    """Score-weighted mean and variance of (weight, value) pairs."""
    sw = swx = 0.0
    items = list(pairs)
    for w, x in items:
        sw += w
        swx += w * x
    if sw == 0.0:
        return {"mean": 0.0, "variance": 0.0, "total_weight": 0.0}
    mean = swx / sw
    sv = 0.0
    for w, x in items:
        sv += w * (x - mean) ** 2
    return {"mean": mean, "variance": sv / sw, "total_weight": sw}


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    n = len(xs)
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    sxy = math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    sxx = math.fsum((x - mx) ** 2 for x in xs)
    syy = math.fsum((y - my) ** 2 for y in ys)
    if sxx == 0.0 or syy == 0.0:
        return 0.0
    return sxy / math.sqrt(sxx * syy)


def ks_statistic(xs: Sequence[float], cdf: Callable[[float], float],
                 weights: Optional[Sequence[float]] = None) -> float:
    """One-sample Kolmogorov-Smirnov distance, optionally score-weighted
    (weights normalized by their total)."""
    if not len(xs):
        return 0.0
    if weights is None:
        order = sorted(xs)
        w = [1.0] * len(order)
    else:
        pairs = sorted(zip(xs, weights))
        order = [x for x, _ in pairs]
        w = [wt for _, wt in pairs]
    total = math.fsum(w)
    if total == 0.0:
        return 0.0
    d = 0.0
    cum = 0.0
    for x, wt in zip(order, w):
        f = cdf(x)
        d = max(d, abs(cum / total - f))
        cum += wt
        d = max(d, abs(cum / total - f))
    return d


def ks_two_sample(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Two-sample Kolmogorov-Smirnov distance (unweighted)."""
    xs = sorted(xs)
    ys = sorted(ys)
    nx, ny = len(xs), len(ys)
    i = j = 0
    d = 0.0
    while i < nx and j < ny:
        if xs[i] <= ys[j]:
            i += 1
        else:
            j += 1
        d = max(d, abs(i / nx - j / ny))
    return d


def cdf_uniform01(x: float) -> float:
    return min(1.0, max(0.0, x))


def cdf_exp1(x: float) -> float:
    return 1.0 - math.exp(-x) if x > 0 else 0.0


def cdf_stdnormal(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


REFERENCE_CDFS = {
    "uniform01": cdf_uniform01,
    "exp1": cdf_exp1,
    "stdnormal": cdf_stdnormal,
}


def weighted_histogram(pairs: Iterable[tuple[float, float]], bins: int,
                       lo: Optional[float] = None,
                       hi: Optional[float] = None) -> dict:
    """Histogram of (weight, value); bin weights are raw weight sums, so
    they total the summed weight of the input."""
    items = [(w, x) for w, x in pairs]
    if not items:
        return {"edges": [], "weights": []}
    values = [x for _, x in items]
    if lo is None:
        lo = min(values)
    if hi is None:
        hi = max(values)
    if hi <= lo:
        hi = lo + 1.0
    width = (hi - lo) / bins
    sums = [0.0] * bins
    for w, x in items:
        idx = int((x - lo) / width)
        if idx < 0:
            idx = 0
        elif idx >= bins:
            idx = bins - 1
        sums[idx] += w
    edges = [lo + k * width for k in range(bins + 1)]
    return {"edges": edges, "weights": sums}
