"""Pearson, Spearman and Kendall tau-b correlation with two-sided p-values
and the usual significance stars."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numba
import numpy as np
from scipy.special import betainc

from .errors import UndefinedCorrelationError, ValidationError
from .tn import TnResult

METHODS = ("pearson", "spearman", "kendall")
STAR_LEVELS = ((0.01, "***"), (0.05, "**"), (0.1, "*"))


def stars(p: float) -> str:
    for level, mark in STAR_LEVELS:
        if p < level:
            return mark
    return ""


@dataclass(frozen=True)
class CorrelationResult:
    method: str
    coefficient: float
    p_value: float
    n: int
    indicator: str = ""

    @property
    def stars(self) -> str:
        return stars(self.p_value)


def _pair(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValidationError(f"length mismatch: {x.shape} vs {y.shape}")
    if len(x) < 3:
        raise ValidationError(f"need at least 3 pairs, got {len(x)}")
    return x, y


def t_test_p(r: float, n: int) -> float:
    """Two-sided p for H0: rho = 0 using t = r sqrt((n-2)/(1-r^2)), df = n-2."""
    df = n - 2
    if abs(r) >= 1.0:
        return 0.0
    t2 = r * r * df / (1.0 - r * r)
    # P(|T| > t) = I_{df/(df+t^2)}(df/2, 1/2)
    return float(betainc(df / 2.0, 0.5, df / (df + t2)))


def _pearson_r(x, y):
    # two-pass with correctly rounded sums; keeps r accurate when sxy cancels
    n = len(x)
    dx = x - math.fsum(x) / n
    dy = y - math.fsum(y) / n
    sxx = math.fsum(dx * dx)
    syy = math.fsum(dy * dy)
    if sxx == 0 or syy == 0:
        raise UndefinedCorrelationError("correlation undefined for a constant vector")
    r = math.fsum(dx * dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, float(r)))


def pearson(x, y) -> CorrelationResult:
    x, y = _pair(x, y)
    r = _pearson_r(x, y)
    return CorrelationResult("pearson", r, t_test_p(r, len(x)), len(x))


def average_ranks(a) -> np.ndarray:
    """1-based ranks; tied values share the mean of the positions they span."""
    a = np.asarray(a)
    order = np.argsort(a, kind="mergesort")
    sa = a[order]
    starts = np.flatnonzero(np.r_[True, sa[1:] != sa[:-1]])
    ends = np.r_[starts[1:], len(a)]
    mean_rank = (starts + ends + 1) / 2.0
    ranks = np.empty(len(a))
    ranks[order] = np.repeat(mean_rank, ends - starts)
    return ranks


def spearman(x, y) -> CorrelationResult:
    x, y = _pair(x, y)
    rho = _pearson_r(average_ranks(x), average_ranks(y))
    return CorrelationResult("spearman", rho, t_test_p(rho, len(x)), len(x))


@numba.njit(cache=True)
def _count_swaps(y):
    """Inversions in ``y`` (strict y[i] > y[j] for i < j), via bottom-up merge sort.
    Sorts ``y`` in place."""
    n = len(y)
    buf = np.empty_like(y)
    swaps = 0
    width = 1
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i = lo
            j = mid
            k = lo
            while i < mid and j < hi:
                if y[j] < y[i]:
                    buf[k] = y[j]
                    swaps += mid - i
                    j += 1
                else:
                    buf[k] = y[i]
                    i += 1
                k += 1
            while i < mid:
                buf[k] = y[i]
                i += 1
                k += 1
            while j < hi:
                buf[k] = y[j]
                j += 1
                k += 1
        y, buf = buf, y
        width *= 2
    return swaps, y


def _tie_sums(sorted_vals):
    """(sum t(t-1)/2, sum t(t-1)(2t+5), sum t(t-1)(t-2)) over tie groups."""
    edges = np.flatnonzero(np.r_[True, sorted_vals[1:] != sorted_vals[:-1], True])
    t = np.diff(edges).astype(np.int64)
    t = t[t > 1]
    return (
        int((t * (t - 1) // 2).sum()),
        int((t * (t - 1) * (2 * t + 5)).sum()),
        int((t * (t - 1) * (t - 2)).sum()),
    )


def _joint_ties(xs, ys):
    """Pairs tied in both x and y; inputs sorted lexicographically by (x, y)."""
    change = np.r_[True, (xs[1:] != xs[:-1]) | (ys[1:] != ys[:-1]), True]
    t = np.diff(np.flatnonzero(change)).astype(np.int64)
    return int((t * (t - 1) // 2).sum())


def kendall_tau_b(x, y) -> CorrelationResult:
    """Tau-b in O(n log n) (Knight's merge-sort algorithm).

    tau_b = (C - D) / sqrt((n0 - n1)(n0 - n2)); the p-value is the normal
    approximation with the tie-corrected variance of C - D.
    """
    x, y = _pair(x, y)
    n = len(x)
    order = np.lexsort((y, x))
    xs, ys = x[order], y[order]
    n0 = n * (n - 1) // 2
    n1, vx, tx = _tie_sums(xs)
    n3 = _joint_ties(xs, ys)
    swaps, ys_sorted = _count_swaps(ys.copy())
    n2, vy, ty = _tie_sums(ys_sorted)
    if n1 == n0 or n2 == n0:
        raise UndefinedCorrelationError("tau-b undefined: all pairs tied in one vector")
    s = n0 - n1 - n2 + n3 - 2 * swaps  # concordant - discordant
    tau = s / math.sqrt((n0 - n1) * (n0 - n2))
    tau = max(-1.0, min(1.0, tau))
    var = (
        (n * (n - 1) * (2 * n + 5) - vx - vy) / 18.0
        + (2.0 * n1) * (2.0 * n2) / (2.0 * n * (n - 1))
        + tx * ty / (9.0 * n * (n - 1) * (n - 2))
    )
    p = math.erfc(abs(s) / math.sqrt(2.0 * var)) if var > 0 else 0.0
    return CorrelationResult("kendall", tau, p, n)


_FUNCS = {"pearson": pearson, "spearman": spearman, "kendall": kendall_tau_b}


def correlate(x, y, method: str) -> CorrelationResult:
    try:
        fn = _FUNCS[method]
    except KeyError:
        raise ValidationError(f"unknown correlation method {method!r}") from None
    return fn(x, y)


def correlate_tn(
    tn_result: TnResult,
    indicators: Mapping[str, np.ndarray],
    methods=METHODS,
    exclude_zero: bool = False,
) -> list[CorrelationResult]:
    """Correlate TN with each indicator, one row per (method, indicator).

    Unreachable scholars and NaN indicator values are dropped pairwise; with
    ``exclude_zero`` scholars whose indicator is 0 are dropped too.
    """
    tn = tn_result.values()
    rows = []
    for method in methods:
        for name, values in indicators.items():
            v = np.asarray(values, dtype=float)
            if len(v) != len(tn):
                raise ValidationError(f"indicator {name!r} is not aligned with TN")
            keep = ~np.isnan(tn) & ~np.isnan(v)
            if exclude_zero:
                keep &= v != 0
            if keep.sum() < 3:
                raise ValidationError(
                    f"fewer than 3 complete pairs for {method}/{name}"
                )
            r = correlate(tn[keep], v[keep], method)
            rows.append(CorrelationResult(method, r.coefficient, r.p_value, r.n, name))
    return rows
