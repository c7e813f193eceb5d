"""Nonparametric comparison of optimisers: Wilcoxon rank-sum, Friedman ranks,
Hochberg step-up adjustment.

Everything here is a deterministic function of its inputs.
"""

from dataclasses import dataclass

import numpy as np
from scipy import stats as _st

from .core import ParameterError

EXACT_MAX_SIZE = 10


@dataclass(frozen=True)
class ComparisonVerdict:
    p_value: float
    symbol: str
    statistic: float


@dataclass(frozen=True)
class FriedmanResult:
    chi_square: float
    df: int
    p_value: float
    average_ranks: np.ndarray


def midranks(values):
    """1-based ranks with ties sharing their average rank."""
    return _st.rankdata(np.asarray(values, dtype=np.float64), method="average")


def _tie_groups(ranks):
    _, counts = np.unique(ranks, return_counts=True)
    return counts


def exact_rank_sum_pvalue(a, b):
    """Two-sided permutation p-value of the rank sum of ``a``.

    Counts, over all ``C(N, n)`` relabelings, how many rank sums lie at least
    as far from their mean as the observed one. Midranks handle ties, so the
    distribution is conditional on the observed tie pattern.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    n, m = a.size, b.size
    N = n + m
    # doubled midranks are integers, which keeps the sum distribution exact
    r2 = np.rint(2.0 * midranks(np.concatenate([a, b]))).astype(np.int64)
    w2 = int(r2[:n].sum())
    total = int(r2.sum())
    counts = np.zeros((n + 1, total + 1))
    counts[0, 0] = 1.0
    for r in r2:
        # iterate subset sizes downward so each rank is used at most once
        for k in range(min(n, N) - 1, -1, -1):
            counts[k + 1, r:] += counts[k, : total + 1 - r]
    dist = counts[n]
    mean2 = n * (N + 1)  # twice n(N+1)/2
    sums = np.arange(total + 1)
    extreme = np.abs(sums - mean2) >= abs(w2 - mean2)
    return float(min(1.0, dist[extreme].sum() / dist.sum()))


def normal_rank_sum_pvalue(a, b):
    """Two-sided normal approximation with tie-corrected variance and continuity correction."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    n, m = a.size, b.size
    N = n + m
    ranks = midranks(np.concatenate([a, b]))
    w = ranks[:n].sum()
    mean = n * (N + 1) / 2.0
    t = _tie_groups(ranks)
    tie_term = np.sum(t**3 - t) / (N * (N - 1)) if N > 1 else 0.0
    var = n * m / 12.0 * ((N + 1) - tie_term)
    if var <= 0:
        return 1.0
    z = max(abs(w - mean) - 0.5, 0.0) / np.sqrt(var)
    return float(min(1.0, 2.0 * _st.norm.sf(z)))


def wilcoxon_rank_sum(a, b, alpha=0.05, method="auto"):
    """Rank-sum comparison of sample ``a`` against the reference sample ``b``.

    ``'+'``: ``a`` is significantly better (lower, for minimisation), ``'-'``:
    significantly worse, ``'='``: no significant difference at ``alpha``.
    ``method='auto'`` is exact when both samples have at most 10 values.
    """
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.size == 0 or b.size == 0:
        raise ParameterError("rank-sum test needs two non-empty samples")
    if method == "auto":
        method = "exact" if max(a.size, b.size) <= EXACT_MAX_SIZE else "normal"
    if method == "exact":
        p = exact_rank_sum_pvalue(a, b)
    elif method == "normal":
        p = normal_rank_sum_pvalue(a, b)
    else:
        raise ParameterError(f"unknown method {method!r}")
    ranks = midranks(np.concatenate([a, b]))
    w = float(ranks[: a.size].sum())
    symbol = "="
    if p < alpha:
        ma, mb = np.median(a), np.median(b)
        if ma == mb:
            better = w < a.size * (a.size + b.size + 1) / 2.0
        else:
            better = ma < mb
        symbol = "+" if better else "-"
    return ComparisonVerdict(p_value=p, symbol=symbol, statistic=w)


def friedman_statistic(average_ranks, n_problems):
    """Friedman chi-square from average ranks over ``n_problems`` blocks."""
    R = np.asarray(average_ranks, dtype=np.float64)
    k = R.size
    N = n_problems
    return float(12.0 * N / (k * (k + 1)) * np.sum(R**2) - 3.0 * N * (k + 1))


def friedman(scores):
    """Friedman test on an ``N problems x k algorithms`` matrix (lower is better)."""
    S = np.asarray(scores, dtype=np.float64)
    if S.ndim != 2 or S.shape[0] < 2 or S.shape[1] < 2:
        raise ParameterError("Friedman test needs at least 2 problems and 2 algorithms")
    if not np.all(np.isfinite(S)):
        raise ParameterError("Friedman scores must be finite")
    ranks = np.apply_along_axis(midranks, 1, S)
    avg = ranks.mean(axis=0)
    N, k = S.shape
    chi2 = friedman_statistic(avg, N)
    df = k - 1
    return FriedmanResult(chi2, df, float(_st.chi2.sf(chi2, df)), avg)


def hochberg_adjust(p_values):
    """Hochberg step-up adjusted p-values, returned in input order.

    In ascending order ``p_(1) <= ... <= p_(m)``:
    ``adj_(i) = min_{j >= i} (m - j + 1) p_(j)``, capped at 1.
    """
    p = np.asarray(p_values, dtype=np.float64)
    if np.any((p < 0) | (p > 1)) or np.any(np.isnan(p)):
        raise ParameterError("p-values must lie in [0, 1]")
    m = p.size
    if m == 0:
        return p.copy()
    order = np.argsort(p, kind="stable")
    scaled = (m - np.arange(m)) * p[order]
    adj_sorted = np.minimum(1.0, np.minimum.accumulate(scaled[::-1])[::-1])
    out = np.empty(m)
    out[order] = adj_sorted
    return out


@dataclass(frozen=True)
class PosthocRow:
    index: int
    average_rank: float
    z: float
    p_value: float
    p_hochberg: float


def friedman_posthoc(average_ranks, n_problems, control=None):
    """Each algorithm against the control (best average rank by default).

    ``z = (R_control - R_j) / sqrt(k (k + 1) / (6 N))`` with two-sided normal
    p-values, Hochberg-adjusted across the ``k - 1`` comparisons.
    """
    R = np.asarray(average_ranks, dtype=np.float64)
    k = R.size
    control = int(np.argmin(R)) if control is None else control
    se = np.sqrt(k * (k + 1) / (6.0 * n_problems))
    others = [j for j in range(k) if j != control]
    z = np.array([(R[control] - R[j]) / se for j in others])
    p = 2.0 * _st.norm.sf(np.abs(z))
    adj = hochberg_adjust(p)
    return [PosthocRow(j, float(R[j]), float(zj), float(pj), float(aj))
            for j, zj, pj, aj in zip(others, z, p, adj)]
