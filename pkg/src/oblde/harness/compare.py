"""Comparison tables built from per-run final errors."""

from dataclasses import dataclass

import numpy as np

from ..stats import friedman, friedman_posthoc, hochberg_adjust, wilcoxon_rank_sum
from .config import ConfigError

COMPARE_HEADER = ["function", "algorithm", "mean", "std", "symbol", "p_raw", "p_hochberg"]
POSTHOC_HEADER = ["algorithm", "average_rank", "z", "p_raw", "p_hochberg"]


@dataclass(frozen=True)
class CompareRow:
    function: str
    algorithm: str
    mean: float
    std: float
    symbol: str
    p_raw: float | None
    p_hochberg: float | None

    def cells(self):
        return [self.function, self.algorithm, self.mean, self.std, self.symbol,
                "" if self.p_raw is None else self.p_raw,
                "" if self.p_hochberg is None else self.p_hochberg]


def _problem(rec):
    return f"{rec.function}@{rec.dimension}"


def _group(pairs):
    groups = {}
    for _, rec in pairs:
        groups.setdefault(_problem(rec), {}).setdefault(rec.algorithm, []).append(rec.final_fev)
    return groups


def compare_table(pairs, reference="de", alpha=0.05):
    """Rank-sum verdict of every algorithm against ``reference`` on every problem.

    ``'+'`` marks an algorithm significantly better than the reference. The
    Hochberg adjustment runs across the compared algorithms of one problem.
    The reference's own row carries no verdict.
    """
    rows = []
    for problem, by_alg in _group(pairs).items():
        if reference not in by_alg:
            raise ConfigError("reference", f"algorithm {reference!r} has no runs on {problem}")
        ref = np.asarray(by_alg[reference])
        others = [a for a in by_alg if a != reference]
        verdicts = [wilcoxon_rank_sum(by_alg[a], ref, alpha=alpha) for a in others]
        adjusted = hochberg_adjust([v.p_value for v in verdicts]) if verdicts else []
        for alg in by_alg:
            v = np.asarray(by_alg[alg], dtype=np.float64)
            std = float(v.std(ddof=1)) if v.size > 1 else 0.0
            if alg == reference:
                rows.append(CompareRow(problem, alg, float(v.mean()), std, "", None, None))
            else:
                i = others.index(alg)
                rows.append(CompareRow(problem, alg, float(v.mean()), std, verdicts[i].symbol,
                                       verdicts[i].p_value, float(adjusted[i])))
    return rows


def friedman_table(pairs):
    """Friedman test over problems (blocks) on mean final error, plus post hoc rows.

    Returns ``(result, algorithms, posthoc_rows)``. Needs at least two problems
    and two algorithms, each algorithm present on every problem.
    """
    groups = _group(pairs)
    algorithms = sorted({a for by_alg in groups.values() for a in by_alg})
    scores = []
    for problem, by_alg in groups.items():
        missing = [a for a in algorithms if a not in by_alg]
        if missing:
            raise ConfigError("algorithms", f"{missing} missing on {problem}")
        scores.append([float(np.mean(by_alg[a])) for a in algorithms])
    result = friedman(np.asarray(scores))
    posthoc = friedman_posthoc(result.average_ranks, len(scores))
    return result, algorithms, posthoc
