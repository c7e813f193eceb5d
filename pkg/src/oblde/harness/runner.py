"""Seeded run farm: expands an :class:`ExperimentConfig` into independent
runs, executes them (optionally in worker processes) and summarises the
final errors per algorithm and function.
"""

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..de import DeConfig, checkpoint_schedule, run
from ..objective import make_function
from ..obl import make_strategy

WORKERS_ENV = "OBLDE_WORKERS"


@dataclass(frozen=True)
class RunSpec:
    """Everything one run needs; picklable so it can cross process boundaries."""

    function: str
    dimension: int
    algorithm: str
    run_index: int
    seed: int


@dataclass(frozen=True)
class SummaryRow:
    function: str
    dimension: int
    algorithm: str
    runs: int
    mean: float
    std: float
    median: float
    best: float
    worst: float

    def formatted(self):
        """``MEAN (STD DEV)`` cell as printed in result tables."""
        return f"{self.mean:.2E} ({self.std:.2E})"


def expand(config):
    """All run specs in canonical order: function, dimension, algorithm, run index."""
    specs = []
    for fn in config.functions:
        for d in config.dimensions:
            for alg in config.algorithms:
                for i in range(config.runs):
                    specs.append(RunSpec(fn, d, alg, i, config.base_seed + i))
    return specs


def execute(config, spec):
    """Run one spec; the result depends only on ``config`` and ``spec``."""
    budget = config.budget_for(spec.dimension)
    f = make_function(spec.function, spec.dimension, seed=config.transform_seed)
    de = DeConfig(
        budget_max=budget,
        F=config.de.F,
        CR=config.de.CR,
        NP=config.de.NP,
        jumping_rate=config.obl.jumping_rate,
        diversity_threshold=config.obl.dt,
        seed=spec.seed,
        crossover=config.de.crossover,
        T=config.obl.T,
    )
    strategy = None
    if spec.algorithm != "de":
        o = config.obl
        strategy = make_strategy(spec.algorithm, o.jumping_rate, o.rate_max, o.rate_min,
                                 o.window, o.T, o.crossover, o.diversity)
    rec = run(de, f, strategy, checkpoints=checkpoint_schedule(budget, config.checkpoints), algorithm=spec.algorithm)
    rec.best_x = None  # not emitted; keeps the inter-process payload small
    return rec


def _execute_pair(args):
    return execute(*args)


def resolve_workers(workers=None):
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1") or 1)
    return max(1, int(workers))


def run_experiment(config, workers=None):
    """Execute every run of ``config``.

    Returns ``(records, summary)`` with records in canonical order, each
    paired with its run index. Results do not depend on the worker count.
    """
    config.validate()
    specs = expand(config)
    workers = min(resolve_workers(workers), len(specs))
    if workers == 1:
        records = [execute(config, s) for s in specs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_execute_pair, [(config, s) for s in specs],
                                    chunksize=max(1, len(specs) // (4 * workers))))
    pairs = list(zip((s.run_index for s in specs), records))
    return pairs, summarize(pairs)


def summarize(pairs):
    """Mean, sample std, median, best and worst final FEV per (function, D, algorithm)."""
    groups = {}
    for _, rec in pairs:
        groups.setdefault((rec.function, rec.dimension, rec.algorithm), []).append(rec.final_fev)
    rows = []
    for (fn, d, alg), values in groups.items():
        v = np.asarray(values, dtype=np.float64)
        rows.append(SummaryRow(
            function=fn, dimension=d, algorithm=alg, runs=v.size,
            mean=float(v.mean()),
            std=float(v.std(ddof=1)) if v.size > 1 else 0.0,
            median=float(np.median(v)),
            best=float(v.min()),
            worst=float(v.max()),
        ))
    return rows
