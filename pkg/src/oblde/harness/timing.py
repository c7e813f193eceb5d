"""Algorithm-complexity timing: T0 reference loop, T1 bare evaluations,
T2 complete runs, complexity ``(T2 - T1) / T0``.
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from ..core import EvaluationBudget
from ..de import DeConfig, run
from ..objective import evaluate_batch, make_function
from ..obl import make_strategy

TIMING_BUDGET = 200_000
T2_REPEATS = 5
T0_LOOPS = 1_000_000


@dataclass(frozen=True)
class TimingResult:
    algorithm: str
    function: str
    dimension: int
    T0: float
    T1: float
    T2: float

    @property
    def complexity(self):
        return (self.T2 - self.T1) / self.T0


def reference_loop(n=T0_LOOPS):
    """Seconds taken by the standard arithmetic reference loop."""
    t = time.perf_counter()
    x = 0.0
    for i in range(1, n + 1):
        x = 0.55 + i
        x = x + x
        x = x / 2
        x = x * x
        x = math.sqrt(x)
        x = math.log(x)
        x = math.exp(x)
        x = x / (x + 2)
    return time.perf_counter() - t


def bare_evaluations(f, n=TIMING_BUDGET, batch=100, seed=0):
    """Seconds for ``n`` evaluations of ``f`` at uniform points, ``batch`` at a time."""
    rng = np.random.Generator(np.random.Philox(seed))
    X = rng.uniform(f.bounds.min, f.bounds.max, size=(batch, f.dimension))
    budget = EvaluationBudget(n)
    t = time.perf_counter()
    done = 0
    while done < n:
        k = min(batch, n - done)
        evaluate_batch(f, X[:k], budget)
        done += k
    return time.perf_counter() - t


def timing_protocol(dimension, function="shifted-rotated-rastrigin", algorithm="de",
                    NP=100, budget=TIMING_BUDGET, repeats=T2_REPEATS, T0=None, T1=None,
                    transform_seed=0, **strategy_kwargs):
    """Measure T0, T1 and T2 for one algorithm; pass ``T0``/``T1`` to reuse earlier measurements."""
    f = make_function(function, dimension, seed=transform_seed)
    T0 = reference_loop() if T0 is None else T0
    T1 = bare_evaluations(f, budget, batch=NP) if T1 is None else T1
    strategy = None if algorithm == "de" else make_strategy(algorithm, **strategy_kwargs)
    # one short untimed run so kernel compilation is not charged to T2
    run(DeConfig(budget_max=min(budget, 20 * NP), NP=NP, seed=0), f, strategy, algorithm=algorithm)
    times = []
    for r in range(repeats):
        t = time.perf_counter()
        run(DeConfig(budget_max=budget, NP=NP, seed=r), f, strategy, algorithm=algorithm)
        times.append(time.perf_counter() - t)
    return TimingResult(algorithm, function, dimension, T0, T1, float(np.mean(times)))
