"""DE/rand/1 engine with an optional opposition layer.

One generation evaluates the whole trial population at once (synchronous
selection). With a strategy attached, the initial population gets one
opposition step, and each later iteration draws a single uniform number to
choose between a DE generation and an opposition jump.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .core import (
    BudgetExhausted,
    ContractError,
    EvaluationBudget,
    Individual,
    ParameterError,
    Population,
    RngStream,
    random_population_matrix,
)
from .crossover import CrossoverKind
from .obl import apply_strategy, phase_cost
from .objective import evaluate_batch, fev

N_CHECKPOINTS = 16


@dataclass(frozen=True)
class DeConfig:
    budget_max: int
    F: float = 0.5
    CR: float = 0.9
    NP: int = 100
    jumping_rate: float = 0.05
    diversity_threshold: float = 1e-6
    seed: int = 0
    crossover: str = "binomial"
    T: float = 10.0
    target_fev: float | None = None

    def __post_init__(self):
        if not self.F > 0:
            raise ParameterError("F must be positive")
        if not 0.0 <= self.CR <= 1.0:
            raise ParameterError("CR must lie in [0, 1]")
        if self.NP < 4:
            raise ParameterError("DE/rand/1 needs NP >= 4")
        if not 0.0 <= self.jumping_rate <= 1.0:
            raise ParameterError("jumping rate must lie in [0, 1]")
        if self.diversity_threshold < 0:
            raise ParameterError("diversity threshold must be non-negative")
        if self.budget_max < self.NP:
            raise ParameterError("budget must cover at least the initial population")
        CrossoverKind(self.crossover, self.T)


def checkpoint_schedule(budget_max, n=N_CHECKPOINTS):
    """NFE marks at ``n`` log-spaced fractions from 0.01 to 1 of the budget."""
    fractions = np.logspace(-2.0, 0.0, n)
    marks = np.maximum(1, np.round(fractions * budget_max)).astype(np.int64)
    marks[-1] = budget_max
    return [int(m) for m in marks]


@dataclass
class RunRecord:
    seed: int
    function: str
    dimension: int
    algorithm: str
    checkpoints: list
    checkpoint_fevs: list
    final_fev: float
    nfes: int
    wall_time: float
    phase_counts: dict = field(default_factory=dict)
    best_x: np.ndarray | None = field(default=None, repr=False)


def initialize(config, f, budget, rng):
    """Uniform random population over the box, evaluated (NP evaluations)."""
    X = random_population_matrix(f.bounds, config.NP, rng)
    fitness = evaluate_batch(f, X, budget)
    return Population(X, fitness, generation=0)


def draw_donors(NP, rng, n=None):
    """Donor triples for ``n`` targets (default: all), each distinct and excluding the target."""
    n = NP if n is None else n
    picks = rng.integers(0, np.array([NP - 2, NP - 3, NP - 4]), size=(n, 3))
    return kernels.donor_indices(picks)


def mutate_rand1(pop, target_index, F, rng, bounds=None):
    """``x_r1 + F (x_r2 - x_r3)`` for one target, projected into ``bounds``."""
    n = pop.size
    if n < 4:
        raise ParameterError("DE/rand/1 needs NP >= 4")
    picks = rng.integers(0, np.array([n - 2, n - 3, n - 4]))
    taken = [int(target_index)]
    for k in picks:
        k = int(k)
        for e in sorted(taken):
            if k >= e:
                k += 1
        taken.append(k)
    donors = np.array([taken[1:]], dtype=np.int64)
    if bounds is None:
        lo = np.full(pop.dimension, -np.inf)
        hi = np.full(pop.dimension, np.inf)
    else:
        lo, hi = bounds.min, bounds.max
    return kernels.rand1_mutants(pop.X, donors, F, lo, hi)[0]


def select(target, trial):
    """Keep ``trial`` when it is at least as good as ``target``."""
    if not (isinstance(target, Individual) and isinstance(trial, Individual)):
        raise ContractError("select expects two Individuals")
    if not (target.evaluated and trial.evaluated):
        raise ContractError("select needs both individuals evaluated")
    return trial if trial.fitness <= target.fitness else target


def de_generation(pop, config, f, budget, rng, crossover=None):
    """One synchronous DE/rand/1/<crossover> generation; costs NP evaluations."""
    n = pop.size
    if not budget.can_afford(n):
        raise BudgetExhausted("DE generation needs NP evaluations")
    crossover = crossover or CrossoverKind(config.crossover, config.T)
    donors = draw_donors(n, rng)
    mutants = kernels.rand1_mutants(pop.X, donors, config.F, f.bounds.min, f.bounds.max)
    mask = crossover.masks(n, pop.dimension, config.CR, rng)
    trials = np.where(mask, mutants, pop.X)
    f_trial = evaluate_batch(f, trials, budget)
    better = f_trial <= pop.fitness
    X = np.where(better[:, None], trials, pop.X)
    fitness = np.where(better, f_trial, pop.fitness)
    return Population(X, fitness, pop.generation + 1)


class _Tracker:
    def __init__(self, f, marks):
        self.f = f
        self.marks = marks
        self.values = []
        self.best = np.inf
        self.best_x = None

    def update(self, pop, used):
        i = pop.best_index
        if pop.fitness[i] < self.best:
            self.best = float(pop.fitness[i])
            self.best_x = pop.X[i].copy()
        while len(self.values) < len(self.marks) and used >= self.marks[len(self.values)]:
            self.values.append(fev(self.best, self.f))

    def finish(self):
        final = fev(self.best, self.f)
        self.values += [final] * (len(self.marks) - len(self.values))
        return final


def run(config, f, obl=None, checkpoints=None, algorithm=None):
    """One seeded optimisation run until the budget cannot cover another phase."""
    t0 = time.perf_counter()
    rng = RngStream(config.seed)
    budget = EvaluationBudget(config.budget_max)
    marks = checkpoint_schedule(config.budget_max) if checkpoints is None else list(checkpoints)
    tracker = _Tracker(f, marks)
    crossover = CrossoverKind(config.crossover, config.T)
    strategy = obl.fresh() if obl is not None else None
    if strategy is not None and strategy.policy.kind != "linear_decreasing":
        strategy.policy.rate = config.jumping_rate
    counts = {"init": 0, "init_obl": None, "de_generation": 0, "mu_plus_lambda": 0,
              "mu_comma_lambda": 0, "opposition": 0}

    pop = initialize(config, f, budget, rng)
    counts["init"] = config.NP
    tracker.update(pop, budget.used)

    def target_hit():
        return config.target_fev is not None and fev(tracker.best, f) <= config.target_fev

    try:
        if strategy is not None:
            res = apply_strategy(strategy, pop, f.bounds, f, budget, rng,
                                 dt=config.diversity_threshold, initial=True)
            pop = res.population
            counts["init_obl"] = res.phase
            tracker.update(pop, budget.used)
        while not target_hit():
            jump = False
            if strategy is not None:
                rate = strategy.policy.rate_at(budget.used / budget.max)
                jump = rng.uniform() <= rate and rate > 0.0
            if jump:
                res = apply_strategy(strategy, pop, f.bounds, f, budget, rng,
                                     dt=config.diversity_threshold)
                strategy.policy.record(res.success_rate)
                pop = res.population
                counts[res.phase] += 1
            else:
                pop = de_generation(pop, config, f, budget, rng, crossover)
                counts["de_generation"] += 1
            tracker.update(pop, budget.used)
    except BudgetExhausted:
        pass

    final = tracker.finish()
    return RunRecord(
        seed=config.seed,
        function=f.name,
        dimension=f.dimension,
        algorithm=algorithm or ("de" if obl is None else obl.variant),
        checkpoints=marks,
        checkpoint_fevs=tracker.values,
        final_fev=final,
        nfes=budget.used,
        wall_time=time.perf_counter() - t0,
        phase_counts=counts,
        best_x=tracker.best_x,
    )


def expected_nfes(NP, counts):
    """Closed-form NFE total from a run's phase counts."""
    total = NP
    if counts.get("init_obl"):
        total += phase_cost(counts["init_obl"], NP)
    for phase in ("de_generation", "mu_plus_lambda", "mu_comma_lambda", "opposition"):
        total += counts.get(phase, 0) * phase_cost(phase, NP)
    return total
