"""Opposition-based learning: classic opposite operators, Beta-distributed
opposites with partial dimensional change, diversity-switched selection
phases and jumping-rate policies.
"""

import copy
from dataclasses import dataclass, field

import numpy as np

from .core import BudgetExhausted, ContractError, ParameterError, Population, clamp_to_bounds
from .crossover import CrossoverKind
from .diversity import DiversityKind
from .objective import evaluate_batch

VARIANTS = ("obl", "qobl", "qrobl", "coobl", "gobl", "betacobl", "ibetacobl")
BETA_VARIANTS = ("betacobl", "ibetacobl")

# Concave spread is kept strictly above 1 (unimodal density) and below a cap
# that keeps the gamma shapes finite when normDiv is vanishingly small.
MIN_CONCAVE_SPREAD = 1.0 + 1e-6
MAX_SPREAD = 1e12
GAUSSIAN_VARIANCE = 0.5


# ---------------------------------------------------------------------------
# classic opposite operators
# ---------------------------------------------------------------------------


def type1_opposite(x, bounds):
    """Mirror image ``min + max - x`` inside the box."""
    return bounds.min + bounds.max - np.asarray(x, dtype=np.float64)


def quasi_opposite(x, bounds, rng):
    """Uniform point between the box centre and the mirror image of ``x``."""
    x = np.asarray(x, dtype=np.float64)
    c = bounds.center
    u = np.asarray(rng.uniform(x.shape), dtype=np.float64)
    return c + u * (type1_opposite(x, bounds) - c)


def quasi_reflected(x, bounds, rng):
    """Uniform point between the box centre and ``x`` itself."""
    x = np.asarray(x, dtype=np.float64)
    c = bounds.center
    u = np.asarray(rng.uniform(x.shape), dtype=np.float64)
    return c + u * (x - c)


def current_optimum_opposite(x, x_best, bounds):
    """Reflection of ``x`` through the current best point, projected into the box."""
    x = np.asarray(x, dtype=np.float64)
    return clamp_to_bounds(2.0 * np.asarray(x_best, dtype=np.float64) - x, bounds)


def generalized_opposite(x, pop_min, pop_max, rng, bounds=None, k=None):
    """``k (a + b) - x`` over the population interval ``[a, b]`` with one ``k ~ U(0, 1)``.

    The result is projected onto ``bounds`` when given.
    """
    x = np.asarray(x, dtype=np.float64)
    if k is None:
        k = float(rng.uniform())
    out = k * (np.asarray(pop_min) + np.asarray(pop_max)) - x
    return out if bounds is None else clamp_to_bounds(out, bounds)


# ---------------------------------------------------------------------------
# Beta-distributed opposites
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BetaOppositeParams:
    mode: float
    spread: float
    peak: float
    alpha: float
    beta: float

    @property
    def stationary_point(self):
        """``(alpha - 1) / (alpha + beta - 2)``: density mode (concave) or anti-mode (convex)."""
        return (self.alpha - 1.0) / (self.alpha + self.beta - 2.0)


def beta_shape(mode, spread):
    """``(peak, alpha, beta)`` placing the density's stationary point at ``mode``.

    Vectorised; ``mode == 0.5`` takes the second branch.
    """
    mode = np.asarray(mode, dtype=np.float64)
    spread = np.asarray(spread, dtype=np.float64)
    low = mode < 0.5
    with np.errstate(divide="ignore", invalid="ignore"):
        peak_low = ((spread - 2.0) * mode + 1.0) / (spread * (1.0 - mode))
        peak_high = (2.0 - spread) / spread + (spread - 1.0) / (spread * mode)
    peak = np.where(low, peak_low, peak_high)
    alpha = np.where(low, spread * peak, spread)
    beta = np.where(low, spread, spread * peak)
    return peak, alpha, beta


def concave_spread(norm_div, gaussian):
    """``(1 / sqrt(normDiv)) ** (1 + g)`` held inside ``[1 + 1e-6, 1e12]``."""
    norm_div = np.clip(np.asarray(norm_div, dtype=np.float64), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        s = (1.0 / np.sqrt(norm_div)) ** (1.0 + np.asarray(gaussian, dtype=np.float64))
    return np.clip(s, MIN_CONCAVE_SPREAD, MAX_SPREAD)


def convex_spread(norm_div):
    norm_div = np.clip(np.asarray(norm_div, dtype=np.float64), 0.0, 1.0)
    return 0.1 * np.sqrt(norm_div) + 0.9


def _normalized(x, lo, hi):
    return (np.asarray(x, dtype=np.float64) - lo) / (hi - lo)


def _params(mode, spread):
    peak, alpha, beta = beta_shape(mode, spread)
    return BetaOppositeParams(float(mode), float(spread), float(peak), float(alpha), float(beta))


def concave_params(x_j, lo, hi, norm_div, rng=None, gaussian=None):
    """Unimodal Beta parameters peaked at the mirror image of ``x_j``.

    Supply either ``rng`` (draws ``N(0, 0.5)``) or the Gaussian value itself.
    """
    if not norm_div > 0:
        raise ParameterError("concave spread undefined for normDiv = 0 (collapsed population)")
    if gaussian is None:
        gaussian = rng.gaussian(0.0, GAUSSIAN_VARIANCE)
    mode = 1.0 - _normalized(x_j, lo, hi)
    return _params(mode, concave_spread(norm_div, gaussian))


def convex_params(x_j, lo, hi, norm_div):
    """U-shaped Beta parameters whose least likely point is ``x_j`` itself."""
    if not 0.0 <= norm_div:
        raise ParameterError("normDiv must be non-negative")
    return _params(_normalized(x_j, lo, hi), convex_spread(norm_div))


def complete_opposites(X, bounds, norm_div, rng):
    """One Beta opposite per row of ``X``.

    Each row flips a fair coin: concave (peaked at the mirror point, spread
    from one ``N(0, 0.5)`` draw per row) or convex (anti-peaked at the row
    itself). ``normDiv`` above 1 is clipped to 1 in the spread formulas; a
    collapsed population (``normDiv == 0``) falls back to mirror images.
    """
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    n, _ = X.shape
    if not norm_div > 0:
        return type1_opposite(X, bounds)
    concave = np.asarray(rng.uniform(n), dtype=np.float64) <= 0.5
    g = np.asarray(rng.gaussian(0.0, GAUSSIAN_VARIANCE, n), dtype=np.float64)
    z = _normalized(X, bounds.min, bounds.max)
    mode = np.where(concave[:, None], 1.0 - z, z)
    spread = np.where(concave, concave_spread(norm_div, g), convex_spread(norm_div))[:, None]
    _, alpha, beta = beta_shape(mode, np.broadcast_to(spread, mode.shape))
    draws = rng.beta(alpha, beta)
    return bounds.span * draws + bounds.min


def beta_opposite(x, bounds, norm_div, rng):
    """Single-vector form of :func:`complete_opposites`."""
    return complete_opposites(np.asarray(x, dtype=np.float64)[None, :], bounds, norm_div, rng)[0]


def partial_opposite(x, complete_opposite, CR, crossover, rng):
    """Recombine an original with its complete opposite (the opposite plays the mutant)."""
    from .crossover import recombine

    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    out = recombine(np.atleast_2d(x), np.atleast_2d(complete_opposite), CR, crossover, rng)
    return out[0] if single else out


# ---------------------------------------------------------------------------
# jumping-rate policies
# ---------------------------------------------------------------------------

POLICY_KINDS = ("constant", "linear_decreasing", "protective")


@dataclass
class JumpingPolicy:
    """Probability of replacing a DE generation by an opposition jump.

    ``linear_decreasing`` interpolates ``rate_max -> rate_min`` over the NFE
    fraction. ``protective`` behaves like ``constant`` until ``window``
    consecutive jumps each had a strictly lower success rate than the one
    before, then disables jumping for the rest of the run.
    """

    kind: str = "constant"
    rate: float = 0.05
    rate_max: float = 0.3
    rate_min: float = 0.0
    window: int = 3
    enabled: bool = field(default=True, repr=False)
    _last_success: float | None = field(default=None, repr=False)
    _streak: int = field(default=0, repr=False)

    def __post_init__(self):
        if self.kind not in POLICY_KINDS:
            raise ParameterError(f"unknown jumping policy {self.kind!r}")
        for r in (self.rate, self.rate_max, self.rate_min):
            if not 0.0 <= r <= 1.0:
                raise ParameterError("jumping rates must lie in [0, 1]")
        if self.window < 1:
            raise ParameterError("protective window must be >= 1")

    def reset(self):
        self.enabled = True
        self._last_success = None
        self._streak = 0

    def rate_at(self, fraction):
        if not self.enabled:
            return 0.0
        if self.kind == "linear_decreasing":
            fraction = min(max(fraction, 0.0), 1.0)
            return self.rate_max - (self.rate_max - self.rate_min) * fraction
        return self.rate

    def record(self, success_rate):
        if self.kind != "protective" or not self.enabled:
            return
        if self._last_success is not None and success_rate < self._last_success:
            self._streak += 1
        else:
            self._streak = 0
        self._last_success = success_rate
        if self._streak >= self.window:
            self.enabled = False


# ---------------------------------------------------------------------------
# strategy and selection phases
# ---------------------------------------------------------------------------


@dataclass
class OblStrategy:
    """An opposition scheme pluggable into the DE loop.

    ``crossover`` and ``diversity`` default per variant: ``betacobl`` uses
    binomial partial change with the nearest-neighbour normDiv, ``ibetacobl``
    multiple exponential crossover with the normalised variance measure.
    """

    variant: str = "ibetacobl"
    policy: JumpingPolicy = field(default_factory=JumpingPolicy)
    crossover: CrossoverKind | None = None
    diversity: DiversityKind | None = None
    partial_rates: tuple = (0.1, 0.9)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ParameterError(f"unknown OBL variant {self.variant!r}; expected one of {VARIANTS}")
        if self.crossover is None:
            kind = "multiple_exponential" if self.variant == "ibetacobl" else "binomial"
            self.crossover = CrossoverKind(kind)
        if self.diversity is None:
            self.diversity = DiversityKind("linear" if self.variant == "ibetacobl" else "min_distance")

    @property
    def is_beta(self):
        return self.variant in BETA_VARIANTS

    def fresh(self):
        """Copy with reset policy state, for one run."""
        other = copy.deepcopy(self)
        other.policy.reset()
        return other


@dataclass
class PhaseResult:
    population: Population
    phase: str
    nfes: int
    accepted: int
    generated: int
    norm_div: float | None = None

    @property
    def success_rate(self):
        return self.accepted / self.generated if self.generated else 0.0


def _truncate(X, fit, n_keep, n_orig):
    """Keep the ``n_keep`` fittest rows; ties favour earlier rows, survivors keep their order."""
    idx = np.argsort(fit, kind="stable")[:n_keep]
    idx.sort()
    return X[idx], fit[idx], int(np.count_nonzero(idx >= n_orig))


def _partials(X, T, strategy, rng):
    from .crossover import recombine

    lo_cr, hi_cr = strategy.partial_rates
    p1 = recombine(X, T, lo_cr, strategy.crossover, rng)
    p2 = recombine(X, T, hi_cr, strategy.crossover, rng)
    return p1, p2


def mu_plus_lambda_phase(pop, bounds, f, budget, rng, strategy, norm_div):
    """Two partial opposites per member, then NP-best truncation over the 3 NP pool."""
    n = pop.size
    if not budget.can_afford(2 * n):
        raise BudgetExhausted("(mu+lambda) phase needs 2*NP evaluations")
    T = complete_opposites(pop.X, bounds, norm_div, rng)
    p1, p2 = _partials(pop.X, T, strategy, rng)
    opposites = np.vstack([p1, p2])
    f_opp = evaluate_batch(f, opposites, budget)
    X, fit, accepted = _truncate(
        np.vstack([pop.X, opposites]), np.concatenate([pop.fitness, f_opp]), n, n
    )
    new = Population(X, fit, pop.generation)
    return PhaseResult(new, "mu_plus_lambda", 2 * n, accepted, 2 * n, norm_div)


def mu_comma_lambda_phase(pop, bounds, f, budget, rng, strategy, norm_div):
    """Guarded replacement of the worst ``ceil(NP/2)`` members by their better partial opposite."""
    n = pop.size
    start = n // 2
    m = n - start
    if not budget.can_afford(2 * m):
        raise BudgetExhausted("(mu,lambda) phase needs 2*ceil(NP/2) evaluations")
    order = np.argsort(pop.fitness, kind="stable")
    X = pop.X[order].copy()
    fit = pop.fitness[order].copy()
    worst = X[start:]
    T = complete_opposites(worst, bounds, norm_div, rng)
    p1, p2 = _partials(worst, T, strategy, rng)
    f_both = evaluate_batch(f, np.vstack([p1, p2]), budget)
    f1, f2 = f_both[:m], f_both[m:]
    first = f1 <= f2
    cand = np.where(first[:, None], p1, p2)
    f_cand = np.where(first, f1, f2)
    replace = f_cand <= fit[start:]
    X[start:][replace] = cand[replace]
    fit[start:][replace] = f_cand[replace]
    new = Population(X, fit, pop.generation)
    return PhaseResult(new, "mu_comma_lambda", 2 * m, int(replace.sum()), m, norm_div)


def classic_opposites(variant, X, bounds, rng, fitness=None, initial=False):
    """Full opposite population for the classic variants.

    Jumps use the per-axis population interval; the initial phase uses the box.
    """
    if initial:
        lo, hi = bounds.min, bounds.max
    else:
        lo, hi = X.min(axis=0), X.max(axis=0)
    centre = 0.5 * (lo + hi)
    if variant == "obl":
        out = lo + hi - X
    elif variant == "qobl":
        out = centre + rng.uniform(X.shape) * ((lo + hi - X) - centre)
    elif variant == "qrobl":
        out = centre + rng.uniform(X.shape) * (X - centre)
    elif variant == "coobl":
        if fitness is None:
            raise ContractError("current-optimum opposition needs fitness values")
        out = 2.0 * X[int(np.argmin(fitness))] - X
    elif variant == "gobl":
        out = generalized_opposite(X, lo, hi, rng)
    else:
        raise ParameterError(f"{variant!r} is not a classic variant")
    return clamp_to_bounds(out, bounds)


def classic_phase(strategy, pop, bounds, f, budget, rng, initial=False):
    n = pop.size
    if not budget.can_afford(n):
        raise BudgetExhausted("opposition phase needs NP evaluations")
    opp = classic_opposites(strategy.variant, pop.X, bounds, rng, pop.fitness, initial)
    f_opp = evaluate_batch(f, opp, budget)
    X, fit, accepted = _truncate(np.vstack([pop.X, opp]), np.concatenate([pop.fitness, f_opp]), n, n)
    return PhaseResult(Population(X, fit, pop.generation), "opposition", n, accepted, n)


def apply_strategy(strategy, pop, bounds, f, budget, rng, dt=1e-6, initial=False):
    """Run one opposition step and return a :class:`PhaseResult`.

    Beta variants pick (mu+lambda) when normDiv exceeds ``dt`` and
    (mu,lambda) otherwise. Raises :class:`BudgetExhausted` without spending
    anything when the chosen phase does not fit in the remaining budget.
    """
    if not strategy.is_beta:
        return classic_phase(strategy, pop, bounds, f, budget, rng, initial)
    norm_div = strategy.diversity.normdiv(pop, bounds)
    if norm_div > dt:
        return mu_plus_lambda_phase(pop, bounds, f, budget, rng, strategy, norm_div)
    return mu_comma_lambda_phase(pop, bounds, f, budget, rng, strategy, norm_div)


def phase_cost(phase, n):
    """NFEs consumed by one phase at population size ``n``."""
    return {
        "de_generation": n,
        "opposition": n,
        "mu_plus_lambda": 2 * n,
        "mu_comma_lambda": 2 * (n - n // 2),
    }[phase]


# name -> (variant, policy kind, diversity override)
PRESETS = {
    "obl": ("obl", "constant", None),
    "qobl": ("qobl", "constant", None),
    "qrobl": ("qrobl", "constant", None),
    "coobl": ("coobl", "constant", None),
    "gobl": ("gobl", "constant", None),
    "obltvjr": ("obl", "linear_decreasing", None),
    "oblpgj": ("obl", "protective", None),
    "betacobl": ("betacobl", "constant", None),
    "betacobl-linear1": ("betacobl", "constant", "center"),
    "betacobl-linear2": ("betacobl", "constant", "linear"),
    "ibetacobl": ("ibetacobl", "constant", None),
}


def make_strategy(name, jumping_rate=0.05, rate_max=0.3, rate_min=0.0, window=3,
                  T=10.0, crossover=None, diversity=None):
    """Build a named preset; ``crossover``/``diversity`` names override the variant defaults."""
    if name not in PRESETS:
        raise KeyError(f"unknown algorithm {name!r}; expected 'de' or one of {sorted(PRESETS)}")
    variant, policy_kind, div = PRESETS[name]
    policy = JumpingPolicy(policy_kind, jumping_rate, rate_max, rate_min, window)
    if crossover is None and variant == "ibetacobl":
        crossover = "multiple_exponential"
    cx = CrossoverKind(crossover or "binomial", T)
    dv = DiversityKind(diversity or div) if (diversity or div) else None
    return OblStrategy(variant, policy, cx, dv)
