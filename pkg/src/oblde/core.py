"""Domain types, bounds handling and the seeded random stream."""

from dataclasses import dataclass, field

import numpy as np

RNG_VERSION = f"philox4x64-10/numpy-{np.__version__}/v1"


class ParameterError(ValueError):
    """A distribution or configuration parameter is outside its domain."""


class ContractError(ValueError):
    """An operation was called with inputs violating its precondition."""


class BudgetExhausted(Exception):
    """Raised when an evaluation (or a whole batched phase) would exceed NFEs_max."""


@dataclass(frozen=True)
class Bounds:
    """Per-dimension box constraints ``min[j] < max[j]``."""

    min: np.ndarray
    max: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.min, dtype=np.float64)).copy()
        hi = np.atleast_1d(np.asarray(self.max, dtype=np.float64)).copy()
        if lo.ndim != 1 or lo.shape != hi.shape or lo.size < 1:
            raise ContractError("bounds must be two equal-length 1-d vectors with D >= 1")
        if not np.all(lo < hi):
            raise ContractError("bounds require min[j] < max[j] in every dimension")
        lo.flags.writeable = False
        hi.flags.writeable = False
        object.__setattr__(self, "min", lo)
        object.__setattr__(self, "max", hi)

    @classmethod
    def uniform(cls, low, high, dimension):
        return cls(np.full(dimension, float(low)), np.full(dimension, float(high)))

    @property
    def dimension(self):
        return self.min.size

    @property
    def span(self):
        return self.max - self.min

    @property
    def center(self):
        return 0.5 * (self.min + self.max)

    def contains(self, x):
        x = np.asarray(x)
        return bool(np.all((x >= self.min) & (x <= self.max)))

    def __eq__(self, other):
        if not isinstance(other, Bounds):
            return NotImplemented
        return np.array_equal(self.min, other.min) and np.array_equal(self.max, other.max)

    def __hash__(self):
        return hash((self.min.tobytes(), self.max.tobytes()))


@dataclass
class Individual:
    genome: np.ndarray
    fitness: float | None = None

    @property
    def evaluated(self):
        return self.fitness is not None


@dataclass
class Population:
    """NP genomes stored row-wise with their cached fitness values.

    ``fitness`` holds NaN for members not evaluated yet.
    """

    X: np.ndarray
    fitness: np.ndarray
    generation: int = 0

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=np.float64)
        self.fitness = np.asarray(self.fitness, dtype=np.float64)
        if self.X.ndim != 2 or self.fitness.shape != (self.X.shape[0],):
            raise ContractError("population needs an (NP, D) genome array and NP fitness values")

    @property
    def size(self):
        return self.X.shape[0]

    @property
    def dimension(self):
        return self.X.shape[1]

    @property
    def members(self):
        return [
            Individual(self.X[i].copy(), None if np.isnan(f) else float(f))
            for i, f in enumerate(self.fitness)
        ]

    @property
    def best_index(self):
        """Index of the lowest fitness; unevaluated (NaN) members are skipped."""
        return int(np.nanargmin(self.fitness))

    @property
    def best_fitness(self):
        return float(self.fitness[self.best_index])

    def copy(self):
        return Population(self.X.copy(), self.fitness.copy(), self.generation)


@dataclass
class EvaluationBudget:
    """Monotone NFE counter with a hard maximum.

    A batched request that does not fit is refused as a whole, so ``used``
    never exceeds ``max``.
    """

    max: int
    used: int = 0

    def __post_init__(self):
        if self.max < 1:
            raise ParameterError("NFEs_max must be positive")

    @property
    def remaining(self):
        return self.max - self.used

    def can_afford(self, n):
        return self.used + n <= self.max

    def charge(self, n=1):
        if n < 0:
            raise ContractError("cannot refund evaluations")
        if not self.can_afford(n):
            raise BudgetExhausted(f"{n} evaluations requested, {self.remaining} left")
        self.used += n


@dataclass
class RngStream:
    """Seeded Philox stream; equal seeds give identical draw sequences."""

    seed: int
    _gen: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        self.seed = int(self.seed)
        self._gen = np.random.Generator(np.random.Philox(self.seed & 0xFFFFFFFFFFFFFFFF))

    def uniform(self, size=None):
        """Draws in ``[0, 1)``."""
        return self._gen.random(size)

    def integers(self, low, high, size=None):
        """Integers in the *inclusive* range ``[low, high]`` (``high`` may be an array)."""
        return self._gen.integers(low, np.asarray(high) + 1, size=size)

    def gaussian(self, mean=0.0, variance=1.0, size=None):
        if not variance > 0:
            raise ParameterError(f"variance must be positive, got {variance}")
        return mean + np.sqrt(variance) * self._gen.standard_normal(size)

    def beta(self, alpha, beta, size=None):
        """Beta draws strictly inside ``(0, 1)`` via the ratio of two unit-scale gammas.

        Draws that round to 0 or 1 (possible for tiny shapes) are redrawn.
        """
        alpha = np.asarray(alpha, dtype=np.float64)
        beta = np.asarray(beta, dtype=np.float64)
        if np.any(~(alpha > 0)) or np.any(~(beta > 0)):
            raise ParameterError("beta shape parameters must be positive")
        shape = np.broadcast_shapes(alpha.shape, beta.shape) if size is None else size
        alpha = np.broadcast_to(alpha, shape)
        beta = np.broadcast_to(beta, shape)
        out = self._ratio_of_gammas(alpha, beta)
        for _ in range(64):
            bad = ~((out > 0.0) & (out < 1.0))
            if not bad.any():
                break
            out = np.where(bad, self._ratio_of_gammas(alpha, beta), out)
        else:
            out = np.clip(out, np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0))
        return out if out.ndim else float(out)

    def _ratio_of_gammas(self, alpha, beta):
        g1 = self._gen.standard_gamma(alpha)
        g2 = self._gen.standard_gamma(beta)
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.asarray(g1 / (g1 + g2))


def random_point(bounds, rng):
    """Uniform point in the box, one fresh draw per coordinate."""
    u = np.asarray(rng.uniform(bounds.dimension), dtype=np.float64)
    return bounds.min + u * bounds.span


def random_population_matrix(bounds, n, rng):
    u = np.asarray(rng.uniform((n, bounds.dimension)), dtype=np.float64)
    return bounds.min + u * bounds.span


def clamp_to_bounds(x, bounds):
    """Project every coordinate onto ``[min[j], max[j]]``; works on rows of a matrix too."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != bounds.dimension:
        raise ContractError(f"vector of length {x.shape[-1]} does not match D={bounds.dimension}")
    return np.clip(x, bounds.min, bounds.max)


def sample_gaussian(rng, mean, variance):
    return float(rng.gaussian(mean, variance))


def sample_beta(rng, alpha, beta):
    if not (alpha > 0 and beta > 0):
        raise ParameterError(f"Beta({alpha}, {beta}) needs positive shapes")
    return float(rng.beta(alpha, beta))
