"""Benchmark objectives with known optima, shift/rotation wrappers and FEV.

All base functions are vectorised over rows: they accept an ``(n, D)`` array
and return ``n`` values. :class:`TestFunction` also accepts a single vector.
"""

from dataclasses import dataclass, field

import numpy as np

from .core import Bounds, BudgetExhausted, ContractError

DEFAULT_RANGE = (-100.0, 100.0)


def sphere(X):
    return np.einsum("ij,ij->i", X, X)


def rosenbrock(X):
    a = X[:, :-1]
    b = X[:, 1:]
    return np.sum(100.0 * (a * a - b) ** 2 + (a - 1.0) ** 2, axis=1)


def rastrigin(X, A=10.0):
    return A * X.shape[1] + np.sum(X * X - A * np.cos(2.0 * np.pi * X), axis=1)


def ackley(X):
    d = X.shape[1]
    s1 = np.einsum("ij,ij->i", X, X) / d
    s2 = np.sum(np.cos(2.0 * np.pi * X), axis=1) / d
    return -20.0 * np.exp(-0.2 * np.sqrt(s1)) - np.exp(s2) + 20.0 + np.e


def griewank(X):
    idx = np.sqrt(np.arange(1, X.shape[1] + 1, dtype=np.float64))
    return 1.0 + np.einsum("ij,ij->i", X, X) / 4000.0 - np.prod(np.cos(X / idx), axis=1)


def schwefel_1_2(X):
    c = np.cumsum(X, axis=1)
    return np.einsum("ij,ij->i", c, c)


# name -> (callable, base optimum location as a function of D, unimodal?)
BASE_FUNCTIONS = {
    "sphere": (sphere, np.zeros, True),
    "rosenbrock": (rosenbrock, np.ones, False),
    "rastrigin": (rastrigin, np.zeros, False),
    "ackley": (ackley, np.zeros, False),
    "griewank": (griewank, np.zeros, False),
    "schwefel-1.2": (schwefel_1_2, np.zeros, True),
}


@dataclass(frozen=True)
class Transform:
    """``z = M (x - o)``; ``rotation`` is optional and must be orthogonal."""

    shift: np.ndarray
    rotation: np.ndarray | None = None

    def __post_init__(self):
        shift = np.asarray(self.shift, dtype=np.float64)
        object.__setattr__(self, "shift", shift)
        if self.rotation is not None:
            M = np.asarray(self.rotation, dtype=np.float64)
            d = shift.size
            if M.shape != (d, d):
                raise ContractError(f"rotation must be {d}x{d}")
            if not np.allclose(M.T @ M, np.eye(d), atol=1e-10, rtol=0.0):
                raise ContractError("rotation matrix is not orthogonal")
            object.__setattr__(self, "rotation", M)

    def apply(self, X):
        Z = X - self.shift
        if self.rotation is not None:
            Z = Z @ self.rotation.T
        return Z

    def invert(self, z):
        z = np.asarray(z, dtype=np.float64)
        if self.rotation is not None:
            z = self.rotation.T @ z
        return z + self.shift

    @classmethod
    def seeded(cls, dimension, seed, rotate, shift_range=80.0):
        """Shift uniform in ``[-shift_range, shift_range]^D``; rotation by QR of a Gaussian matrix."""
        gen = np.random.Generator(np.random.Philox(int(seed)))
        shift = gen.uniform(-shift_range, shift_range, dimension)
        rotation = None
        if rotate:
            q, r = np.linalg.qr(gen.standard_normal((dimension, dimension)))
            rotation = q * np.sign(np.diag(r))
        return cls(shift, rotation)


@dataclass(frozen=True)
class TestFunction:
    name: str
    dimension: int
    bounds: Bounds
    optimum_value: float
    optimum_location: np.ndarray | None
    base: object = field(repr=False)
    transform: Transform | None = field(default=None, repr=False)
    unimodal: bool = False

    __test__ = False  # keep pytest from collecting this class

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        single = x.ndim == 1
        X = x[None, :] if single else x
        if X.shape[1] != self.dimension:
            raise ContractError(f"{self.name} expects D={self.dimension}, got {X.shape[1]}")
        if self.transform is not None:
            X = self.transform.apply(X)
        values = self.base(X) + self.optimum_value
        return float(values[0]) if single else values


def make_function(name, dimension, seed=0, bounds=None, bias=0.0):
    """Build a registry function: ``<base>``, ``shifted-<base>`` or ``shifted-rotated-<base>``."""
    if dimension < 1:
        raise ContractError("dimension must be >= 1")
    base_name = name
    shifted = rotated = False
    if base_name.startswith("shifted-rotated-"):
        base_name = base_name[len("shifted-rotated-"):]
        shifted = rotated = True
    elif base_name.startswith("shifted-"):
        base_name = base_name[len("shifted-"):]
        shifted = True
    if base_name not in BASE_FUNCTIONS:
        raise KeyError(f"unknown function {name!r}; see list_functions()")
    if base_name == "rosenbrock" and dimension < 2:
        raise ContractError("rosenbrock needs D >= 2")
    fn, opt_loc, unimodal = BASE_FUNCTIONS[base_name]
    if bounds is None:
        bounds = Bounds.uniform(*DEFAULT_RANGE, dimension)
    transform = Transform.seeded(dimension, seed, rotated) if shifted else None
    loc = opt_loc(dimension).astype(np.float64)
    if transform is not None:
        loc = transform.invert(loc)
    return TestFunction(
        name=name,
        dimension=dimension,
        bounds=bounds,
        optimum_value=float(bias),
        optimum_location=loc,
        base=fn,
        transform=transform,
        unimodal=unimodal,
    )


def list_functions():
    names = []
    for base in BASE_FUNCTIONS:
        names += [base, f"shifted-{base}", f"shifted-rotated-{base}"]
    return names


def evaluate(f, x, budget):
    """One charged evaluation of ``f`` at ``x``."""
    if budget.used >= budget.max:
        raise BudgetExhausted("evaluation budget exhausted")
    value = f(np.asarray(x, dtype=np.float64))
    budget.charge(1)
    return value


def evaluate_batch(f, X, budget):
    """Evaluate every row of ``X``; the whole batch is refused if it does not fit."""
    X = np.asarray(X, dtype=np.float64)
    budget.charge(X.shape[0])
    return f(X)


def fev(best_value, f):
    """Function error value ``f(best) - f(x*)``."""
    if best_value < f.optimum_value - 1e-9:
        raise ContractError(f"best value {best_value} lies below the known optimum {f.optimum_value}")
    return float(best_value - f.optimum_value)
