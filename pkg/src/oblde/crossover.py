"""Binomial, exponential and multiple exponential recombination.

Each operator has a single-vector form (``binomial``, ``exponential``,
``multiple_exponential``) and a batched mask form used by the DE engine and
the partial-opposite scheme. A mask entry is True where the trial takes the
mutant (or complete-opposite) coordinate.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import ContractError, ParameterError

KINDS = ("binomial", "exponential", "multiple_exponential")


@dataclass(frozen=True)
class CrossoverKind:
    kind: str = "binomial"
    T: float = 10.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown crossover {self.kind!r}; expected one of {KINDS}")
        if not self.T > 0:
            raise ParameterError("exchanged-component length T must be positive")

    def masks(self, n, d, CR, rng):
        if self.kind == "binomial":
            return binomial_masks(n, d, CR, rng)
        if self.kind == "exponential":
            return exponential_masks(n, d, CR, rng)
        return multiple_exponential_masks(n, d, CR, self.T, rng)


def _check_cr(CR):
    if not 0.0 <= CR <= 1.0:
        raise ParameterError(f"CR must lie in [0, 1], got {CR}")


def _pair(target, mutant):
    target = np.asarray(target, dtype=np.float64)
    mutant = np.asarray(mutant, dtype=np.float64)
    if target.shape != mutant.shape:
        raise ContractError(f"target {target.shape} and mutant {mutant.shape} differ in length")
    return target, mutant


def binomial_masks(n, d, CR, rng):
    _check_cr(CR)
    u = np.asarray(rng.uniform((n, d)), dtype=np.float64)
    j_rand = np.asarray(rng.integers(0, d - 1, size=n), dtype=np.int64)
    mask = u <= CR
    mask[np.arange(n), j_rand] = True
    return mask


def exponential_masks(n, d, CR, rng):
    _check_cr(CR)
    start = np.asarray(rng.integers(0, d - 1, size=n), dtype=np.int64)
    u = np.asarray(rng.uniform((n, d)), dtype=np.float64)
    return kernels.exp_mask(start, u, CR)


def mexp_constants(CR, T=10.0):
    """``(E_m, E_s, CR_m, CR_s)``: expected run sizes and their continuation rates."""
    e_m = T * CR
    e_s = T * (1.0 - CR)
    return e_m, e_s, e_m / (e_m + 1.0), e_s / (e_s + 1.0)


def multiple_exponential_masks(n, d, CR, T, rng):
    _check_cr(CR)
    start = np.asarray(rng.integers(0, d - 1, size=n), dtype=np.int64)
    u = np.asarray(rng.uniform((n, d)), dtype=np.float64)
    if CR <= 0.0:
        # one mutant coordinate at the start index, target elsewhere
        mask = np.zeros((n, d), dtype=bool)
        mask[np.arange(n), start] = True
        return mask
    if CR >= 1.0:
        return np.ones((n, d), dtype=bool)
    _, _, cr_m, cr_s = mexp_constants(CR, T)
    return kernels.mexp_mask(start, u, cr_m, cr_s)


def binomial(target, mutant, CR, rng):
    target, mutant = _pair(target, mutant)
    mask = binomial_masks(1, target.size, CR, rng)[0]
    return np.where(mask, mutant, target)


def exponential(target, mutant, CR, rng):
    target, mutant = _pair(target, mutant)
    mask = exponential_masks(1, target.size, CR, rng)[0]
    return np.where(mask, mutant, target)


def multiple_exponential(target, mutant, CR, T, rng):
    target, mutant = _pair(target, mutant)
    mask = multiple_exponential_masks(1, target.size, CR, T, rng)[0]
    return np.where(mask, mutant, target)


def recombine(targets, mutants, CR, kind, rng):
    """Row-wise crossover of two ``(n, D)`` arrays with the given :class:`CrossoverKind`."""
    targets, mutants = _pair(targets, mutants)
    n, d = targets.shape
    mask = kind.masks(n, d, CR, rng)
    return np.where(mask, mutants, targets)
