"""Population diversity measures.

``min_distance_normdiv`` and ``pairwise_mean_naive`` cost O(NP^2 D); the
variance-based ``linear_diversity`` and ``center_diversity`` cost O(NP D).
All functions accept a :class:`~oblde.core.Population` or a raw ``(NP, D)``
array.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import ContractError, ParameterError, Population

KINDS = ("min_distance", "power_mean", "pairwise_naive", "linear", "center")


class InsufficientPopulation(ContractError):
    pass


def _matrix(pop):
    X = pop.X if isinstance(pop, Population) else np.asarray(pop, dtype=np.float64)
    if X.ndim != 2:
        raise ContractError("population matrix must be 2-d")
    return X


def _need(X, n):
    if X.shape[0] < n:
        raise InsufficientPopulation(f"diversity needs NP >= {n}, got {X.shape[0]}")


def min_distance_normdiv(pop, bounds):
    """Mean nearest-neighbour distance, each axis scaled by its range, RMS over axes.

    Lies in ``[0, 1]``.
    """
    X = _matrix(pop)
    _need(X, 2)
    nearest = kernels.min_pair_distance(X, bounds.span) / np.sqrt(X.shape[1])
    return float(nearest.mean())


def _distance_matrix(X):
    diff = X[:, None, :] - X[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def power_mean_diversity(pop, a, b):
    """``(mean_i d_i^a)^(1/b)`` with ``d_i^a`` the mean of ``||x_i - x_j||^a`` over ``NP-1`` partners.

    ``a = -inf`` takes each member's nearest-neighbour distance instead. For
    ``a > 0`` the self-distance enters the sum as zero; for ``a <= 0`` it is
    skipped.
    """
    X = _matrix(pop)
    _need(X, 2)
    if b == 0:
        raise ParameterError("power-mean exponent b must be non-zero")
    n = X.shape[0]
    if a == -np.inf:
        d_i = kernels.min_pair_distance(X, np.ones(X.shape[1]))
    elif a == 0:
        raise ParameterError("power-mean exponent a must be non-zero (or -inf)")
    else:
        dist = _distance_matrix(X)
        if a > 0:
            d_i = np.sum(dist**a, axis=1) / (n - 1)
        else:
            off = ~np.eye(n, dtype=bool)
            with np.errstate(divide="ignore"):
                powered = np.where(off, dist, 1.0) ** a
            d_i = np.sum(np.where(off, powered, 0.0), axis=1) / (n - 1)
    return float(np.mean(d_i) ** (1.0 / b))


def pairwise_mean_naive(pop):
    """Half the double sum of pairwise distances, evaluated pair by pair."""
    X = _matrix(pop)
    _need(X, 2)
    return kernels.pairwise_distance_sum(X)


def linear_diversity(pop, bounds=None, normalized=False):
    """``(1/D) sqrt(sum_k var_k)`` from per-axis first and second moments.

    With ``normalized`` each axis variance is divided by that axis' range
    (the range itself, not its square).
    """
    X = _matrix(pop)
    _need(X, 1)
    # mean(x^2) - mean(x)^2 evaluated in the centred two-pass form, which is
    # the same quantity without the cancellation under large translations
    var = np.var(X, axis=0)
    if normalized:
        if bounds is None:
            raise ContractError("normalized linear diversity needs bounds")
        var = var / bounds.span
    return float(np.sqrt(np.sum(var)) / X.shape[1])


def center_diversity(pop):
    """Sum of Euclidean distances from every member to the centroid."""
    X = _matrix(pop)
    _need(X, 1)
    diff = X - X.mean(axis=0)
    return float(np.sum(np.sqrt(np.einsum("ij,ij->i", diff, diff))))


@dataclass(frozen=True)
class DiversityKind:
    """A measure usable as the selection-switch signal ``normDiv``."""

    kind: str = "linear"
    a: float = -np.inf
    b: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown diversity measure {self.kind!r}; expected one of {KINDS}")

    def normdiv(self, pop, bounds):
        X = _matrix(pop)
        if self.kind == "min_distance":
            return min_distance_normdiv(X, bounds)
        if self.kind == "linear":
            return linear_diversity(X, bounds, normalized=True)
        Z = (X - bounds.min) / bounds.span
        d = X.shape[1]
        if self.kind == "center":
            return center_diversity(Z) / (Z.shape[0] * np.sqrt(d))
        if self.kind == "pairwise_naive":
            n = Z.shape[0]
            return pairwise_mean_naive(Z) / (n * (n - 1) / 2) / np.sqrt(d)
        return power_mean_diversity(Z, self.a, self.b) / np.sqrt(d)
