import numpy as np
import pytest

from oblde.core import Bounds, ParameterError, Population, RngStream
from oblde.diversity import (
    DiversityKind,
    InsufficientPopulation,
    center_diversity,
    linear_diversity,
    min_distance_normdiv,
    pairwise_mean_naive,
    power_mean_diversity,
)


def col(*values):
    return np.array(values, dtype=np.float64)[:, None]


class TestMinDistance:
    def test_identical(self, backend):
        assert min_distance_normdiv(np.ones((5, 3)), Bounds.uniform(0, 2, 3)) == 0.0

    def test_two_points_full_range(self, backend):
        assert min_distance_normdiv(col(0, 1), Bounds([0.0], [1.0])) == 1.0

    def test_three_points(self, backend):
        assert min_distance_normdiv(col(0, 5, 10), Bounds([0.0], [10.0])) == pytest.approx(0.5)

    def test_unit_interval(self, backend):
        X = RngStream(0).uniform((60, 4))
        v = min_distance_normdiv(X, Bounds.uniform(0, 1, 4))
        assert 0.0 < v <= 1.0

    def test_population_input(self, backend):
        pop = Population(col(0, 1), [0.0, 0.0])
        assert min_distance_normdiv(pop, Bounds([0.0], [1.0])) == 1.0

    def test_single_member(self):
        with pytest.raises(InsufficientPopulation):
            min_distance_normdiv(col(0), Bounds([0.0], [1.0]))


class TestPowerMean:
    def test_identical(self):
        assert power_mean_diversity(np.zeros((4, 2)), 2.0, 1.0) == 0.0

    def test_mean_of_mean_distances(self):
        assert power_mean_diversity(col(0, 2), 1.0, 1.0) == pytest.approx(2.0)

    def test_nearest_neighbour_limit(self, backend):
        # nearest-neighbour distances are 1, 1 and 99
        assert power_mean_diversity(col(0, 1, 100), -np.inf, 1.0) == pytest.approx(101 / 3)

    def test_negative_exponent_skips_self(self):
        # d_i = mean over the two partners of 1/dist
        v = power_mean_diversity(col(0, 1, 3), -1.0, 1.0)
        expected = np.mean([(1 + 1 / 3) / 2, (1 + 1 / 2) / 2, (1 / 3 + 1 / 2) / 2])
        assert v == pytest.approx(expected)

    def test_zero_exponents_rejected(self):
        with pytest.raises(ParameterError):
            power_mean_diversity(col(0, 1), 0.0, 1.0)
        with pytest.raises(ParameterError):
            power_mean_diversity(col(0, 1), 1.0, 0.0)


class TestPairwise:
    def test_identical(self, backend):
        assert pairwise_mean_naive(np.ones((6, 2))) == 0.0

    def test_two_points(self, backend):
        assert pairwise_mean_naive(col(0, 1)) == 1.0

    def test_homogeneous(self, backend):
        X = RngStream(1).uniform((20, 3))
        assert pairwise_mean_naive(3.5 * X) == pytest.approx(3.5 * pairwise_mean_naive(X), rel=1e-12)

    def test_brute_force(self, backend):
        X = RngStream(2).uniform((25, 4))
        total = sum(np.linalg.norm(X[i] - X[j]) for i in range(25) for j in range(i + 1, 25))
        assert pairwise_mean_naive(X) == pytest.approx(total, rel=1e-12)


class TestLinear:
    def test_identical(self):
        assert linear_diversity(np.full((7, 3), 4.2)) == 0.0

    def test_unnormalized(self):
        assert linear_diversity(col(0, 1)) == pytest.approx(0.5)

    def test_normalized(self):
        v = linear_diversity(col(0, 2), Bounds([0.0], [2.0]), normalized=True)
        assert v == pytest.approx(np.sqrt(0.5))

    def test_matches_moment_form(self):
        X = RngStream(3).uniform((50, 6))
        naive = np.sqrt(np.sum(np.mean(X**2, axis=0) - np.mean(X, axis=0) ** 2)) / 6
        assert linear_diversity(X) == pytest.approx(naive, rel=1e-10)

    def test_large_offset_stable(self):
        X = RngStream(4).uniform((30, 3)) + 1e9
        assert linear_diversity(X) == pytest.approx(linear_diversity(X - 1e9), rel=1e-6)


class TestCenter:
    def test_identical(self):
        assert center_diversity(np.ones((3, 3))) == 0.0

    def test_two_points(self):
        assert center_diversity(col(0, 2)) == pytest.approx(2.0)

    def test_single_member(self):
        assert center_diversity(col(5)) == 0.0


def test_translation_invariance(backend):
    X = RngStream(5).uniform((40, 5)) * 10
    shift = np.array([3.0, -7.0, 100.0, 0.5, -20.0])
    b = Bounds.uniform(-1000, 1000, 5)
    pairs = [
        (min_distance_normdiv(X, b), min_distance_normdiv(X + shift, b)),
        (power_mean_diversity(X, 2.0, 2.0), power_mean_diversity(X + shift, 2.0, 2.0)),
        (pairwise_mean_naive(X), pairwise_mean_naive(X + shift)),
        (linear_diversity(X), linear_diversity(X + shift)),
        (center_diversity(X), center_diversity(X + shift)),
    ]
    for a, c in pairs:
        assert c == pytest.approx(a, rel=1e-10)


def test_collocation_penalty(backend):
    b = Bounds.uniform(0, 1, 5)
    for seed in range(10):
        rng = RngStream(seed)
        X = 0.3 + 0.4 * rng.uniform((30, 5))
        doubled = np.vstack([X, X])
        fresh = np.vstack([X, rng.uniform((30, 5))])
        assert min_distance_normdiv(doubled, b) == 0.0 < min_distance_normdiv(fresh, b)
        assert (linear_diversity(doubled, b, normalized=True)
                < linear_diversity(fresh, b, normalized=True))


@pytest.mark.parametrize("kind", ["min_distance", "power_mean", "pairwise_naive", "linear", "center"])
def test_normdiv_kinds(kind, backend):
    b = Bounds.uniform(-5, 5, 4)
    X = RngStream(6).uniform((30, 4)) * 10 - 5
    m = DiversityKind(kind)
    v = m.normdiv(X, b)
    assert 0.0 < v <= 1.0
    assert m.normdiv(np.zeros((30, 4)), b) == 0.0


def test_unknown_kind():
    with pytest.raises(ParameterError):
        DiversityKind("entropy")
