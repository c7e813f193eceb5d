import numpy as np
import pytest

from oblde.core import Bounds, ContractError, EvaluationBudget, RngStream, BudgetExhausted
from oblde.objective import (
    BASE_FUNCTIONS,
    Transform,
    evaluate,
    evaluate_batch,
    fev,
    list_functions,
    make_function,
)


def test_sphere_at_origin():
    assert evaluate(make_function("sphere", 5), np.zeros(5), EvaluationBudget(1)) == 0.0


def test_rastrigin_at_origin_d30():
    assert evaluate(make_function("rastrigin", 30), np.zeros(30), EvaluationBudget(1)) == 0.0


def test_sphere_hand_value():
    assert evaluate(make_function("sphere", 3), [1.0, 2.0, 3.0], EvaluationBudget(1)) == 14.0


@pytest.mark.parametrize("name, x, expected", [
    ("rosenbrock", [1.0, 1.0, 1.0], 0.0),
    ("rosenbrock", [0.0, 0.0], 1.0),
    ("rastrigin", [1.0, 0.0], 1.0),
    ("schwefel-1.2", [1.0, 2.0], 10.0),
    ("griewank", [0.0, 0.0], 0.0),
])
def test_base_hand_values(name, x, expected):
    f = make_function(name, len(x))
    assert f(x) == pytest.approx(expected, abs=1e-12)


def test_ackley_optimum():
    assert make_function("ackley", 10)(np.zeros(10)) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("base", list(BASE_FUNCTIONS))
def test_optimum_location_attains_optimum(base):
    for prefix in ("", "shifted-", "shifted-rotated-"):
        f = make_function(prefix + base, 8, seed=3, bias=100.0)
        assert fev(f(f.optimum_location), f) == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("base", list(BASE_FUNCTIONS))
def test_shift_consistency(base):
    f = make_function("shifted-" + base, 6, seed=1)
    g = make_function(base, 6)
    X = RngStream(2).uniform((50, 6)) * 40 - 20
    np.testing.assert_allclose(f(X + f.transform.shift), g(X), rtol=1e-10, atol=1e-10)


def test_rotation_invariance_of_sphere():
    f = make_function("shifted-rotated-sphere", 12, seed=4)
    g = make_function("shifted-sphere", 12, seed=4)
    X = RngStream(0).uniform((100, 12)) * 200 - 100
    np.testing.assert_allclose(f(X), g(X), rtol=1e-9)


def test_rotation_is_orthogonal_and_seeded():
    a = Transform.seeded(20, 5, True)
    b = Transform.seeded(20, 5, True)
    np.testing.assert_array_equal(a.rotation, b.rotation)
    np.testing.assert_allclose(a.rotation.T @ a.rotation, np.eye(20), atol=1e-12)


def test_non_orthogonal_rotation_rejected():
    with pytest.raises(ContractError):
        Transform(np.zeros(2), np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_fev_definition():
    f = make_function("sphere", 3, bias=-7.0)
    assert fev(f(np.zeros(3)), f) == 0.0
    assert fev(f(np.zeros(3)) + 5.0, f) == 5.0
    with pytest.raises(ContractError):
        fev(-8.0, f)


def test_fev_shifted_sphere_at_shift():
    f = make_function("shifted-sphere", 4, seed=9)
    assert fev(f(f.transform.shift), f) == 0.0


def test_budget_accounting():
    f = make_function("sphere", 2)
    budget = EvaluationBudget(100)
    for _ in range(37):
        evaluate(f, [1.0, 1.0], budget)
    assert budget.used == 37
    evaluate_batch(f, np.ones((10, 2)), budget)
    assert budget.used == 47


def test_batch_refused_when_over_budget():
    f = make_function("sphere", 2)
    budget = EvaluationBudget(5, used=3)
    with pytest.raises(BudgetExhausted):
        evaluate_batch(f, np.ones((3, 2)), budget)
    assert budget.used == 3


def test_registry_and_errors():
    names = list_functions()
    assert len(names) == 18 and "shifted-rotated-rastrigin" in names
    with pytest.raises(KeyError):
        make_function("nope", 3)
    with pytest.raises(ContractError):
        make_function("sphere", 3)(np.zeros(4))


def test_default_box():
    f = make_function("ackley", 3)
    assert f.bounds == Bounds.uniform(-100, 100, 3)


def test_vector_and_matrix_calls_agree():
    f = make_function("shifted-rotated-griewank", 5, seed=2)
    X = RngStream(1).uniform((7, 5))
    np.testing.assert_allclose(f(X), [f(x) for x in X], rtol=1e-13)
