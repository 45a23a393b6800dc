import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from meterbench.explain import Attribution, efficiency_gap, exact_shapley


def test_linear_model_closed_form():
    w = np.array([2.0, -3.0, 0.5, 1.25])
    model = lambda X: X @ w + 7.0
    x = np.array([1.0, 2.0, -1.0, 4.0])
    b = np.array([0.5, 0.5, 0.5, 0.5])
    attrs = exact_shapley(model, x, b)
    expected = w * (x - b)
    np.testing.assert_allclose([a.shapley_value for a in attrs], expected, atol=1e-9)


def test_dummy_feature_exactly_zero():
    model = lambda X: X[:, 0] ** 2 + 3.0 * X[:, 2]
    attrs = exact_shapley(model, np.array([2.0, 5.0, 1.0]), np.array([1.0, -3.0, 0.0]))
    assert attrs[1].shapley_value == 0.0


def test_symmetry():
    model = lambda X: X[:, 0] * X[:, 1]
    attrs = exact_shapley(model, np.array([3.0, 3.0]), np.array([1.0, 1.0]))
    assert attrs[0].shapley_value == pytest.approx(attrs[1].shapley_value, abs=1e-12)


@given(st.integers(0, 2**32 - 1), st.integers(1, 8))
@settings(max_examples=40, deadline=None)
def test_efficiency_on_random_models(seed, n):
    rng = np.random.default_rng(seed)
    W1 = rng.normal(size=(n, 6))
    w2 = rng.normal(size=6)

    def model(X):
        return np.tanh(X @ W1) @ w2

    x = rng.normal(size=n)
    b = rng.normal(size=n)
    attrs = exact_shapley(model, x, b)
    assert abs(efficiency_gap(attrs, model, x, b)) <= 1e-9


def test_feature_names_and_actionable_flags():
    model = lambda X: X.sum(axis=1)
    attrs = exact_shapley(model, np.ones(3), np.zeros(3),
                          feature_names=["a", "b", "c"], actionable=("b",))
    assert [a.feature for a in attrs] == ["a", "b", "c"]
    assert [a.actionable for a in attrs] == [False, True, False]


def test_row_by_row_model_fallback():
    model = lambda X: [float(row[0] * 2) for row in X]  # returns a list
    attrs = exact_shapley(model, np.array([3.0]), np.array([1.0]))
    assert attrs[0].shapley_value == pytest.approx(4.0)


def test_input_validation():
    model = lambda X: X.sum(axis=1)
    with pytest.raises(ValueError):
        exact_shapley(model, np.ones(2), np.zeros(3))
    with pytest.raises(ValueError):
        exact_shapley(model, np.ones(16), np.zeros(16))
    with pytest.raises(ValueError):
        exact_shapley(model, np.ones(2), np.zeros(2), feature_names=["only-one"])
