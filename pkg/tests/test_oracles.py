import math

import numpy as np
import pytest

from src.models.fourier import Grid
from src.models.sheet import Direction
from src.numerics.oracles import (
    DERIVATIVE_VALUES,
    IDENTITY_NAMES,
    ORACLES,
    V,
    assemble_fred_derivatives,
    derivative_value,
    directional_third_derivative,
    fred_coefficients,
    identity_names_with_m,
    integral_identity,
    local_branch_predict,
    local_branch_predict_r1,
    reduced_quadratic,
    richardson_diagonal,
)

THETAS = [(k + 0.37) * math.pi / 16 for k in range(0, 16, 3)]


def test_ten_derivative_values_without_value3():
    assert len(DERIVATIVE_VALUES) == 10
    assert "value3" not in DERIVATIVE_VALUES


@pytest.mark.parametrize("name", DERIVATIVE_VALUES)
def test_derivative_values_through_discrete_residual(grid, name):
    value = derivative_value(name, grid)
    assert value.error <= ORACLES[name].tolerance, (name, value.computed, value.expected)


def test_derivative_value_rejects_unknown_name(grid):
    with pytest.raises(ValueError, match="value3"):
        derivative_value("value3", grid)


def test_third_derivative_step_too_small(grid):
    with pytest.raises(ValueError, match="underflows"):
        directional_third_derivative(2.0, V, grid, h=1e-5)


def test_reduced_functional_derivatives(grid):
    computed = assemble_fred_derivatives(grid)
    for key, expected in fred_coefficients().items():
        assert computed[key] == pytest.approx(expected, abs=1e-4 * max(1.0, abs(expected))), key


def test_reduced_quadratic_form():
    assert reduced_quadratic(2.5, 0.1) == pytest.approx(0.25 - 0.04)
    for t in (-0.2, 0.05, 0.3):
        assert reduced_quadratic(2.0 + 2.0 * t, t) == pytest.approx(0.0, abs=1e-15)
        assert reduced_quadratic(2.0 - 2.0 * t, t) == pytest.approx(0.0, abs=1e-15)


def test_local_branch_predict():
    upper = local_branch_predict(2.2, 1, n_modes=4)
    assert upper.r1 == pytest.approx(0.1)
    assert upper.n_modes == 4
    assert np.all(upper.g.coeffs == 0.0)
    assert local_branch_predict(1.8, -1).r1 == pytest.approx(-0.1)


def test_local_branch_predict_limits():
    with pytest.raises(ValueError, match="trust region"):
        local_branch_predict(2.5, 1)
    with pytest.raises(ValueError):
        local_branch_predict(2.1, 0)


def test_local_branch_predict_r1():
    assert local_branch_predict_r1(0.1, 1).b == pytest.approx(2.2)
    lower = local_branch_predict_r1(0.1, -1)
    assert lower.b == pytest.approx(1.8)
    assert lower.r1 == pytest.approx(0.1)
    with pytest.raises(ValueError):
        local_branch_predict_r1(0.2, 1)


def test_identity_catalogue():
    names = dict(identity_names_with_m())
    assert list(names) == IDENTITY_NAMES
    assert list(names["lemma1"]) == list(range(1, 9))
    assert list(names["lemma4"]) == [2]


@pytest.mark.parametrize("name,ms", identity_names_with_m())
def test_integral_identities(name, ms):
    grid = Grid(1024)
    for m in ms:
        for theta in THETAS:
            quadrature, closed = integral_identity(name, theta, grid, m)
            assert quadrature == pytest.approx(closed, abs=1e-10), (name, m, theta)


def test_integral_identities_on_coarse_grid(grid):
    for name, ms in identity_names_with_m():
        quadrature, closed = integral_identity(name, 0.9, grid, max(ms))
        assert quadrature == pytest.approx(closed, abs=1e-8), name


def test_integral_identity_rejects_unknown_name(grid):
    with pytest.raises(ValueError):
        integral_identity("lemma9", 0.3, grid)


def test_richardson_diagonal_removes_odd_part():
    theta = 0.6
    limit = richardson_diagonal(lambda eta: np.cos(eta) + 1.0 / (eta - theta), theta)
    assert limit == pytest.approx(math.cos(theta), abs=1e-7)


def test_along_b_direction_shifts_b_only():
    state = Direction.along_b().scaled(0.25).applied_to(2.0)
    assert state.b == pytest.approx(2.25)
    assert state.n_modes == 0
