import math

import numpy as np
import pytest

from src.models.fourier import FourierSeries, Grid, COSINE
from src.models.sheet import SheetState
from src.numerics.errors import GeometryError
from src.numerics.functional import (
    assemble_residual,
    f1_at,
    f1_diagonal_limit,
    f1_integrand,
    f2_at,
    f2_diagonal_limit,
    f2_kernel,
    geometry_guard,
    residual_coefficients,
)
from src.numerics.oracles import richardson_diagonal
from src.utils.system_utils import SystemManager


def _state(b, g_modes=None, r_modes=None):
    return SheetState(
        b,
        FourierSeries.from_modes(COSINE, g_modes or {}),
        FourierSeries.from_modes(COSINE, r_modes or {}),
    )


PERTURBED = _state(2.3, {1: 0.04, 2: -0.01}, {1: 0.03, 3: 0.005})


@pytest.mark.parametrize("b", [1.0, 2.0, 3.0, 5.0])
def test_trivial_state_has_zero_residual(b):
    field = assemble_residual(SheetState.trivial(b, 4), Grid(1024))
    assert field.sup_norm <= 1e-12


def test_residual_is_not_zero_off_the_trivial_branch(grid):
    assert assemble_residual(PERTURBED, grid).sup_norm > 1e-4


def test_f2_is_mean_free(grid):
    field = assemble_residual(PERTURBED, grid)
    assert abs(np.mean(field.f2)) <= 1e-15


def test_pointwise_rows_match_full_assembly(grid):
    field = assemble_residual(PERTURBED, grid)
    tilde = np.array([f2_at(PERTURBED, j, grid) for j in range(grid.size)])
    for node in (0, 17, grid.size - 1):
        assert f1_at(PERTURBED, node, grid) == pytest.approx(field.f1[node], abs=1e-14)
    np.testing.assert_allclose(tilde - tilde.mean(), field.f2, atol=1e-14)


def test_assembly_does_not_depend_on_row_chunking(grid, monkeypatch):
    reference = assemble_residual(PERTURBED, grid)
    monkeypatch.setattr(SystemManager, "row_chunk", staticmethod(lambda *args, **kwargs: 8))
    chunked = assemble_residual(PERTURBED, grid)
    np.testing.assert_allclose(chunked.f1, reference.f1, rtol=0, atol=1e-15)
    np.testing.assert_allclose(chunked.f2, reference.f2, rtol=0, atol=1e-15)


def test_residual_is_spectrally_converged(grid, fine_grid):
    coarse = residual_coefficients(PERTURBED, grid, 8)
    fine = residual_coefficients(PERTURBED, fine_grid, 8)
    np.testing.assert_allclose(coarse, fine, atol=1e-12)


def test_residual_coefficients_layout(grid):
    vector = residual_coefficients(PERTURBED, grid, 6)
    assert vector.shape == (12,)
    nodes = residual_coefficients(PERTURBED, grid, 6, mode="nodes")
    assert nodes.shape == (2 * grid.size,)


def test_residual_coefficients_rejects_unknown_mode(grid):
    with pytest.raises(ValueError, match="residual mode"):
        residual_coefficients(PERTURBED, grid, 4, mode="modal")


def test_non_positive_radius_is_rejected(grid):
    state = _state(2.0, r_modes={1: -1.2})
    with pytest.raises(GeometryError) as info:
        assemble_residual(state, grid)
    assert info.value.node is not None


def test_geometry_guard_reports_closest_chord(grid):
    closest = geometry_guard(SheetState.trivial(2.0), grid)
    assert closest == pytest.approx(2.0 - 2.0 * math.cos(math.pi / grid.n_points), rel=1e-12)
    with pytest.raises(GeometryError):
        geometry_guard(_state(2.0, r_modes={1: 1.5}), grid)


@pytest.mark.parametrize("theta", [math.pi / 4, 1.1, 2.9])
def test_f1_diagonal_limit_matches_extrapolation(theta):
    oracle = richardson_diagonal(lambda eta: f1_integrand(PERTURBED, theta, eta), theta)
    assert f1_diagonal_limit(PERTURBED, theta) == pytest.approx(oracle, abs=1e-6)


@pytest.mark.parametrize("theta", [math.pi / 6, 0.8, 2.2])
def test_f2_diagonal_limit_matches_extrapolation(theta):
    oracle = richardson_diagonal(lambda eta: f2_kernel(PERTURBED, theta, eta), theta)
    assert f2_diagonal_limit(PERTURBED, theta) == pytest.approx(oracle, abs=1e-6)


@pytest.mark.parametrize("theta", [math.pi / 4, 1.1])
def test_integrands_stay_accurate_next_to_the_diagonal(theta):
    # chord and numerators are O(d^2) and O(d) here; a 1 - cos form loses them to rounding
    d = 1e-5
    eta = np.array([theta + d, theta - d])
    f1_mean = 0.5 * float(np.sum(f1_integrand(PERTURBED, theta, eta)))
    f2_mean = 0.5 * float(np.sum(f2_kernel(PERTURBED, theta, eta)))
    assert f1_mean == pytest.approx(f1_diagonal_limit(PERTURBED, theta), abs=1e-5)
    assert f2_mean == pytest.approx(f2_diagonal_limit(PERTURBED, theta), abs=1e-5)


def test_circle_diagonal_limits():
    # R = 1, R' = R'' = 0: L1 = 0 and L2 = 1/2
    circle = SheetState.trivial(1.7)
    assert f1_diagonal_limit(circle, 0.3) == pytest.approx(0.0, abs=1e-15)
    assert f2_diagonal_limit(circle, 0.3) == pytest.approx(0.5, abs=1e-15)
