import numpy as np
import pytest

from src.models.fourier import FourierSeries, COSINE, SINE
from src.models.operators import JacobianMatrix
from src.models.sheet import SheetState
from src.models.solver import UnknownLayout, FIX_B, FIX_R1
from src.numerics.errors import GeometryError
from src.numerics.functional import assemble_residual
from src.numerics.linearization import (
    apply_linearization,
    fd_jacobian,
    finite_difference_jacobian,
    kernel_report,
    mode_matrix,
)
from src.numerics.oracles import pair_vector
from src.numerics.spectral import project_series

FD_TOL = 1e-6


def test_mode_matrices_at_the_bifurcation_point():
    np.testing.assert_array_equal(mode_matrix(2.0, 1.0, 1).entries, [[-0.5, 0.0], [0.0, 0.0]])
    for n in range(2, 9):
        np.testing.assert_array_equal(
            mode_matrix(2.0, 1.0, n).entries, [[-0.5, 0.0], [0.0, 4.0 * (n - 1)]]
        )


def test_mode_matrix_rejects_mode_zero():
    with pytest.raises(ValueError):
        mode_matrix(2.0, 1.0, 0)


def test_kernel_only_at_b_two_mode_one():
    flagged = [entry.n for entry in kernel_report(2.0, 1.0, 8) if entry.flagged]
    assert flagged == [1]
    assert not any(entry.flagged for entry in kernel_report(2.5, 1.0, 8))
    assert not any(entry.flagged for entry in kernel_report(1.0, 1.0, 8))


@pytest.mark.parametrize("b", [2.0, 2.5, 3.0])
def test_fd_jacobian_matches_mode_matrices(grid, b):
    n_modes = 4
    jac = fd_jacobian(SheetState.trivial(b, n_modes), grid, UnknownLayout(FIX_B, n_modes))
    assert jac.shape == (2 * n_modes, 2 * n_modes)
    for n in range(1, n_modes + 1):
        np.testing.assert_allclose(jac.mode_block(n), mode_matrix(b, 1.0, n).entries, atol=FD_TOL)
    assert jac.off_block_max() <= FD_TOL


def test_fix_r1_jacobian_has_zero_b_column_at_trivial_state(grid):
    n_modes = 3
    jac = fd_jacobian(SheetState.trivial(2.5, n_modes), grid, UnknownLayout(FIX_R1, n_modes))
    assert jac.column_labels[0] == "gamma[0]"
    assert np.max(np.abs(jac.values[:, 0])) <= FD_TOL


def test_linear_response_matches_apply_linearization(grid):
    g = FourierSeries.from_modes(COSINE, {1: 1.0, 2: -0.5})
    r = FourierSeries.from_modes(COSINE, {1: 0.3, 3: 0.8})
    eps = 1e-6
    field = assemble_residual(SheetState(3.0, g.scaled(eps), r.scaled(eps)), grid)
    computed = pair_vector(
        (
            project_series(field.f1 / eps, grid, 4, SINE),
            project_series(field.f2 / eps, grid, 4, COSINE),
        ),
        4,
    )
    expected = pair_vector(apply_linearization(3.0, 1.0, g, r), 4)
    np.testing.assert_allclose(computed, expected, atol=100 * eps)


def test_apply_linearization_rejects_sine_input():
    with pytest.raises(ValueError):
        apply_linearization(2.0, 1.0, FourierSeries.zeros(SINE, 2), FourierSeries.zeros(COSINE, 2))


def _quadratic(x):
    return np.array([x[0] ** 2 + 3 * x[1], np.sin(x[0]) * x[2], x[1] * x[2]])


def _quadratic_jacobian(x):
    return np.array(
        [
            [2 * x[0], 3.0, 0.0],
            [np.cos(x[0]) * x[2], 0.0, np.sin(x[0])],
            [0.0, x[2], x[1]],
        ]
    )


def test_finite_difference_jacobian_matches_analytic():
    x = np.array([0.7, -1.3, 2.1])
    np.testing.assert_allclose(
        finite_difference_jacobian(_quadratic, x), _quadratic_jacobian(x), atol=1e-8, rtol=0
    )


def test_finite_difference_jacobian_independent_of_workers():
    x = np.array([0.7, -1.3, 2.1])
    serial = finite_difference_jacobian(_quadratic, x, workers=1)
    threaded = finite_difference_jacobian(_quadratic, x, workers=3)
    np.testing.assert_array_equal(serial, threaded)


def test_finite_difference_jacobian_names_inadmissible_unknown():
    def guarded(x):
        if x[1] > 1.0:
            raise GeometryError("radius collapsed", node=3)
        return x.copy()

    with pytest.raises(GeometryError, match="r\\[2\\]") as info:
        finite_difference_jacobian(guarded, np.array([0.0, 1.0]), labels=["gamma[0]", "r[2]"], workers=1)
    assert info.value.node == 3


def test_jacobian_matrix_mode_block_requires_the_mode():
    jac = JacobianMatrix(np.eye(2), ["F1.sin[1]", "F2.cos[1]"], ["gamma[1]", "r[1]"])
    np.testing.assert_array_equal(jac.mode_block(1), np.eye(2))
    with pytest.raises(ValueError, match="Mode 2"):
        jac.mode_block(2)
    with pytest.raises(ValueError):
        JacobianMatrix(np.eye(2), ["F1.sin[1]"], ["gamma[1]", "r[1]"])
