import numpy as np
import pytest

from src.models.sheet import SheetState
from src.models.solver import LMOptions
from src.numerics.errors import GeometryError
from src.numerics.lm_solver import solve, solve_sheet
from src.numerics.oracles import local_branch_predict, local_branch_predict_r1

A = np.diag([1.0, 2.0])
C = np.array([1.0, 2.0])


def _linear(x):
    return A @ x - C


def _rosenbrock(x):
    return np.array([10.0 * (x[1] - x[0] ** 2), 1.0 - x[0]])


def test_linear_system_converges_in_three_iterations():
    report = solve(_linear, np.zeros(2), jacobian=lambda x: A)
    assert report.converged
    assert report.iterations == 3
    np.testing.assert_allclose(report.x, [1.0, 1.0], atol=1e-10)


def test_accepted_norms_decrease_strictly():
    report = solve(_rosenbrock, np.array([-1.2, 1.0]))
    assert report.converged
    np.testing.assert_allclose(report.x, [1.0, 1.0], atol=1e-8)
    assert np.all(np.diff(report.history) < 0)
    assert len(report.history) == report.iterations + 1


def test_damping_cap_ends_a_hopeless_solve():
    report = solve(lambda x: np.array([1.0 + x[0] ** 2]), np.zeros(1))
    assert not report.converged
    assert "damping" in report.message
    assert report.lambda_final > LMOptions().lambda_max


def test_inadmissible_trial_steps_are_rejected():
    def guarded(x):
        if x[0] > 0.6:
            raise GeometryError("outside", node=1)
        return x - 1.0

    report = solve(guarded, np.zeros(1), LMOptions(max_iter=50), jacobian=lambda x: np.eye(1))
    assert not report.converged
    assert report.x[0] <= 0.6
    assert report.iterations >= 1


def test_jacobian_geometry_error_carries_last_iterate():
    def jacobian(x):
        raise GeometryError("collapsed")

    x0 = np.array([0.25, -0.5])
    with pytest.raises(GeometryError) as info:
        solve(_linear, x0, jacobian=jacobian)
    np.testing.assert_array_equal(info.value.last_iterate, x0)


def test_invalid_options_and_guess():
    with pytest.raises(ValueError):
        solve(_linear, np.zeros(2), LMOptions(lambda_up=1.0))
    with pytest.raises(ValueError, match="not finite"):
        solve(lambda x: x / 0.0, np.zeros(2))


def test_report_summary():
    report = solve(_linear, np.zeros(2), jacobian=lambda x: A)
    assert "converged after 3 iterations" in str(report)
    assert report.to_dict()["converged"] is True


def test_solve_sheet_fixed_r1(grid):
    guess = local_branch_predict_r1(0.02, 1, n_modes=12)
    report = solve_sheet({"r1": 0.02}, guess, grid, LMOptions(), n_modes=12)
    assert report.converged
    assert report.state.r1 == 0.02
    assert report.residual_field.sup_norm <= 1e-8
    assert (report.state.b - 2.0) / 0.02 == pytest.approx(2.0, abs=0.2)
    assert report.refined_residual_sup is not None
    assert report.grid_change <= 1e-8


def test_solve_sheet_fixed_b_from_larger_guess(grid):
    guess = local_branch_predict(2.04, -1, n_modes=16)
    report = solve_sheet({"b": 2.04}, guess, grid, LMOptions(), n_modes=12)
    assert report.converged
    assert report.state.b == 2.04
    assert report.state.n_modes == 12
    assert report.state.r1 == pytest.approx(-0.02, abs=0.003)


def test_solve_sheet_on_trivial_branch(grid):
    report = solve_sheet({"b": 2.0}, SheetState.trivial(2.0, 4), grid)
    assert report.converged
    assert report.iterations == 0
    assert report.state.r1 == 0.0
    assert report.refined_residual_sup <= 1e-12


def test_solve_sheet_needs_one_fixed_parameter(grid):
    with pytest.raises(ValueError, match="Exactly one"):
        solve_sheet({"r1": 0.1, "b": 2.0}, SheetState.trivial(2.0, 4), grid)


def test_solve_sheet_inadmissible_guess(grid):
    guess = local_branch_predict_r1(0.1, 1, n_modes=4)
    with pytest.raises(GeometryError) as info:
        solve_sheet({"r1": -1.5}, guess, grid)
    assert isinstance(info.value.last_iterate, SheetState)
    assert info.value.last_iterate.r1 == -1.5
