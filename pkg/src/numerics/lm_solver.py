"""
Levenberg-Marquardt driver for square or overdetermined residual systems,
and its specialization to sheet states with r_1 or b held fixed.
"""

from dataclasses import replace
from typing import Callable, Mapping, Optional
import logging

import numpy as np

from ..models.fourier import Grid
from ..models.sheet import SheetState
from ..models.solver import UnknownLayout, LMOptions, SolveReport, FIX_R1, FIX_B
from .errors import GeometryError
from .functional import assemble_residual, geometry_guard, residual_coefficients
from .linearization import finite_difference_jacobian

logger = logging.getLogger(__name__)

ResidualFn = Callable[[np.ndarray], np.ndarray]
JacobianFn = Callable[[np.ndarray], np.ndarray]


def _sup(f: np.ndarray) -> float:
    return float(np.max(np.abs(f))) if f.size else 0.0


def _rms(f: np.ndarray) -> float:
    return float(np.sqrt(np.mean(f**2))) if f.size else 0.0


def solve(
    residual: ResidualFn,
    x0: np.ndarray,
    opts: Optional[LMOptions] = None,
    jacobian: Optional[JacobianFn] = None,
) -> SolveReport:
    """Minimize ||residual(x)||_2 from x0.

    Each iteration solves (J^T J + lambda diag(J^T J)) s = -J^T f. A step is
    accepted only if it lowers ||f||_2, so the accepted norms never increase.
    Trial points outside the admissible set count as failed steps.
    """
    opts = opts or LMOptions()
    if not opts.validate():
        raise ValueError(f"Invalid solver options: {opts}")
    if jacobian is None:

        def jacobian(x):
            return finite_difference_jacobian(residual, x, opts.fd_step, opts.jacobian_workers)

    x = np.array(x0, dtype=float)
    f = np.asarray(residual(x), dtype=float)
    if not np.all(np.isfinite(f)):
        raise ValueError("Residual is not finite at the initial guess")

    lam = opts.lambda0
    f_norm = float(np.linalg.norm(f))
    history = [f_norm]
    iterations = 0
    message = "maximum iterations reached"

    def report(converged: bool, reason: str) -> SolveReport:
        return SolveReport(
            x=x.copy(),
            residual_sup=_sup(f),
            residual_l2=_rms(f),
            iterations=iterations,
            lambda_final=lam,
            converged=converged,
            message=reason,
            history=list(history),
        )

    while iterations < opts.max_iter:
        if _sup(f) <= opts.tol:
            return report(True, "residual below tolerance")

        try:
            jac = jacobian(x)
        except GeometryError as e:
            e.last_iterate = x.copy()
            raise

        normal = jac.T @ jac
        gradient = jac.T @ f
        scaling = np.diag(normal).copy()
        scaling[scaling <= 0.0] = 1.0

        while True:
            step = None
            try:
                step = np.linalg.solve(normal + lam * np.diag(scaling), -gradient)
            except np.linalg.LinAlgError:
                logger.debug(f"Singular normal equations at lambda={lam:.1e}")

            if step is not None and np.all(np.isfinite(step)):
                trial = x + step
                try:
                    f_trial = np.asarray(residual(trial), dtype=float)
                    trial_norm = float(np.linalg.norm(f_trial))
                    accepted = np.all(np.isfinite(f_trial)) and trial_norm < f_norm
                except GeometryError as e:
                    logger.debug(f"Trial step rejected, inadmissible curve: {e}")
                    accepted = False
                if accepted:
                    break

            lam *= opts.lambda_up
            if lam > opts.lambda_max:
                logger.warning(
                    f"Damping exceeded {opts.lambda_max:.0e} after {iterations} iterations; "
                    f"residual sup {_sup(f):.3e}"
                )
                return report(False, "damping parameter exceeded its cap")

        x, f, f_norm = trial, f_trial, trial_norm
        lam /= opts.lambda_down
        iterations += 1
        history.append(f_norm)
        logger.debug(
            f"LM iteration {iterations}: |f|_2={f_norm:.3e}, sup={_sup(f):.3e}, lambda={lam:.1e}"
        )

        if np.linalg.norm(step) <= opts.stagnation_tol * (1.0 + np.linalg.norm(x)):
            converged = _sup(f) <= opts.tol
            message = "residual below tolerance" if converged else "step stagnated"
            return report(converged, message)

    converged = _sup(f) <= opts.tol
    return report(converged, "residual below tolerance" if converged else message)


def _with_fixed(guess: SheetState, layout: UnknownLayout, value: float) -> SheetState:
    padded = guess.padded(max(layout.n_modes, guess.n_modes))
    if layout.mode == FIX_B:
        return SheetState(value, padded.g, padded.r, padded.omega)
    r = padded.r_coeffs()
    r[0] = value
    return SheetState.from_coefficients(padded.gamma_coeffs(), r, padded.omega)


def solve_sheet(
    fixed: Mapping[str, float],
    guess: SheetState,
    grid: Grid,
    opts: Optional[LMOptions] = None,
    n_modes: Optional[int] = None,
) -> SolveReport:
    """Solve F = 0 for a sheet with either ``{"r1": value}`` or ``{"b": value}`` held fixed."""
    opts = opts or LMOptions()
    if len(fixed) != 1 or not set(fixed) <= {"r1", "b"}:
        raise ValueError(f"Exactly one of r1 or b must be fixed, got {dict(fixed)}")
    key, value = next(iter(fixed.items()))
    n_modes = n_modes or guess.n_modes
    layout = UnknownLayout(FIX_R1 if key == "r1" else FIX_B, n_modes)
    start = _with_fixed(guess, layout, float(value)).resized(n_modes)

    def residual(x: np.ndarray) -> np.ndarray:
        state = layout.unflatten(x, value, guess.omega)
        return residual_coefficients(state, grid, n_modes, opts.residual_mode)

    def jacobian(x: np.ndarray) -> np.ndarray:
        return finite_difference_jacobian(
            residual, x, opts.fd_step, opts.jacobian_workers, layout.labels
        )

    logger.info(
        f"Solving with {key}={value} fixed: N={n_modes}, N_theta={grid.n_points}, "
        f"{layout.size} unknowns, residual mode '{opts.residual_mode}'"
    )
    try:
        closest = geometry_guard(start, grid)
        logger.debug(f"Initial guess admissible, smallest squared chord {closest:.3e}")
        result = solve(residual, layout.flatten(start), opts, jacobian)
    except GeometryError as e:
        if isinstance(e.last_iterate, np.ndarray):
            e.last_iterate = layout.unflatten(e.last_iterate, value, guess.omega)
        elif e.last_iterate is None:
            e.last_iterate = start
        raise

    state = layout.unflatten(result.x, value, guess.omega)
    field = assemble_residual(state, grid)
    try:
        refined = assemble_residual(state, grid.refined())
    except GeometryError as e:
        e.last_iterate = state
        raise
    result = replace(
        result, state=state, residual_field=field, refined_residual_sup=refined.sup_norm
    )
    log = logger.info if result.converged else logger.warning
    log(
        f"Solve {result}: {state!r}, grid residual sup={field.sup_norm:.3e}, "
        f"at N_theta={2 * grid.n_points}: {refined.sup_norm:.3e}"
    )
    if result.grid_change > 10.0 * opts.tol:
        logger.warning(
            f"Residual changes by {result.grid_change:.3e} when N_theta is doubled "
            f"(above 10*tol={10.0 * opts.tol:.1e}); the grid does not resolve this state"
        )
    return result
