"""
Natural-parameter continuation of solution branches in b or r1, with fold
localization and the near-bifurcation slope of b against r1.
"""

from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple
import logging

import numpy as np

from ..models.branch import BranchPoint, ContinuationConfig, ContinuationResult
from ..models.fourier import Grid
from ..models.sheet import SheetState
from ..models.solver import LMOptions
from ..utils.persistence import load_seed
from .errors import ConfigError, ContinuationError, GeometryError
from .lm_solver import solve_sheet
from .oracles import local_branch_predict, local_branch_predict_r1

logger = logging.getLogger(__name__)

SLOPE_WINDOW = 0.05
SLOPE_MIN_POINTS = 5


class FoldPoint(NamedTuple):
    r1: float
    b: float


def initial_guess(config: ContinuationConfig, seed_state: Optional[SheetState] = None) -> SheetState:
    """Seed for the first point: a given state, a stored solution, or linear theory."""
    if seed_state is not None:
        return seed_state
    if config.seed_path:
        return load_seed(config.seed_path)
    try:
        if config.parameter == "b":
            return local_branch_predict(
                config.start, config.seed_sign, config.n_modes, config.trust_radius
            )
        return local_branch_predict_r1(
            config.start, config.seed_sign, config.n_modes, config.trust_radius
        )
    except ValueError as e:
        raise ContinuationError(
            f"No linear-theory seed at {config.parameter}={config.start}: {e}. "
            "Start closer to the bifurcation point or seed from a file."
        ) from e


def continue_branch(
    config: ContinuationConfig,
    opts: Optional[LMOptions] = None,
    on_point: Optional[Callable[[BranchPoint], None]] = None,
    seed_state: Optional[SheetState] = None,
    start_index: int = 0,
) -> ContinuationResult:
    """Step the parameter from config.start by config.step, seeding each solve with the previous point.

    Every accepted point is re-checked on the grid (residual sup <= acceptance_tol),
    on the doubled grid (sup changes by at most grid_stability_tol) and against its
    predecessor (coefficient jump <= max_coefficient_jump * |step|).
    A failure at the first step raises ContinuationError; later failures end the
    run with a truncated result.
    """
    if not config.validate():
        raise ConfigError(f"Invalid continuation configuration: {config}")
    opts = opts or LMOptions()
    grid = Grid(config.n_theta)
    guess = initial_guess(config, seed_state)
    max_jump = config.max_coefficient_jump * abs(config.step)

    points: List[BranchPoint] = []
    previous: Optional[np.ndarray] = None
    logger.info(
        f"Continuing in {config.parameter} from {config.start} by {config.step} "
        f"for {config.n_steps} steps (N={config.n_modes}, N_theta={config.n_theta})"
    )

    for k in range(config.n_steps):
        value = config.parameter_at(k)
        failure = None
        try:
            report = solve_sheet({config.parameter: value}, guess, grid, opts, config.n_modes)
        except GeometryError as e:
            failure = f"inadmissible curve at {config.parameter}={value:.6g}: {e}"
        else:
            state = report.state
            coefficients = state.coefficient_vector(config.n_modes)
            grid_sup = report.residual_field.sup_norm
            if not report.converged:
                failure = (
                    f"solver did not converge at {config.parameter}={value:.6g} "
                    f"({report.message}, sup={report.residual_sup:.3e})"
                )
            elif grid_sup > config.acceptance_tol:
                failure = (
                    f"grid residual {grid_sup:.3e} above acceptance tolerance "
                    f"{config.acceptance_tol:.1e} at {config.parameter}={value:.6g}"
                )
            elif report.grid_change > config.grid_stability_tol:
                failure = (
                    f"residual changes by {report.grid_change:.3e} on the refined grid "
                    f"N_theta={2 * grid.n_points} (limit {config.grid_stability_tol:.1e}) "
                    f"at {config.parameter}={value:.6g}"
                )
            elif previous is not None:
                jump = float(np.max(np.abs(coefficients - previous)))
                if jump > max_jump:
                    failure = (
                        f"coefficient jump {jump:.3e} exceeds {max_jump:.3e} at "
                        f"{config.parameter}={value:.6g}; possible branch switch"
                    )

        if failure:
            if k == 0:
                raise ContinuationError(
                    f"Could not start the branch: {failure}. "
                    "Try a smaller offset from the bifurcation point or a different seed."
                )
            logger.warning(f"Branch truncated after {len(points)} points: {failure}")
            return ContinuationResult(points, completed=False, message=failure)

        point = BranchPoint(
            step_index=start_index + k,
            r1=state.r1,
            b=state.b,
            state=state,
            residual_sup=grid_sup,
            iterations=report.iterations,
            refined_residual_sup=report.refined_residual_sup,
        )
        if on_point is not None:
            on_point(point)
        points.append(point)
        logger.info(f"Accepted {point!r}")
        guess = state
        previous = coefficients

    return ContinuationResult(points, completed=True, message="all steps converged")


def _branch_arrays(branch: Sequence[BranchPoint]) -> Tuple[np.ndarray, np.ndarray]:
    return (
        np.array([p.r1 for p in branch], dtype=float),
        np.array([p.b for p in branch], dtype=float),
    )


def detect_fold(branch: Sequence[BranchPoint]) -> Optional[FoldPoint]:
    """Vertex of a quadratic b(r1) through three points around the first sign change of db/dr1."""
    if len(branch) < 3:
        raise ValueError(f"Fold detection needs at least 3 points, got {len(branch)}")
    r1, b = _branch_arrays(branch)
    slope_sign = np.sign(np.diff(b) / np.diff(r1))
    changes = np.flatnonzero(slope_sign[:-1] * slope_sign[1:] < 0)
    if not changes.size:
        return None
    i = int(changes[0])
    a2, a1, a0 = np.polyfit(r1[i : i + 3], b[i : i + 3], 2)
    r_fold = -a1 / (2.0 * a2)
    fold = FoldPoint(float(r_fold), float(np.polyval([a2, a1, a0], r_fold)))
    logger.info(f"Fold detected at r1={fold.r1:.6g}, b={fold.b:.6g}")
    return fold


def branch_slope(
    branch: Sequence[BranchPoint],
    window: float = SLOPE_WINDOW,
    min_points: int = SLOPE_MIN_POINTS,
) -> float:
    """Least-squares slope db/dr1 over the points with |r1| <= window."""
    r1, b = _branch_arrays(branch)
    near = np.abs(r1) <= window
    if np.count_nonzero(near) < min_points:
        raise ValueError(
            f"Need at least {min_points} points with |r1| <= {window}, "
            f"got {np.count_nonzero(near)}"
        )
    if np.ptp(r1[near]) == 0.0:
        raise ValueError("r1 is constant on the branch; the slope db/dr1 is undefined")
    return float(np.polyfit(r1[near], b[near], 1)[0])
