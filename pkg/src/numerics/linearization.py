"""
Linearization of the residual at the trivial state (b, 0, 0) and
finite-difference Jacobians of the discrete residual.

At the trivial state the linearization acts diagonally on Fourier modes:
the pair (a_n, b_n) of cos(2n theta) coefficients of (g, r) maps to the
sin(2n theta) coefficient of F1 and the cos(2n theta) coefficient of F2
through the 2x2 block M_n.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple
import logging
import time

import numpy as np

from ..models.fourier import FourierSeries, Grid, COSINE, SINE
from ..models.operators import ModeMatrix, JacobianMatrix, f1_label, f2_label
from ..models.sheet import SheetState
from ..models.solver import UnknownLayout
from ..utils.system_utils import SystemManager
from .errors import GeometryError
from .functional import residual_coefficients

logger = logging.getLogger(__name__)

KERNEL_TOL = 1e-12


class KernelEntry(NamedTuple):
    n: int
    sigma_min: float
    flagged: bool


def mode_matrix(b: float, omega: float, n: int) -> ModeMatrix:
    if n < 1:
        raise ValueError(f"Mode index must be >= 1, got {n}")
    entries = [
        [-0.5, -2.0 * n * (omega - 0.5 * b)],
        [0.5 * b - omega, b * b * (n - 1)],
    ]
    return ModeMatrix(n, float(b), float(omega), np.array(entries))


def apply_linearization(
    b: float, omega: float, g: FourierSeries, r: FourierSeries
) -> Tuple[FourierSeries, FourierSeries]:
    """DF(b, 0, 0)[g, r] as (sine series of F1, cosine series of F2)."""
    for name, series in (("g", g), ("r", r)):
        if series.parity != COSINE or series.constant != 0.0:
            raise ValueError(f"{name} must be a mean-free cosine series, got {series!r}")
    n_modes = max(g.n_modes, r.n_modes)
    a, c = g.padded(n_modes).coeffs, r.padded(n_modes).coeffs
    f1 = np.zeros(n_modes)
    f2 = np.zeros(n_modes)
    for n in range(1, n_modes + 1):
        f1[n - 1], f2[n - 1] = mode_matrix(b, omega, n).apply(a[n - 1], c[n - 1])
    return FourierSeries(SINE, f1), FourierSeries(COSINE, f2)


def finite_difference_jacobian(
    fun: Callable[[np.ndarray], np.ndarray],
    x: np.ndarray,
    rel_step: float = 1e-6,
    workers: int = 0,
    labels: Optional[Sequence[str]] = None,
) -> np.ndarray:
    """Central differences with h_i = rel_step * max(1, |x_i|), one task per column.

    Columns are written by index, so the result does not depend on ``workers``.
    """
    x = np.asarray(x, dtype=float)
    labels = list(labels) if labels is not None else [f"x[{i}]" for i in range(x.size)]
    steps = rel_step * np.maximum(1.0, np.abs(x))

    def column(i: int) -> np.ndarray:
        forward, backward = x.copy(), x.copy()
        forward[i] += steps[i]
        backward[i] -= steps[i]
        try:
            return (fun(forward) - fun(backward)) / (2.0 * steps[i])
        except GeometryError as e:
            raise GeometryError(
                f"Perturbing unknown {labels[i]} by +/-{steps[i]:.1e} leaves the admissible set: {e}",
                node=e.node,
            ) from e

    n_workers = min(SystemManager.worker_count(workers), x.size)
    started = time.perf_counter()
    if n_workers <= 1:
        columns = [column(i) for i in range(x.size)]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            columns = list(pool.map(column, range(x.size)))
    logger.debug(
        f"Jacobian with {x.size} columns on {n_workers} workers in "
        f"{time.perf_counter() - started:.2f}s"
    )
    return np.column_stack(columns)


def residual_labels(n_modes: int, grid: Grid, residual_mode: str) -> List[str]:
    if residual_mode == "nodes":
        return [f"F1({j})" for j in range(1, grid.n_points + 1)] + [
            f"F2({j})" for j in range(1, grid.n_points + 1)
        ]
    return [f1_label(n) for n in range(1, n_modes + 1)] + [
        f2_label(n) for n in range(1, n_modes + 1)
    ]


def fd_jacobian(
    state: SheetState,
    grid: Grid,
    layout: UnknownLayout,
    h: float = 1e-6,
    residual_mode: str = "coefficients",
    workers: int = 0,
) -> JacobianMatrix:
    """Jacobian of the projected residual with respect to the layout's unknowns."""
    if h <= 0:
        raise ValueError(f"Finite-difference step must be positive, got {h}")
    fixed = layout.fixed_value(state)

    def fun(x: np.ndarray) -> np.ndarray:
        trial = layout.unflatten(x, fixed, state.omega)
        return residual_coefficients(trial, grid, layout.n_modes, residual_mode)

    values = finite_difference_jacobian(
        fun, layout.flatten(state), h, workers, layout.labels
    )
    return JacobianMatrix(
        values, residual_labels(layout.n_modes, grid, residual_mode), layout.labels
    )


def kernel_report(b: float, omega: float, n_max: int) -> List[KernelEntry]:
    """Smallest singular value of each M_n, flagged below KERNEL_TOL."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    report = []
    for n in range(1, n_max + 1):
        sigma_min = float(mode_matrix(b, omega, n).singular_values.min())
        report.append(KernelEntry(n, sigma_min, sigma_min < KERNEL_TOL))
    flagged = [entry.n for entry in report if entry.flagged]
    if flagged:
        logger.info(f"Linearization at b={b} is singular on modes {flagged}")
    return report
