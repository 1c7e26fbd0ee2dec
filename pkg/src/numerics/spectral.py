"""
Fourier primitives on the even-mode class: evaluation, differentiation,
periodic Hilbert transform, mode projection and trapezoidal quadrature.
"""

from functools import lru_cache
from typing import Union
import logging

import numpy as np

from ..models.fourier import FourierSeries, Grid, COSINE, SINE, PARITIES

logger = logging.getLogger(__name__)

Nodes = Union[Grid, np.ndarray, float]


def _as_nodes(where: Nodes) -> np.ndarray:
    if isinstance(where, Grid):
        return where.nodes
    return np.asarray(where, dtype=float)


@lru_cache(maxsize=16)
def trig_table(n_points: int, full_period: bool, n_modes: int, parity: str) -> np.ndarray:
    """Read-only matrix trig(2n*theta_j), rows = grid nodes, columns n = 1..n_modes."""
    nodes = Grid(n_points, full_period).nodes
    phase = np.outer(nodes, 2 * np.arange(1, n_modes + 1))
    table = np.cos(phase) if parity == COSINE else np.sin(phase)
    table.flags.writeable = False
    return table


def eval_series(series: FourierSeries, where: Nodes) -> np.ndarray:
    """Evaluate constant + sum a_n trig(2n*theta) at the grid nodes (or given points)."""
    if isinstance(where, Grid) and series.n_modes:
        table = trig_table(where.n_points, where.full_period, series.n_modes, series.parity)
        return series.constant + table @ series.coeffs
    theta = _as_nodes(where)
    if not series.n_modes:
        return np.full(np.shape(theta), series.constant)
    phase = np.multiply.outer(theta, series.wavenumbers)
    trig = np.cos(phase) if series.parity == COSINE else np.sin(phase)
    return series.constant + trig @ series.coeffs


def differentiate(series: FourierSeries) -> FourierSeries:
    """d/dtheta: cosine {a_n} -> sine {-2n a_n}; sine {a_n} -> cosine {2n a_n}."""
    k = series.wavenumbers
    if series.parity == COSINE:
        return FourierSeries(SINE, -k * series.coeffs)
    return FourierSeries(COSINE, k * series.coeffs)


def hilbert(series: FourierSeries) -> FourierSeries:
    """Periodic Hilbert transform, H(cos m theta) = sin m theta; the mean maps to 0."""
    if series.parity != COSINE:
        raise ValueError("Hilbert transform is only defined here for cosine series")
    return FourierSeries(SINE, series.coeffs.copy())


def project_mode(values: np.ndarray, grid: Grid, mode: int, parity: str) -> float:
    """(1/pi) * integral over the period of values * trig(mode*theta).

    ``mode`` is the wavenumber and must be even. The integrand is pi-periodic,
    so the half-period samples are extended by periodicity.
    """
    if mode % 2:
        raise ValueError(f"Only even wavenumbers are representable, got mode={mode}")
    if parity not in PARITIES:
        raise ValueError(f"Unknown parity: {parity}")
    values = np.asarray(values, dtype=float)
    phase = mode * grid.nodes
    trig = np.cos(phase) if parity == COSINE else np.sin(phase)
    return float(2.0 * np.mean(values * trig))


def project_series(values: np.ndarray, grid: Grid, n_modes: int, parity: str) -> FourierSeries:
    """Project samples onto all modes 1..n_modes at once (inverse of eval_series)."""
    values = np.asarray(values, dtype=float)
    table = trig_table(grid.n_points, grid.full_period, n_modes, parity)
    coeffs = 2.0 * (table.T @ values) / grid.size
    constant = float(np.mean(values)) if parity == COSINE else 0.0
    return FourierSeries(parity, coeffs, constant)


def trapezoid_integral(integrand_values: np.ndarray, grid: Grid) -> float:
    """Mean integral (1/2pi) * integral over the period with the periodic trapezoid rule."""
    values = np.asarray(integrand_values, dtype=float)
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        j = int(bad[0])
        raise ValueError(
            f"Non-finite integrand at node {j + 1} (theta={grid.nodes[j]:.6g}); "
            "the singular point was not removed"
        )
    # equal weights h on a uniform periodic grid; normalized by the period
    return float(values.sum() * grid.spacing / grid.period)
