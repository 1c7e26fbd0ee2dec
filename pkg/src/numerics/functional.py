"""
Steady residual F(b, g, r) = (F1, F2) of a uniformly rotating vortex sheet
on the polar graph z = (1 + r)(cos, sin) with strength gamma = b + g.

Collocation rows are theta_j = j*pi/N (j = 1..N); the eta integral runs over
the full period on eta_k = k*pi/N (k = 1..2N), so the diagonal k = j is a node.
F1 is desingularized by adding and subtracting 1/2 cot((theta - eta)/2) gamma(eta),
whose principal value is 1/2 H(gamma); both integrands then carry a finite
diagonal value supplied by the closed-form limits below.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple
import logging

import numpy as np

from ..models.fourier import Grid, COSINE, SINE
from ..models.sheet import SheetState, ResidualField
from ..utils.system_utils import SystemManager
from .errors import GeometryError
from .spectral import eval_series, differentiate, hilbert, project_series

logger = logging.getLogger(__name__)

GEOMETRY_TOL = 1e-10
RESIDUAL_MODES = ("coefficients", "nodes")


@dataclass(frozen=True, eq=False)
class _Samples:
    """Curve and strength sampled on the full-period eta grid."""

    radius: np.ndarray
    d_radius: np.ndarray
    d2_radius: np.ndarray
    gamma: np.ndarray


def _samples(state: SheetState, grid: Grid) -> _Samples:
    full = grid.full()
    dr = differentiate(state.r)
    return _Samples(
        radius=1.0 + eval_series(state.r, full),
        d_radius=eval_series(dr, full),
        d2_radius=eval_series(differentiate(dr), full),
        gamma=eval_series(state.gamma, full),
    )


@lru_cache(maxsize=2)
def _kernel_tables(n_points: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """sin(s), sin(s/2) and 1/2 cot(s/2) for s = theta_j - eta_k; the diagonal cot is 0."""
    theta = Grid(n_points).nodes
    eta = Grid(n_points, full_period=True).nodes
    s = theta[:, None] - eta[None, :]
    sin_s, sin_half = np.sin(s), np.sin(0.5 * s)
    diag = np.arange(n_points)
    with np.errstate(divide="ignore", invalid="ignore"):
        half_cot = 0.5 * np.cos(0.5 * s) / sin_half
    half_cot[diag, diag] = 0.0
    for table in (sin_s, sin_half, half_cot):
        table.flags.writeable = False
    return sin_s, sin_half, half_cot


def _pair_terms(rt, drt, re, sin_s, sin_half):
    """Numerators A2, A6 and the squared chord D for the pair (theta, eta).

    1 - cos(s) enters only as 2 sin(s/2)^2 so that nothing cancels as eta -> theta.
    """
    versin = 2.0 * sin_half * sin_half
    chord = (rt - re) ** 2 + 2.0 * rt * re * versin
    a2 = drt * (re - rt) - drt * re * versin - rt * re * sin_s
    a6 = rt * (rt - re) + rt * re * versin - drt * re * sin_s
    return a2, a6, chord


def _diagonal_limits(radius, d_radius, d2_radius) -> Tuple[np.ndarray, np.ndarray]:
    """eta -> theta limits of A2*A3 + 1/2 cot and of A6*A3 (Taylor expansion in theta - eta)."""
    speed2 = d_radius**2 + radius**2
    l1 = -d_radius * (d2_radius + radius) / (2.0 * speed2)
    l2 = (d_radius**2 - 0.5 * radius * d2_radius + 0.5 * radius**2) / speed2
    return l1, l2


def _check_radius(samples: _Samples, grid: Grid) -> None:
    bad = np.flatnonzero(samples.radius <= 0.0)
    if bad.size:
        node = int(bad[0])
        raise GeometryError(
            f"Radius 1 + r is non-positive at eta={grid.full().nodes[node]:.6g} "
            f"(node {node + 1})",
            node=node + 1,
        )


def _integral_rows(
    samples: _Samples, grid: Grid, lo: int, hi: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Mean integrals of the desingularized F1 integrand and of gamma(eta)*A6*A3 for rows lo..hi-1."""
    sin_t, sin_half_t, half_cot_t = _kernel_tables(grid.n_points)
    rows = np.arange(hi - lo)
    diag = np.arange(lo, hi)
    rt = samples.radius[lo:hi, None]
    drt = samples.d_radius[lo:hi, None]
    re = samples.radius[None, :]
    ge = samples.gamma[None, :]

    a2, a6, chord = _pair_terms(rt, drt, re, sin_t[lo:hi], sin_half_t[lo:hi])
    chord[rows, diag] = np.inf
    closest = np.min(chord, axis=1)
    bad = np.flatnonzero(closest <= GEOMETRY_TOL)
    if bad.size:
        node = lo + int(bad[0]) + 1
        raise GeometryError(
            f"Curve nearly self-intersects at node {node} "
            f"(squared chord {closest[bad[0]]:.3g})",
            node=node,
        )

    l1, l2 = _diagonal_limits(
        samples.radius[lo:hi], samples.d_radius[lo:hi], samples.d2_radius[lo:hi]
    )
    gt = samples.gamma[lo:hi]

    w1 = ge * (a2 / chord + half_cot_t[lo:hi])
    w1[rows, diag] = gt * l1
    w2 = ge * (a6 / chord)
    w2[rows, diag] = gt * l2
    return w1.mean(axis=1), w2.mean(axis=1)


def _raw_fields(state: SheetState, grid: Grid, lo: int = 0, hi: int = None):
    """F1 and the unprojected F2-tilde on rows lo..hi-1."""
    hi = grid.n_points if hi is None else hi
    samples = _samples(state, grid)
    _check_radius(samples, grid)

    chunk = SystemManager.row_chunk(hi - lo, 2 * grid.n_points)
    f1_int = np.empty(hi - lo)
    f2_int = np.empty(hi - lo)
    for start in range(lo, hi, chunk):
        stop = min(hi, start + chunk)
        f1_int[start - lo : stop - lo], f2_int[start - lo : stop - lo] = _integral_rows(
            samples, grid, start, stop
        )

    theta = grid.nodes[lo:hi]
    radius = samples.radius[lo:hi]
    d_radius = samples.d_radius[lo:hi]
    gamma = samples.gamma[lo:hi]
    a7 = 1.0 / (d_radius**2 + radius**2)

    h_gamma = eval_series(hilbert(state.gamma), theta)
    f1 = f1_int - 0.5 * h_gamma + state.omega * d_radius * radius
    f2_tilde = gamma * a7 * f2_int - state.omega * radius**2 * gamma * a7
    return f1, f2_tilde


def geometry_guard(state: SheetState, grid: Grid) -> float:
    """Raise GeometryError for an inadmissible curve, else return the smallest off-diagonal squared chord."""
    samples = _samples(state, grid)
    _check_radius(samples, grid)
    _, sin_half_t, _ = _kernel_tables(grid.n_points)
    closest = np.inf
    chunk = SystemManager.row_chunk(grid.n_points, 2 * grid.n_points, n_arrays=2)
    for lo in range(0, grid.n_points, chunk):
        hi = min(grid.n_points, lo + chunk)
        rt = samples.radius[lo:hi, None]
        re = samples.radius[None, :]
        chord = (rt - re) ** 2 + 4.0 * rt * re * sin_half_t[lo:hi] ** 2
        chord[np.arange(hi - lo), np.arange(lo, hi)] = np.inf
        rows = np.min(chord, axis=1)
        bad = np.flatnonzero(rows <= GEOMETRY_TOL)
        if bad.size:
            node = lo + int(bad[0]) + 1
            raise GeometryError(
                f"Curve nearly self-intersects at node {node} (squared chord {rows[bad[0]]:.3g})",
                node=node,
            )
        closest = min(closest, float(np.min(rows)))
    return closest


def f1_at(state: SheetState, node: int, grid: Grid) -> float:
    """F1 at grid.nodes[node]."""
    f1, _ = _raw_fields(state, grid, node, node + 1)
    return float(f1[0])


def f2_at(state: SheetState, node: int, grid: Grid) -> float:
    """F2-tilde (before the mean projection) at grid.nodes[node]."""
    _, f2_tilde = _raw_fields(state, grid, node, node + 1)
    return float(f2_tilde[0])


def _point_samples(state: SheetState, theta):
    dr = differentiate(state.r)
    return (
        1.0 + eval_series(state.r, theta),
        eval_series(dr, theta),
        eval_series(differentiate(dr), theta),
        eval_series(state.gamma, theta),
    )


def f1_diagonal_limit(state: SheetState, theta: float) -> float:
    """Limit eta -> theta of gamma(eta) * (A2*A3 + 1/2 cot((theta - eta)/2))."""
    radius, d_radius, d2_radius, gamma = _point_samples(state, theta)
    l1, _ = _diagonal_limits(radius, d_radius, d2_radius)
    return float(gamma * l1)


def f2_diagonal_limit(state: SheetState, theta: float) -> float:
    """Limit eta -> theta of the F2-tilde kernel A6*A3."""
    radius, d_radius, d2_radius, _ = _point_samples(state, theta)
    _, l2 = _diagonal_limits(radius, d_radius, d2_radius)
    return float(l2)


def f1_integrand(state: SheetState, theta: float, eta) -> np.ndarray:
    """Desingularized F1 integrand gamma(eta) * (A2*A3 + 1/2 cot) at eta != theta."""
    rt, drt, _, _ = _point_samples(state, theta)
    re = 1.0 + eval_series(state.r, eta)
    ge = eval_series(state.gamma, eta)
    s = theta - np.asarray(eta, dtype=float)
    a2, _, chord = _pair_terms(rt, drt, re, np.sin(s), np.sin(0.5 * s))
    return ge * (a2 / chord + 0.5 / np.tan(0.5 * s))


def f2_kernel(state: SheetState, theta: float, eta) -> np.ndarray:
    """F2-tilde kernel A6*A3 at eta != theta."""
    rt, drt, _, _ = _point_samples(state, theta)
    re = 1.0 + eval_series(state.r, eta)
    s = theta - np.asarray(eta, dtype=float)
    _, a6, chord = _pair_terms(rt, drt, re, np.sin(s), np.sin(0.5 * s))
    return a6 / chord


def assemble_residual(state: SheetState, grid: Grid) -> ResidualField:
    """F1 at every node and F2 = (I - P0) F2-tilde with the discrete grid mean."""
    f1, f2_tilde = _raw_fields(state, grid)
    f2 = f2_tilde - np.mean(f2_tilde)
    field = ResidualField.from_samples(f1, f2)
    logger.debug(
        f"Residual at {state!r}, N_theta={grid.n_points}: sup={field.sup_norm:.3e}"
    )
    return field


def residual_coefficients(
    state: SheetState, grid: Grid, n_modes: int, mode: str = "coefficients"
) -> np.ndarray:
    """Residual vector driven to zero by the solver.

    ``coefficients``: [F1 sine modes 1..n_modes, F2 cosine modes 1..n_modes];
    ``nodes``: [F1 samples, F2 samples].
    """
    field = assemble_residual(state, grid)
    if mode == "nodes":
        return np.concatenate([field.f1, field.f2])
    if mode != "coefficients":
        raise ValueError(f"Unknown residual mode '{mode}', expected one of {RESIDUAL_MODES}")
    return np.concatenate(
        [
            project_series(field.f1, grid, n_modes, SINE).coeffs,
            project_series(field.f2, grid, n_modes, COSINE).coeffs,
        ]
    )
