"""
Parity of the residual on random states: F1 is odd and F2 is even in theta.
"""

import logging
from typing import List

import numpy as np

from ..models.fourier import FourierSeries, COSINE, SINE
from ..models.sheet import SheetState
from ..numerics.functional import assemble_residual
from ..numerics.spectral import project_series
from .base_check import BaseCheck, CheckResult, VerifyContext

logger = logging.getLogger(__name__)

AMPLITUDE = 0.05
SYMMETRY_TOL = 1e-10


def random_state(rng: np.random.Generator, n_modes: int) -> SheetState:
    """b in [1, 3], g and r coefficients uniform in [-AMPLITUDE, AMPLITUDE]."""
    return SheetState(
        rng.uniform(1.0, 3.0),
        FourierSeries(COSINE, rng.uniform(-AMPLITUDE, AMPLITUDE, n_modes)),
        FourierSeries(COSINE, rng.uniform(-AMPLITUDE, AMPLITUDE, n_modes)),
    )


def parity_defect(state: SheetState, grid) -> float:
    """Largest wrong-parity content of (F1, F2) relative to the residual sup-norm."""
    field = assemble_residual(state, grid)
    n_check = max(1, grid.n_points // 2 - 1)
    f1_even = project_series(field.f1, grid, n_check, COSINE)
    f2_odd = project_series(field.f2, grid, n_check, SINE)
    wrong = max(
        float(np.max(np.abs(f1_even.coeffs))),
        abs(f1_even.constant),
        float(np.max(np.abs(f2_odd.coeffs))),
    )
    return wrong / max(field.sup_norm, np.finfo(float).tiny)


class SymmetryCheck(BaseCheck):
    @property
    def name(self) -> str:
        return "symmetry"

    @property
    def description(self) -> str:
        return "F1 has no cosine content and F2 no sine content on random states"

    def run(self, context: VerifyContext) -> List[CheckResult]:
        rng = np.random.default_rng(int(context.settings.get("seed", 12345)))
        samples = int(context.settings.get("symmetry_samples", 100))
        n_modes = min(8, context.n_modes)
        worst = max(parity_defect(random_state(rng, n_modes), context.grid) for _ in range(samples))
        return [
            CheckResult.compare(
                f"parity[{samples} states]", 0.0, worst, SYMMETRY_TOL,
                note="relative to residual sup-norm",
            )
        ]
