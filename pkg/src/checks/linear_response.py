"""
Small perturbations of the trivial state respond as the analytic linearization predicts.
"""

import logging
from typing import List

import numpy as np

from ..models.fourier import FourierSeries, COSINE, SINE
from ..models.sheet import SheetState
from ..numerics.functional import assemble_residual
from ..numerics.linearization import apply_linearization
from ..numerics.oracles import pair_vector
from ..numerics.spectral import project_series
from .base_check import BaseCheck, CheckResult, VerifyContext

logger = logging.getLogger(__name__)

EPSILONS = (1e-5, 1e-6)
# O(eps) remainder constant for unit-size directions
REMAINDER_FACTOR = 100.0

G_DIRECTION = FourierSeries.from_modes(COSINE, {1: 0.5, 2: 0.25})
R_DIRECTION = FourierSeries.from_modes(COSINE, {1: 0.25, 3: -0.1})


class LinearResponseCheck(BaseCheck):
    @property
    def name(self) -> str:
        return "linear_response"

    @property
    def description(self) -> str:
        return "(F(b, eps g, eps r) - F(b, 0, 0)) / eps tends to DF(b, 0, 0)[g, r]"

    def run(self, context: VerifyContext) -> List[CheckResult]:
        grid = context.grid
        n_modes = max(4, context.n_modes)
        results = []
        for b in (2.0, 3.0):
            expected = pair_vector(apply_linearization(b, 1.0, G_DIRECTION, R_DIRECTION), n_modes)
            for eps in EPSILONS:
                state = SheetState(b, G_DIRECTION.scaled(eps), R_DIRECTION.scaled(eps))
                field = assemble_residual(state, grid)
                computed = pair_vector(
                    (
                        project_series(field.f1 / eps, grid, n_modes, SINE),
                        project_series(field.f2 / eps, grid, n_modes, COSINE),
                    ),
                    n_modes,
                )
                error = float(np.max(np.abs(computed - expected)))
                results.append(
                    CheckResult.compare(
                        f"linear_response[b={b:g},eps={eps:g}]",
                        float(np.max(np.abs(expected))),
                        float(np.max(np.abs(computed))),
                        REMAINDER_FACTOR * eps,
                        error=error,
                        note="max coefficient error",
                    )
                )
        return results
