"""
Diagonal limits of the residual integrands against Richardson extrapolation.
"""

import logging
import math
from typing import List

from ..models.fourier import FourierSeries, COSINE
from ..models.sheet import SheetState
from ..numerics.functional import (
    f1_diagonal_limit,
    f1_integrand,
    f2_diagonal_limit,
    f2_kernel,
)
from ..numerics.oracles import richardson_diagonal
from .base_check import BaseCheck, CheckResult, VerifyContext

logger = logging.getLogger(__name__)

LIMIT_TOL = 1e-6


def _state(b, g_modes, r_modes):
    return SheetState(
        b, FourierSeries.from_modes(COSINE, g_modes), FourierSeries.from_modes(COSINE, r_modes)
    )


F1_CASES = [
    ("r=0.1cos2", _state(2.0, {}, {1: 0.1}), math.pi / 4),
    ("g=0.1cos2,r=0.05cos4", _state(2.0, {1: 0.1}, {2: 0.05}), math.pi / 3),
    ("trivial", _state(2.0, {}, {}), math.pi / 5),
]
F2_CASES = [
    ("r=0.1cos2", _state(2.0, {}, {1: 0.1}), math.pi / 6),
    ("g=0.2cos2,r=0.1cos2", _state(2.0, {1: 0.2}, {1: 0.1}), math.pi / 2),
    ("trivial", _state(3.0, {}, {}), math.pi / 7),
]


class DiagonalLimitsCheck(BaseCheck):
    @property
    def name(self) -> str:
        return "diagonal_limits"

    @property
    def description(self) -> str:
        return "closed-form eta -> theta limits agree with extrapolated integrand samples"

    def run(self, context: VerifyContext) -> List[CheckResult]:
        results = []
        for label, state, theta in F1_CASES:
            oracle = richardson_diagonal(lambda eta: f1_integrand(state, theta, eta), theta)
            results.append(
                CheckResult.compare(
                    f"f1_limit[{label}]", oracle, f1_diagonal_limit(state, theta), LIMIT_TOL
                )
            )
        for label, state, theta in F2_CASES:
            oracle = richardson_diagonal(lambda eta: f2_kernel(state, theta, eta), theta)
            results.append(
                CheckResult.compare(
                    f"f2_limit[{label}]", oracle, f2_diagonal_limit(state, theta), LIMIT_TOL
                )
            )
        return results
