"""
Reference derivative values at (b, Omega) = (2, 1) through the discrete residual.
"""

import logging
from typing import List

import numpy as np

from ..numerics.oracles import DERIVATIVE_VALUES, derivative_value
from .base_check import BaseCheck, CheckResult, VerifyContext

logger = logging.getLogger(__name__)


def computed_values(context: VerifyContext):
    """All derivative values, computed once per verification run."""

    def compute():
        h = float(context.settings.get("fd_step", 1e-3))
        return {name: derivative_value(name, context.grid, 4, h) for name in DERIVATIVE_VALUES}

    return context.memo("derivative_values", compute)


class DerivativeValuesCheck(BaseCheck):
    @property
    def name(self) -> str:
        return "derivative_values"

    @property
    def description(self) -> str:
        return "finite-difference directional derivatives reproduce the ten reference values"

    def run(self, context: VerifyContext) -> List[CheckResult]:
        rtol = float(context.settings.get("derivative_rtol", 1e-4))
        results = []
        for name, value in computed_values(context).items():
            index = int(np.argmax(np.abs(value.expected))) if value.expected.size > 1 else 0
            results.append(
                CheckResult.compare(
                    name,
                    float(value.expected[index]),
                    float(value.computed[index]),
                    rtol,
                    error=value.error,
                    note="relative error" if value.expected.size == 1 else "max coefficient error",
                )
            )
        return results
