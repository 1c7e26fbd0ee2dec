"""
Reduced-functional derivatives rebuilt from the computed derivative values.
"""

import logging
from typing import List

from ..numerics.oracles import assemble_fred_derivatives, fred_coefficients, reduced_quadratic
from .base_check import BaseCheck, CheckResult, VerifyContext
from .derivative_values import computed_values

logger = logging.getLogger(__name__)

# t at which the rebuilt quadratic is evaluated on the lines b - 2 = +/-2t
BRANCH_T = 0.05


class ReducedFunctionalCheck(BaseCheck):
    @property
    def name(self) -> str:
        return "reduced_functional"

    @property
    def description(self) -> str:
        return "F_red derivatives at (2, 0) give the quadratic form (b-2)^2 - 4t^2"

    def run(self, context: VerifyContext) -> List[CheckResult]:
        rtol = float(context.settings.get("derivative_rtol", 1e-4))
        h = float(context.settings.get("fd_step", 1e-3))
        values = {name: float(v.computed[0]) for name, v in computed_values(context).items()
                  if v.computed.size == 1}
        computed = assemble_fred_derivatives(context.grid, 4, h, values)
        expected = fred_coefficients()
        results = [
            CheckResult.compare(
                f"fred_{key}",
                expected[key],
                computed[key],
                rtol,
                error=abs(computed[key] - expected[key]) / max(1.0, abs(expected[key])),
            )
            for key in ("b", "t", "bb", "tt", "tb")
        ]
        for side in (1, -1):
            t = side * BRANCH_T
            value = reduced_quadratic(2.0 + 2.0 * abs(t), t, computed)
            results.append(
                CheckResult.compare(
                    f"fred_on_branch[{'+' if side > 0 else '-'}]",
                    0.0,
                    value,
                    10.0 * rtol,
                    error=abs(value) / (4.0 * t * t),
                    note="relative to (b-2)^2",
                )
            )
        return results
