"""
Trivial-branch residual check: the unperturbed circle solves F = 0 for every b.
"""

import logging
from typing import List

from ..models.sheet import SheetState
from ..numerics.functional import assemble_residual
from .base_check import BaseCheck, CheckResult, VerifyContext

logger = logging.getLogger(__name__)

TRIVIAL_B = (1.0, 2.0, 3.0, 5.0)
TRIVIAL_TOL = 1e-12


class TrivialResidualCheck(BaseCheck):
    """Residual of (b, 0, 0) on the verification grid."""

    @property
    def name(self) -> str:
        return "trivial_residual"

    @property
    def description(self) -> str:
        return "sup-norm of F(b, 0, 0) vanishes for b in {1, 2, 3, 5}"

    def run(self, context: VerifyContext) -> List[CheckResult]:
        results = []
        for b in TRIVIAL_B:
            field = assemble_residual(SheetState.trivial(b, context.n_modes), context.grid)
            results.append(
                CheckResult.compare(f"{self.name}[b={b:g}]", 0.0, field.sup_norm, TRIVIAL_TOL)
            )
        return results
