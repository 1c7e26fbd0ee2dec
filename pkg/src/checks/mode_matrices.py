"""
Finite-difference Jacobian at trivial states against the analytic mode blocks.
"""

import logging
from typing import List

import numpy as np

from ..models.sheet import SheetState
from ..models.solver import UnknownLayout, FIX_B
from ..numerics.linearization import fd_jacobian, mode_matrix
from .base_check import BaseCheck, CheckResult, VerifyContext

logger = logging.getLogger(__name__)

CHECK_B = (2.0, 2.5, 3.0)


class ModeMatricesCheck(BaseCheck):
    """Block n of the FD Jacobian equals M_n; blocks do not couple."""

    @property
    def name(self) -> str:
        return "mode_matrices"

    @property
    def description(self) -> str:
        return "FD Jacobian at (b, 0, 0) is block diagonal with blocks M_n"

    def run(self, context: VerifyContext) -> List[CheckResult]:
        tol = float(context.settings.get("jacobian_tol", 1e-6))
        n_modes = context.n_modes
        layout = UnknownLayout(FIX_B, n_modes)
        results = []
        for b in CHECK_B:
            jac = fd_jacobian(SheetState.trivial(b, n_modes), context.grid, layout)
            for n in range(1, n_modes + 1):
                expected = mode_matrix(b, 1.0, n).entries.copy()
                if context.fault == "mode_matrix_sign":
                    expected[0, 0] = -expected[0, 0]
                computed = jac.mode_block(n)
                error = float(np.max(np.abs(computed - expected)))
                results.append(
                    CheckResult.compare(
                        f"M_{n}[b={b:g}]",
                        float(np.max(np.abs(expected))),
                        float(np.max(np.abs(computed))),
                        tol,
                        error=error,
                        note="entrywise max error",
                    )
                )
            results.append(
                CheckResult.compare(f"mode_coupling[b={b:g}]", 0.0, jac.off_block_max(), tol)
            )
        return results
