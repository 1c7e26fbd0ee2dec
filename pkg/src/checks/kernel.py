"""
Kernel of the linearization: singular only at b = 2, only on mode 1, along cos(2 theta) in r.
"""

import logging
from typing import List

import numpy as np

from ..numerics.linearization import kernel_report, mode_matrix
from .base_check import BaseCheck, CheckResult, VerifyContext

logger = logging.getLogger(__name__)


class KernelCheck(BaseCheck):
    @property
    def name(self) -> str:
        return "kernel"

    @property
    def description(self) -> str:
        return "M_n is singular exactly for n = 1 at b = 2, with kernel (0, 1)"

    def run(self, context: VerifyContext) -> List[CheckResult]:
        n_max = context.n_modes
        at_two = kernel_report(2.0, 1.0, n_max)
        away = kernel_report(2.5, 1.0, n_max)
        flagged_two = [entry.n for entry in at_two if entry.flagged]
        flagged_away = [entry.n for entry in away if entry.flagged]
        m1 = mode_matrix(2.0, 1.0, 1)
        return [
            CheckResult.compare(
                "kernel_modes[b=2]", 1, flagged_two[0] if len(flagged_two) == 1 else -1, 0.0,
                note=f"flagged modes {flagged_two}",
            ),
            CheckResult.compare(
                "kernel_modes[b=2.5]", 0, len(flagged_away), 0.0,
                note=f"flagged modes {flagged_away}",
            ),
            CheckResult.compare("det_M1[b=2]", 0.0, m1.determinant, 1e-14),
            CheckResult.compare(
                "kernel_direction[b=2]", 0.0,
                float(np.max(np.abs(m1.entries @ np.array([0.0, 1.0])))), 1e-14,
            ),
        ]
