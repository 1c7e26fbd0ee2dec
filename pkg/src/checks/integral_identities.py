"""
Singular integral identities: periodic trapezoid quadrature against closed forms.
"""

import logging
import math
from typing import List

from ..numerics.oracles import integral_identity, identity_names_with_m
from .base_check import BaseCheck, CheckResult, VerifyContext

logger = logging.getLogger(__name__)

N_THETA_SAMPLES = 16


class IntegralIdentitiesCheck(BaseCheck):
    """Worst-case quadrature error of each identity over 16 theta samples."""

    @property
    def name(self) -> str:
        return "integral_identities"

    @property
    def description(self) -> str:
        return "quadrature of the singular identities matches their closed forms"

    def run(self, context: VerifyContext) -> List[CheckResult]:
        grid = context.grid
        tol = context.identity_tol
        note = f"relaxed tolerance at N_theta={grid.n_points}" if context.relaxed else ""
        # offset keeps the samples off the grid nodes
        thetas = [(k + 0.37) * math.pi / N_THETA_SAMPLES for k in range(N_THETA_SAMPLES)]

        results = []
        for name, ms in identity_names_with_m():
            for m in ms:
                worst = (0.0, 0.0, 0.0)
                for theta in thetas:
                    quadrature, closed = integral_identity(name, theta, grid, m)
                    error = abs(quadrature - closed)
                    if error >= worst[0]:
                        worst = (error, closed, quadrature)
                label = f"{name}[m={m}]" if len(ms) > 1 else name
                results.append(
                    CheckResult.compare(label, worst[1], worst[2], tol, error=worst[0], note=note)
                )
        if context.relaxed:
            logger.warning(f"Identity checks use the relaxed tolerance {tol:g} on a coarse grid")
        return results
