"""
Solver models: unknown flattening, Levenberg-Marquardt options and reports.
"""

from dataclasses import dataclass, field, fields, asdict
from typing import Dict, Any, List, Optional
import logging

import numpy as np

from .fourier import FourierSeries, COSINE
from .operators import gamma_label, radius_label
from .sheet import SheetState, ResidualField

logger = logging.getLogger(__name__)

FIX_R1 = "fix_r1"
FIX_B = "fix_b"
LAYOUT_MODES = (FIX_R1, FIX_B)


@dataclass(frozen=True)
class UnknownLayout:
    """Maps a SheetState to the solver's unknown vector and back.

    fix_r1: [gamma_0 .. gamma_N, r_2 .. r_N], b = gamma_0 is solved for;
    fix_b:  [gamma_1 .. gamma_N, r_1 .. r_N]. Both have 2N entries.
    """

    mode: str
    n_modes: int

    def __post_init__(self):
        if not self.validate():
            raise ValueError(f"Invalid unknown layout: {self!r}")

    def validate(self) -> bool:
        if self.mode not in LAYOUT_MODES:
            logger.warning(f"Unknown layout mode: {self.mode}")
            return False
        if self.n_modes < 1:
            logger.warning(f"Layout needs at least one mode, got {self.n_modes}")
            return False
        return True

    @property
    def size(self) -> int:
        return 2 * self.n_modes

    @property
    def labels(self) -> List[str]:
        n = self.n_modes
        if self.mode == FIX_R1:
            return [gamma_label(k) for k in range(0, n + 1)] + [
                radius_label(k) for k in range(2, n + 1)
            ]
        return [gamma_label(k) for k in range(1, n + 1)] + [
            radius_label(k) for k in range(1, n + 1)
        ]

    def fixed_value(self, state: SheetState) -> float:
        return state.r1 if self.mode == FIX_R1 else state.b

    def flatten(self, state: SheetState) -> np.ndarray:
        gamma = state.gamma_coeffs(self.n_modes)
        r = state.r_coeffs(self.n_modes)
        if self.mode == FIX_R1:
            return np.concatenate([gamma, r[1:]])
        return np.concatenate([gamma[1:], r])

    def unflatten(self, x: np.ndarray, fixed: float, omega: float = 1.0) -> SheetState:
        """Inverse of flatten; ``fixed`` is r_1 (fix_r1) or b (fix_b)."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.size,):
            raise ValueError(f"Expected {self.size} unknowns, got shape {x.shape}")
        n = self.n_modes
        if self.mode == FIX_R1:
            b, g, r = x[0], x[1 : n + 1], np.concatenate([[fixed], x[n + 1 :]])
        else:
            b, g, r = fixed, x[:n], x[n:]
        return SheetState(b, FourierSeries(COSINE, g), FourierSeries(COSINE, r), omega)


@dataclass
class LMOptions:
    """Levenberg-Marquardt schedule and stopping rules."""

    tol: float = 1e-10
    max_iter: int = 200
    lambda0: float = 1e-3
    lambda_up: float = 10.0
    lambda_down: float = 10.0
    lambda_max: float = 1e16
    stagnation_tol: float = 1e-14
    residual_mode: str = "coefficients"
    jacobian_workers: int = 0
    fd_step: float = 1e-6

    def validate(self) -> bool:
        if self.tol <= 0 or self.max_iter < 1:
            logger.warning(f"Invalid stopping rule tol={self.tol}, max_iter={self.max_iter}")
            return False
        if self.lambda0 <= 0 or self.lambda_up <= 1 or self.lambda_down <= 1:
            logger.warning("Damping schedule needs lambda0 > 0 and factors > 1")
            return False
        if self.residual_mode not in ("coefficients", "nodes"):
            logger.warning(f"Unknown residual mode: {self.residual_mode}")
            return False
        if self.fd_step <= 0:
            logger.warning(f"Finite-difference step must be positive, got {self.fd_step}")
            return False
        return True

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "LMOptions":
        """Build from a config section; unknown keys are ignored."""
        field_names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in field_names})


@dataclass
class SolveReport:
    """Outcome of a solve; ``state`` is set when the unknowns describe a sheet."""

    x: np.ndarray
    residual_sup: float
    residual_l2: float
    iterations: int
    lambda_final: float
    converged: bool
    message: str = ""
    state: Optional[SheetState] = None
    residual_field: Optional[ResidualField] = None
    refined_residual_sup: Optional[float] = None
    history: List[float] = field(default_factory=list)

    @property
    def grid_change(self) -> Optional[float]:
        """Change of the grid residual sup-norm when N_theta is doubled."""
        if self.residual_field is None or self.refined_residual_sup is None:
            return None
        return abs(self.refined_residual_sup - self.residual_field.sup_norm)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "residual_sup": self.residual_sup,
            "residual_l2": self.residual_l2,
            "iterations": self.iterations,
            "lambda_final": self.lambda_final,
            "converged": self.converged,
            "message": self.message,
            "refined_residual_sup": self.refined_residual_sup,
        }

    def __str__(self) -> str:
        status = "converged" if self.converged else "not converged"
        return (
            f"{status} after {self.iterations} iterations "
            f"(sup={self.residual_sup:.3e}, lambda={self.lambda_final:.1e})"
        )
