"""
Branch models: continuation settings, converged branch points and the
outcome of a continuation run.
"""

from dataclasses import dataclass, field, fields, asdict
from typing import Dict, Any, List, Optional
import logging

from .sheet import SheetState

logger = logging.getLogger(__name__)

PARAMETERS = ("b", "r1")
LINEAR_SEEDS = ("linear+", "linear-")
FILE_SEED_PREFIX = "file:"


@dataclass
class ContinuationConfig:
    """Natural-parameter continuation in b or r1."""

    parameter: str = "r1"
    start: float = 0.125
    step: float = 0.001
    n_steps: int = 825
    seed: str = "linear+"
    n_modes: int = 160
    n_theta: int = 1024
    acceptance_tol: float = 1e-9
    grid_stability_tol: float = 1e-9
    max_coefficient_jump: float = 50.0
    trust_radius: float = 0.3

    def validate(self) -> bool:
        if self.parameter not in PARAMETERS:
            logger.warning(f"Continuation parameter must be one of {PARAMETERS}")
            return False
        if self.step == 0:
            logger.warning("Continuation step must be non-zero")
            return False
        if self.acceptance_tol <= 0 or self.grid_stability_tol <= 0:
            logger.warning("Acceptance and grid-stability tolerances must be positive")
            return False
        if self.n_steps < 1:
            logger.warning(f"Need at least one continuation step, got {self.n_steps}")
            return False
        if self.n_theta < 4 * self.n_modes:
            logger.warning(
                f"N_theta={self.n_theta} is below 4*N={4 * self.n_modes}; modes would alias"
            )
            return False
        if self.seed not in LINEAR_SEEDS and not self.seed.startswith(FILE_SEED_PREFIX):
            logger.warning(f"Unknown seed '{self.seed}'")
            return False
        return True

    @property
    def seed_sign(self) -> int:
        return -1 if self.seed == "linear-" else 1

    @property
    def seed_path(self) -> Optional[str]:
        if self.seed.startswith(FILE_SEED_PREFIX):
            return self.seed[len(FILE_SEED_PREFIX):]
        return None

    def parameter_at(self, k: int) -> float:
        return self.start + k * self.step

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ContinuationConfig":
        field_names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in field_names})


@dataclass
class BranchPoint:
    """A converged solution on a branch."""

    step_index: int
    r1: float
    b: float
    state: SheetState
    residual_sup: float
    iterations: int = 0
    solution_path: Optional[str] = None
    refined_residual_sup: Optional[float] = None

    def __repr__(self) -> str:
        return (
            f"BranchPoint(step_index={self.step_index}, r1={self.r1:.6g}, "
            f"b={self.b:.10g}, residual_sup={self.residual_sup:.2e})"
        )


@dataclass
class ContinuationResult:
    """Accepted points of a run; ``completed`` is False when the run stopped early."""

    points: List[BranchPoint] = field(default_factory=list)
    completed: bool = True
    message: str = ""

    def __len__(self) -> int:
        return len(self.points)
