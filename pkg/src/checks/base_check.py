"""
Base check class for the verification suite.
All checks should inherit from this base class.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional
import logging

from ..models.fourier import Grid

logger = logging.getLogger(__name__)

KNOWN_FAULTS = ("mode_matrix_sign",)


@dataclass
class CheckResult:
    """One compared quantity: expected versus computed."""

    name: str
    expected: float
    computed: float
    error: float
    tolerance: float
    passed: bool = False
    note: str = ""

    @classmethod
    def compare(
        cls,
        name: str,
        expected: float,
        computed: float,
        tolerance: float,
        error: Optional[float] = None,
        note: str = "",
    ) -> "CheckResult":
        """Absolute comparison unless an error measure is supplied."""
        if error is None:
            error = abs(float(computed) - float(expected))
        return cls(name, float(expected), float(computed), float(error), tolerance, error <= tolerance, note)


@dataclass
class VerifyContext:
    """Settings shared by all checks in one verification run."""

    settings: Dict[str, Any]
    fault: Optional[str] = None
    cache: Dict[str, Any] = field(default_factory=dict)

    @property
    def grid(self) -> Grid:
        return Grid(int(self.settings.get("n_theta", 1024)))

    @property
    def n_modes(self) -> int:
        return int(self.settings.get("n_modes", 8))

    @property
    def relaxed(self) -> bool:
        """Coarse grids do not reach the strict identity tolerance."""
        return self.grid.n_points < 1024

    @property
    def identity_tol(self) -> float:
        key = "relaxed_identity_tol" if self.relaxed else "identity_tol"
        return float(self.settings.get(key, 1e-8 if self.relaxed else 1e-10))

    def memo(self, key: str, compute: Callable[[], Any]) -> Any:
        if key not in self.cache:
            self.cache[key] = compute()
        return self.cache[key]


class BaseCheck(ABC):
    """Base class for all checks."""

    @property
    @abstractmethod
    def name(self) -> str:
        """Short identifier shown in the report."""
        pass

    @property
    @abstractmethod
    def description(self) -> str:
        """What this check compares."""
        pass

    @abstractmethod
    def run(self, context: VerifyContext) -> List[CheckResult]:
        """Run the check and return one result per compared quantity."""
        pass
