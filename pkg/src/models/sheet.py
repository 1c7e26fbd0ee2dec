"""
Sheet state models: the unknowns (b, g, r), the sampled residual, and
perturbation directions used by the derivative oracles.
"""

from dataclasses import dataclass, field
from typing import Dict, Any, NamedTuple, Optional, Sequence
import logging

import numpy as np

from .fourier import FourierSeries, COSINE

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SheetState:
    """Candidate rotating sheet: gamma = b + g, boundary (1 + r)(cos, sin)."""

    b: float
    g: FourierSeries = field(default_factory=lambda: FourierSeries.zeros(COSINE))
    r: FourierSeries = field(default_factory=lambda: FourierSeries.zeros(COSINE))
    omega: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "omega", float(self.omega))
        if not self.validate():
            raise ValueError(f"Invalid sheet state: {self!r}")

    def validate(self) -> bool:
        for name, series in (("g", self.g), ("r", self.r)):
            if series.parity != COSINE:
                logger.warning(f"{name} must be a cosine series")
                return False
            if series.constant != 0.0:
                logger.warning(f"{name} must have zero mean")
                return False
        return True

    @classmethod
    def trivial(cls, b: float, n_modes: int = 0, omega: float = 1.0) -> "SheetState":
        return cls(
            b,
            FourierSeries.zeros(COSINE, n_modes),
            FourierSeries.zeros(COSINE, n_modes),
            omega,
        )

    @classmethod
    def from_coefficients(
        cls,
        gamma_coeffs: Sequence[float],
        r_coeffs: Sequence[float],
        omega: float = 1.0,
    ) -> "SheetState":
        """Build from [gamma_0 .. gamma_N] and [r_1 .. r_N]."""
        gamma_coeffs = np.asarray(gamma_coeffs, dtype=float)
        return cls(
            b=gamma_coeffs[0],
            g=FourierSeries(COSINE, gamma_coeffs[1:]),
            r=FourierSeries(COSINE, np.asarray(r_coeffs, dtype=float)),
            omega=omega,
        )

    @property
    def n_modes(self) -> int:
        return max(self.g.n_modes, self.r.n_modes)

    @property
    def gamma(self) -> FourierSeries:
        return FourierSeries(COSINE, self.g.coeffs, self.b)

    @property
    def r1(self) -> float:
        return self.r.mode(1)

    def gamma_coeffs(self, n_modes: Optional[int] = None) -> np.ndarray:
        n_modes = self.n_modes if n_modes is None else n_modes
        return np.concatenate([[self.b], self.g.padded(n_modes).coeffs])

    def r_coeffs(self, n_modes: Optional[int] = None) -> np.ndarray:
        n_modes = self.n_modes if n_modes is None else n_modes
        return self.r.padded(n_modes).coeffs.copy()

    def coefficient_vector(self, n_modes: Optional[int] = None) -> np.ndarray:
        return np.concatenate([self.gamma_coeffs(n_modes), self.r_coeffs(n_modes)])

    def padded(self, n_modes: int) -> "SheetState":
        return SheetState(self.b, self.g.padded(n_modes), self.r.padded(n_modes), self.omega)

    def resized(self, n_modes: int) -> "SheetState":
        """Pad with zeros or truncate to exactly n_modes coefficients."""
        return SheetState.from_coefficients(
            self.gamma_coeffs(max(n_modes, self.n_modes))[: n_modes + 1],
            self.r_coeffs(max(n_modes, self.n_modes))[:n_modes],
            self.omega,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "b": self.b,
            "omega": self.omega,
            "gamma_coeffs": [float(c) for c in self.gamma_coeffs()],
            "r_coeffs": [float(c) for c in self.r_coeffs()],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SheetState":
        return cls.from_coefficients(
            data["gamma_coeffs"], data["r_coeffs"], data.get("omega", 1.0)
        )

    def __repr__(self) -> str:
        return (
            f"SheetState(b={self.b:.10g}, r1={self.r1:.10g}, "
            f"n_modes={self.n_modes}, omega={self.omega})"
        )


@dataclass(frozen=True, eq=False)
class ResidualField:
    """Samples of (F1, F2) on the collocation grid, F2 already mean-free."""

    f1: np.ndarray
    f2: np.ndarray
    sup_norm: float
    l2_norm: float

    @classmethod
    def from_samples(cls, f1: np.ndarray, f2: np.ndarray) -> "ResidualField":
        f1 = np.asarray(f1, dtype=float)
        f2 = np.asarray(f2, dtype=float)
        sup_norm = float(max(np.max(np.abs(f1)), np.max(np.abs(f2))))
        l2_norm = float(np.sqrt(np.mean(f1**2) + np.mean(f2**2)))
        return cls(f1, f2, sup_norm, l2_norm)


class Direction(NamedTuple):
    """Perturbation direction (g, r) with an optional component along b."""

    g: FourierSeries
    r: FourierSeries
    db: float = 0.0

    @classmethod
    def zero(cls) -> "Direction":
        return cls(FourierSeries.zeros(COSINE), FourierSeries.zeros(COSINE))

    @classmethod
    def along_b(cls) -> "Direction":
        return cls(FourierSeries.zeros(COSINE), FourierSeries.zeros(COSINE), 1.0)

    def scaled(self, factor: float) -> "Direction":
        return Direction(self.g.scaled(factor), self.r.scaled(factor), factor * self.db)

    def plus(self, other: "Direction") -> "Direction":
        return Direction(self.g + other.g, self.r + other.r, self.db + other.db)

    def applied_to(self, base_b: float, omega: float = 1.0) -> SheetState:
        """The state (base_b + db, g, r): the trivial state shifted along this direction."""
        return SheetState(base_b + self.db, self.g, self.r, omega)
