"""
Fourier-series and collocation-grid models.

Only even wavenumbers 2n are representable: coefficient ``coeffs[n-1]``
multiplies cos(2n*theta) or sin(2n*theta).
"""

from dataclasses import dataclass, field
from typing import Dict, Any, Optional, Mapping
import logging
import math

import numpy as np

logger = logging.getLogger(__name__)

COSINE = "cosine"
SINE = "sine"
PARITIES = (COSINE, SINE)


@dataclass(frozen=True, eq=False)
class FourierSeries:
    """Even-mode cosine or sine series: constant + sum a_n trig(2n*theta)."""

    parity: str
    coeffs: np.ndarray = field(default_factory=lambda: np.zeros(0))
    constant: float = 0.0
    n_max: Optional[int] = None

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=float).reshape(-1)
        coeffs.flags.writeable = False
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "constant", float(self.constant))
        if not self.validate():
            raise ValueError(f"Invalid Fourier series: {self!r}")

    def validate(self) -> bool:
        """Validate parity, constant term and truncation."""
        if self.parity not in PARITIES:
            logger.warning(f"Unknown parity: {self.parity}")
            return False
        if self.parity == SINE and self.constant != 0.0:
            logger.warning("Sine series cannot carry a constant term")
            return False
        if self.n_max is not None and len(self.coeffs) > self.n_max:
            logger.warning(
                f"Series has {len(self.coeffs)} modes, more than n_max={self.n_max}"
            )
            return False
        if not np.all(np.isfinite(self.coeffs)) or not math.isfinite(self.constant):
            logger.warning("Series has non-finite coefficients")
            return False
        return True

    @classmethod
    def zeros(cls, parity: str, n_modes: int = 0) -> "FourierSeries":
        return cls(parity, np.zeros(n_modes))

    @classmethod
    def from_modes(
        cls, parity: str, modes: Mapping[int, float], constant: float = 0.0
    ) -> "FourierSeries":
        """Build a series from {n: a_n}, n being the index of cos/sin(2n*theta)."""
        n_modes = max(modes) if modes else 0
        coeffs = np.zeros(n_modes)
        for n, value in modes.items():
            if n < 1:
                raise ValueError(f"Mode index must be >= 1, got {n}")
            coeffs[n - 1] = value
        return cls(parity, coeffs, constant)

    @property
    def n_modes(self) -> int:
        return len(self.coeffs)

    @property
    def wavenumbers(self) -> np.ndarray:
        return 2 * np.arange(1, self.n_modes + 1)

    def mode(self, n: int) -> float:
        """Coefficient of trig(2n*theta); zero beyond the truncation."""
        if n < 1:
            raise ValueError(f"Mode index must be >= 1, got {n}")
        return float(self.coeffs[n - 1]) if n <= self.n_modes else 0.0

    def padded(self, n_modes: int) -> "FourierSeries":
        """Return the same series with coefficient array padded to n_modes."""
        if n_modes < self.n_modes:
            raise ValueError(f"Cannot pad {self.n_modes} modes down to {n_modes}")
        coeffs = np.zeros(n_modes)
        coeffs[: self.n_modes] = self.coeffs
        return FourierSeries(self.parity, coeffs, self.constant)

    def scaled(self, factor: float) -> "FourierSeries":
        return FourierSeries(self.parity, factor * self.coeffs, factor * self.constant)

    def __add__(self, other: "FourierSeries") -> "FourierSeries":
        if not isinstance(other, FourierSeries):
            return NotImplemented
        if other.parity != self.parity:
            raise ValueError(f"Cannot add {self.parity} and {other.parity} series")
        n_modes = max(self.n_modes, other.n_modes)
        a, b = self.padded(n_modes), other.padded(n_modes)
        return FourierSeries(self.parity, a.coeffs + b.coeffs, a.constant + b.constant)

    def __neg__(self) -> "FourierSeries":
        return self.scaled(-1.0)

    def __sub__(self, other: "FourierSeries") -> "FourierSeries":
        return self + (-other)

    def allclose(self, other: "FourierSeries", atol: float = 1e-12) -> bool:
        if other.parity != self.parity:
            return False
        n_modes = max(self.n_modes, other.n_modes)
        a, b = self.padded(n_modes), other.padded(n_modes)
        return bool(
            np.allclose(a.coeffs, b.coeffs, rtol=0.0, atol=atol)
            and abs(a.constant - b.constant) <= atol
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "parity": self.parity,
            "constant": self.constant,
            "coeffs": [float(c) for c in self.coeffs],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FourierSeries":
        return cls(
            parity=data["parity"],
            coeffs=np.asarray(data.get("coeffs", []), dtype=float),
            constant=data.get("constant", 0.0),
        )

    def __repr__(self) -> str:
        return (
            f"FourierSeries(parity='{self.parity}', constant={self.constant}, "
            f"n_modes={self.n_modes})"
        )


@dataclass(frozen=True)
class Grid:
    """Uniform collocation grid theta_j = j*pi/n_points.

    The half-period grid (j = 1..n_points) covers (0, pi], a full period for the
    pi-periodic even-mode class. The full-period grid (j = 1..2*n_points) is used
    for integrals in eta whose kernel is only 2*pi-periodic.
    """

    n_points: int
    full_period: bool = False

    def __post_init__(self):
        if not isinstance(self.n_points, (int, np.integer)) or self.n_points < 1:
            raise ValueError(f"Grid needs a positive number of points, got {self.n_points}")

    @property
    def spacing(self) -> float:
        return math.pi / self.n_points

    @property
    def period(self) -> float:
        return 2 * math.pi if self.full_period else math.pi

    @property
    def size(self) -> int:
        return 2 * self.n_points if self.full_period else self.n_points

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(1, self.size + 1) * self.spacing

    def full(self) -> "Grid":
        return Grid(self.n_points, full_period=True)

    def refined(self, factor: int = 2) -> "Grid":
        return Grid(self.n_points * factor, self.full_period)
