"""
Linear-operator models: the 2x2 mode blocks of the linearization at the
trivial state and the labelled finite-difference Jacobian.
"""

from dataclasses import dataclass, field
from typing import Dict, Any, List, Tuple
import logging

import numpy as np

logger = logging.getLogger(__name__)


def gamma_label(n: int) -> str:
    return f"gamma[{n}]"


def radius_label(n: int) -> str:
    return f"r[{n}]"


def f1_label(n: int) -> str:
    return f"F1.sin[{n}]"


def f2_label(n: int) -> str:
    return f"F2.cos[{n}]"


@dataclass(frozen=True, eq=False)
class ModeMatrix:
    """Block M_n acting on the (strength, radius) coefficient pair of cos(2n theta)."""

    n: int
    b: float
    omega: float
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        if entries.shape != (2, 2):
            raise ValueError(f"Mode matrix must be 2x2, got shape {entries.shape}")
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)

    def apply(self, a_n: float, b_n: float) -> Tuple[float, float]:
        out = self.entries @ np.array([a_n, b_n])
        return float(out[0]), float(out[1])

    @property
    def singular_values(self) -> np.ndarray:
        return np.linalg.svd(self.entries, compute_uv=False)

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.entries))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "b": self.b,
            "omega": self.omega,
            "entries": self.entries.tolist(),
        }

    def __repr__(self) -> str:
        return f"ModeMatrix(n={self.n}, b={self.b}, entries={self.entries.tolist()})"


@dataclass(frozen=True, eq=False)
class JacobianMatrix:
    """Dense Jacobian with row (residual) and column (unknown) labels."""

    values: np.ndarray
    row_labels: List[str] = field(default_factory=list)
    column_labels: List[str] = field(default_factory=list)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if not self.validate():
            raise ValueError(f"Inconsistent Jacobian labels for shape {values.shape}")

    def validate(self) -> bool:
        rows, cols = self.values.shape
        if self.row_labels and len(self.row_labels) != rows:
            logger.warning(f"{len(self.row_labels)} row labels for {rows} rows")
            return False
        if self.column_labels and len(self.column_labels) != cols:
            logger.warning(f"{len(self.column_labels)} column labels for {cols} columns")
            return False
        return True

    @property
    def shape(self) -> Tuple[int, int]:
        return self.values.shape

    def mode_block(self, n: int) -> np.ndarray:
        """2x2 block rows (F1.sin[n], F2.cos[n]) x columns (gamma[n], r[n])."""
        try:
            rows = [self.row_labels.index(f1_label(n)), self.row_labels.index(f2_label(n))]
            cols = [
                self.column_labels.index(gamma_label(n)),
                self.column_labels.index(radius_label(n)),
            ]
        except ValueError:
            raise ValueError(f"Mode {n} is not fully present in this Jacobian")
        return self.values[np.ix_(rows, cols)].copy()

    def off_block_max(self) -> float:
        """Largest |entry| coupling different Fourier modes (zero at trivial states)."""
        worst = 0.0
        for i, row in enumerate(self.row_labels):
            row_mode = row[row.index("[") + 1 : -1]
            for j, col in enumerate(self.column_labels):
                if col[col.index("[") + 1 : -1] != row_mode:
                    worst = max(worst, abs(self.values[i, j]))
        return worst
