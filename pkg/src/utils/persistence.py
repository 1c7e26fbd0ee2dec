"""
Solution records (JSON), append-only branch files (CSV) and plot-ready
export tables. Floats are written with repr, which round-trips exactly.
"""

import csv
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Any, List, Optional, Sequence, Union
import logging

import numpy as np

from ..models.branch import BranchPoint
from ..models.fourier import Grid
from ..models.sheet import SheetState, ResidualField
from ..numerics.functional import assemble_residual
from ..numerics.spectral import eval_series

logger = logging.getLogger(__name__)

SOLUTION_VERSION = 1
BRANCH_COLUMNS = ["step_index", "r1", "b", "residual_sup", "solution_path", "parameter"]
BIFURCATION_COLUMNS = ["r1", "b", "residual_sup"]
LINEAR_THEORY_COLUMNS = ["r1", "b_upper", "b_lower"]
SOLUTION_COLUMNS = ["theta", "gamma", "x", "y"]
FORMATS = ("csv", "json")

PathLike = Union[str, Path]


def _fmt(value: float) -> str:
    return repr(float(value))


@dataclass
class SolutionRecord:
    """A stored solution with the discretization it was computed on."""

    state: SheetState
    n_modes: int
    n_theta: int
    residual_sup: float
    residual_l2: float
    iterations: int = 0
    lambda_final: float = 0.0
    version: int = SOLUTION_VERSION

    def to_dict(self) -> Dict[str, Any]:
        return {
            "version": self.version,
            "b": self.state.b,
            "omega": self.state.omega,
            "N": self.n_modes,
            "N_theta": self.n_theta,
            "gamma_coeffs": [float(c) for c in self.state.gamma_coeffs(self.n_modes)],
            "r_coeffs": [float(c) for c in self.state.r_coeffs(self.n_modes)],
            "residual_sup": self.residual_sup,
            "residual_l2": self.residual_l2,
            "solver": {"iterations": self.iterations, "lambda_final": self.lambda_final},
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SolutionRecord":
        gamma = list(data["gamma_coeffs"])
        if gamma[0] != data["b"]:
            raise ValueError(f"gamma_coeffs[0]={gamma[0]} disagrees with b={data['b']}")
        state = SheetState.from_coefficients(gamma, data["r_coeffs"], data.get("omega", 1.0))
        solver = data.get("solver", {})
        return cls(
            state=state,
            n_modes=int(data["N"]),
            n_theta=int(data["N_theta"]),
            residual_sup=float(data["residual_sup"]),
            residual_l2=float(data["residual_l2"]),
            iterations=int(solver.get("iterations", 0)),
            lambda_final=float(solver.get("lambda_final", 0.0)),
            version=int(data.get("version", SOLUTION_VERSION)),
        )


def save_solution(path: PathLike, record: SolutionRecord) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(record.to_dict(), f, indent=2)
    logger.debug(f"Saved solution to {path}")
    return path


def record_from_solve(
    state: SheetState,
    field: ResidualField,
    grid: Grid,
    n_modes: int,
    iterations: int = 0,
    lambda_final: float = 0.0,
) -> SolutionRecord:
    return SolutionRecord(
        state=state,
        n_modes=n_modes,
        n_theta=grid.n_points,
        residual_sup=field.sup_norm,
        residual_l2=field.l2_norm,
        iterations=iterations,
        lambda_final=lambda_final,
    )


def load_solution(path: PathLike) -> SolutionRecord:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Solution file not found: {path}")
    try:
        with open(path, "r") as f:
            data = json.load(f)
        return SolutionRecord.from_dict(data)
    except (json.JSONDecodeError, KeyError, TypeError) as e:
        raise ValueError(f"Malformed solution file {path}: {e}") from e


class BranchWriter:
    """Appends branch points to a CSV file, one solution JSON per point."""

    def __init__(
        self,
        branch_file: PathLike,
        solution_dir: Optional[PathLike],
        grid: Grid,
        n_modes: int,
        parameter: str = "r1",
    ):
        self.branch_file = Path(branch_file)
        self.parameter = parameter
        self.solution_dir = Path(solution_dir) if solution_dir else None
        self.grid = grid
        self.n_modes = n_modes
        self.branch_file.parent.mkdir(parents=True, exist_ok=True)
        if not self.branch_file.exists() or self.branch_file.stat().st_size == 0:
            with open(self.branch_file, "w", newline="") as f:
                csv.writer(f).writerow(BRANCH_COLUMNS)

    def append(self, point: BranchPoint, field: Optional[ResidualField] = None) -> None:
        solution_path = ""
        if self.solution_dir is not None:
            target = self.solution_dir / f"point_{point.step_index:05d}.json"
            if field is None:
                field = assemble_residual(point.state, self.grid)
            save_solution(
                target,
                record_from_solve(point.state, field, self.grid, self.n_modes, point.iterations),
            )
            solution_path = os.path.relpath(target, self.branch_file.parent)
            point.solution_path = solution_path
        with open(self.branch_file, "a", newline="") as f:
            csv.writer(f).writerow(
                [
                    point.step_index,
                    _fmt(point.r1),
                    _fmt(point.b),
                    _fmt(point.residual_sup),
                    solution_path,
                    self.parameter,
                ]
            )


def read_branch(path: PathLike) -> List[Dict[str, Any]]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Branch file not found: {path}")
    rows = []
    with open(path, "r", newline="") as f:
        for row in csv.DictReader(f):
            rows.append(
                {
                    "step_index": int(row["step_index"]),
                    "r1": float(row["r1"]),
                    "b": float(row["b"]),
                    "residual_sup": float(row["residual_sup"]),
                    "solution_path": row.get("solution_path") or "",
                    "parameter": row.get("parameter") or "",
                }
            )
    return rows


def load_seed(path: PathLike) -> SheetState:
    """Seed state from a solution JSON or from the last row of a branch CSV."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        return load_solution(path).state
    rows = read_branch(path)
    if not rows:
        raise ValueError(f"Branch file {path} has no points to resume from")
    last = rows[-1]
    if not last["solution_path"]:
        raise ValueError(f"Last point of {path} has no stored solution")
    return load_solution(path.parent / last["solution_path"]).state


def _write_table(path: Path, columns: Sequence[str], rows: Sequence[Sequence[float]], fmt: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        table = {name: [float(row[i]) for row in rows] for i, name in enumerate(columns)}
        with open(path, "w") as f:
            json.dump(table, f, indent=2)
    else:
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
    return path


def _check_format(fmt: str) -> None:
    if fmt not in FORMATS:
        raise ValueError(f"Unknown output format '{fmt}', expected one of {FORMATS}")


def export_branch(rows: Sequence[Dict[str, Any]], out_path: PathLike, fmt: str = "csv") -> List[Path]:
    """Bifurcation table (r1, b, residual_sup) plus the linear-theory lines b = 2 +/- 2 r1."""
    _check_format(fmt)
    out_path = Path(out_path)
    diagram = [(row["r1"], row["b"], row["residual_sup"]) for row in rows]
    linear = [(row["r1"], 2.0 + 2.0 * row["r1"], 2.0 - 2.0 * row["r1"]) for row in rows]
    linear_path = out_path.with_name(f"{out_path.stem}_linear{out_path.suffix or '.' + fmt}")
    written = [
        _write_table(out_path, BIFURCATION_COLUMNS, diagram, fmt),
        _write_table(linear_path, LINEAR_THEORY_COLUMNS, linear, fmt),
    ]
    logger.info(f"Exported {len(rows)} branch points to {written[0]}")
    return written


def export_solution(record: SolutionRecord, out_path: PathLike, fmt: str = "csv") -> Path:
    """Sample gamma(theta) and z(theta) = (1 + r)(cos, sin) over the full period."""
    _check_format(fmt)
    grid = Grid(record.n_theta, full_period=True)
    theta = grid.nodes
    gamma = eval_series(record.state.gamma, grid)
    radius = 1.0 + eval_series(record.state.r, grid)
    rows = np.column_stack([theta, gamma, radius * np.cos(theta), radius * np.sin(theta)])
    path = _write_table(Path(out_path), SOLUTION_COLUMNS, rows, fmt)
    logger.info(f"Exported {len(rows)} solution samples to {path}")
    return path


def save_diagnostics(path: PathLike, data: Dict[str, Any]) -> Path:
    """Write whatever a failed solve left behind, for inspection or reseeding."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(data, f, indent=2)
    logger.info(f"Wrote diagnostics to {path}")
    return path
