"""
Models package for VortexSheet.
"""

from .fourier import FourierSeries, Grid, COSINE, SINE
from .sheet import SheetState, ResidualField, Direction
from .operators import ModeMatrix, JacobianMatrix
from .solver import UnknownLayout, LMOptions, SolveReport
from .branch import ContinuationConfig, BranchPoint, ContinuationResult
from .run_config import RunConfig

__all__ = [
    "FourierSeries",
    "Grid",
    "COSINE",
    "SINE",
    "SheetState",
    "ResidualField",
    "Direction",
    "ModeMatrix",
    "JacobianMatrix",
    "UnknownLayout",
    "LMOptions",
    "SolveReport",
    "ContinuationConfig",
    "BranchPoint",
    "ContinuationResult",
    "RunConfig",
]
