"""
Command-line run configuration.
"""

from dataclasses import dataclass, fields, asdict
from typing import Dict, Any, List, Optional, Tuple
import argparse
import logging

from .branch import LINEAR_SEEDS, FILE_SEED_PREFIX

logger = logging.getLogger(__name__)

COMMANDS = ("verify", "solve", "continue", "export")
OUTPUT_FORMATS = ("csv", "json")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


@dataclass
class RunConfig:
    """One CLI invocation; unset numeric fields fall back to the config file."""

    command: str
    fix_r1: Optional[float] = None
    fix_b: Optional[float] = None
    step: Optional[float] = None
    steps: Optional[int] = None
    n_modes: Optional[int] = None
    n_theta: Optional[int] = None
    tol: Optional[float] = None
    seed: Optional[str] = None
    in_path: Optional[str] = None
    out_path: Optional[str] = None
    format: Optional[str] = None
    config_path: Optional[str] = None
    log_level: Optional[str] = None
    inject_fault: Optional[str] = None
    residual_mode: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        field_names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in field_names})

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        return cls.from_dict(vars(args))

    @property
    def fixed(self) -> Optional[Tuple[str, float]]:
        """The held parameter as ("r1" | "b", value), if one was given."""
        if self.fix_r1 is not None:
            return "r1", self.fix_r1
        if self.fix_b is not None:
            return "b", self.fix_b
        return None

    def validate(self) -> bool:
        if self.command not in COMMANDS:
            logger.warning(f"Unknown command '{self.command}', expected one of {COMMANDS}")
            return False
        if self.fix_r1 is not None and self.fix_b is not None:
            logger.warning("Only one of --fix-r1 and --fix-b may be given")
            return False
        if self.command == "solve" and self.fixed is None:
            logger.warning("solve needs --fix-r1 or --fix-b")
            return False
        if self.command == "export" and not self.in_path:
            logger.warning("export needs --in")
            return False
        if self.format is not None and self.format not in OUTPUT_FORMATS:
            logger.warning(f"Unknown output format '{self.format}'")
            return False
        if self.seed is not None and self.seed not in LINEAR_SEEDS and not (
            self.seed.startswith(FILE_SEED_PREFIX) and len(self.seed) > len(FILE_SEED_PREFIX)
        ):
            logger.warning(f"Seed must be one of {LINEAR_SEEDS} or {FILE_SEED_PREFIX}<path>")
            return False
        for name in ("n_modes", "n_theta", "steps"):
            value = getattr(self, name)
            if value is not None and value < 1:
                logger.warning(f"{name} must be positive, got {value}")
                return False
        if self.tol is not None and self.tol <= 0:
            logger.warning(f"Tolerance must be positive, got {self.tol}")
            return False
        if self.step is not None and self.step == 0:
            logger.warning("Continuation step must be non-zero")
            return False
        if self.log_level is not None and self.log_level.upper() not in LOG_LEVELS:
            logger.warning(f"Unknown log level '{self.log_level}'")
            return False
        return True

    def overrides(self) -> List[Tuple[str, str, Any]]:
        """(section, key, value) settings this run replaces in the loaded configuration."""
        grid_section = "verify" if self.command == "verify" else "discretization"
        pairs = [
            (grid_section, "n_modes", self.n_modes),
            (grid_section, "n_theta", self.n_theta),
            ("solver", "tol", self.tol),
            ("solver", "residual_mode", self.residual_mode),
            ("continuation", "step", self.step),
            ("continuation", "n_steps", self.steps),
            ("continuation", "seed", self.seed),
            ("output", "format", self.format),
            ("logging", "level", self.log_level.upper() if self.log_level else None),
        ]
        if self.command == "continue" and self.fixed is not None:
            name, value = self.fixed
            pairs += [("continuation", "parameter", name), ("continuation", "start", value)]
        return [(section, key, value) for section, key, value in pairs if value is not None]

    def __str__(self) -> str:
        given = {k: v for k, v in self.to_dict().items() if v is not None and k != "command"}
        return f"RunConfig({self.command}: {given})"
