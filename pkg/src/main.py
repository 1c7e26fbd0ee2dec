#!/usr/bin/env python3
"""
VortexSheet - rotating vortex-sheet solver
Command-line entry point: verify, solve, continue, export
"""

import argparse
import dataclasses
import logging
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .check_manager import CheckManager
from .config.settings import ConfigManager, default_config_dir
from .models.branch import BranchPoint
from .models.fourier import Grid
from .models.run_config import RunConfig, COMMANDS, OUTPUT_FORMATS
from .numerics.continuation import continue_branch, detect_fold, branch_slope, initial_guess
from .numerics.errors import ConfigError, ContinuationError, ConvergenceError, GeometryError
from .numerics.functional import RESIDUAL_MODES
from .numerics.lm_solver import solve_sheet
from .utils.persistence import (
    BranchWriter,
    export_branch,
    export_solution,
    load_solution,
    read_branch,
    record_from_solve,
    save_diagnostics,
    save_solution,
)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_FILE_NAME = "vortexsheet.log"

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_NOT_CONVERGED = 2
EXIT_IO_ERROR = 3

logger = logging.getLogger(__name__)

_handlers: List[logging.Handler] = []


def setup_logging(level: str = "INFO", log_file: Optional[Path] = None) -> None:
    """Configure the root logger; calling again replaces the handlers added before."""
    root = logging.getLogger()
    for handler in _handlers:
        root.removeHandler(handler)
        handler.close()
    _handlers.clear()

    handlers: List[logging.Handler] = [logging.StreamHandler()]
    if log_file is not None:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file, encoding="utf-8"))
    formatter = logging.Formatter(LOG_FORMAT)
    for handler in handlers:
        handler.setFormatter(formatter)
        root.addHandler(handler)
        _handlers.append(handler)
    root.setLevel(level.upper())


class VortexSheetApp:
    def __init__(self, run_config: RunConfig):
        self.run_config = run_config
        self.config_manager = ConfigManager(
            config_file=Path(run_config.config_path) if run_config.config_path else None
        )
        for section, key, value in run_config.overrides():
            self.config_manager.update_setting(section, key, value)
        self.config_manager.validate()

        self.output = self.config_manager.get_section("output")
        logger.info(f"VortexSheet {__version__} initialized: {run_config}")

    @property
    def output_format(self) -> str:
        return self.output.get("format", "csv")

    def _grid_and_modes(self):
        discretization = self.config_manager.get_section("discretization")
        return Grid(int(discretization["n_theta"])), int(discretization["n_modes"])

    def cmd_verify(self) -> int:
        """Run every check and print the comparison table."""
        manager = CheckManager(
            self.config_manager.get_section("verify"), fault=self.run_config.inject_fault
        )
        results = manager.run_all()
        print(manager.format_report(results))
        if manager.context.relaxed:
            print(
                f"N_theta={manager.context.grid.n_points} is below 1024: identity checks use "
                f"the relaxed tolerance {manager.context.identity_tol:.0e}; "
                "trapezoid errors decay spectrally as N_theta grows"
            )
        if manager.all_passed(results):
            logger.info("All verification checks passed")
            return EXIT_OK
        failed = [r.name for r in results if not r.passed]
        logger.error(f"Verification failed: {', '.join(failed)}")
        return EXIT_VERIFY_FAILED

    def _solution_path(self, key: str, value: float) -> Path:
        if self.run_config.out_path:
            return Path(self.run_config.out_path)
        return Path(self.output.get("solution_dir", "solutions")) / f"solve_{key}_{value:g}.json"

    def cmd_solve(self) -> int:
        """Solve at one fixed r1 or b and write the solution record."""
        key, value = self.run_config.fixed
        grid, n_modes = self._grid_and_modes()
        opts = self.config_manager.lm_options()
        seed_config = dataclasses.replace(
            self.config_manager.continuation_config(), parameter=key, start=value
        )
        try:
            guess = initial_guess(seed_config)
        except ContinuationError as e:
            raise ConfigError(str(e)) from e
        out_path = self._solution_path(key, value)

        try:
            report = solve_sheet({key: value}, guess, grid, opts, n_modes)
        except GeometryError as e:
            diagnostics = {"fixed": {key: value}, "message": str(e), "node": e.node}
            if e.last_iterate is not None:
                diagnostics["last_iterate"] = e.last_iterate.to_dict()
            save_diagnostics(out_path.with_suffix(".diagnostics.json"), diagnostics)
            raise

        field = report.residual_field
        record = record_from_solve(
            report.state, field, grid, n_modes, report.iterations, report.lambda_final
        )
        save_solution(out_path, record)
        print(
            f"{key}={value:g}: b={report.state.b:.12g}, r1={report.state.r1:.12g}, "
            f"residual sup={field.sup_norm:.3e}, l2={field.l2_norm:.3e}, "
            f"sup at N_theta={2 * grid.n_points}: {report.refined_residual_sup:.3e}, "
            f"iterations={report.iterations} -> {out_path}"
        )
        if not report.converged:
            raise ConvergenceError(f"Solve at {key}={value:g} {report}; last iterate written to {out_path}")
        return EXIT_OK

    def cmd_continue(self) -> int:
        """Trace a branch, appending every accepted point to the branch file."""
        config = self.config_manager.continuation_config()
        opts = self.config_manager.lm_options()
        start_index = 0
        branch_file = Path(self.run_config.out_path or self.output.get("branch_file", "branch.csv"))

        seed_path = Path(config.seed_path) if config.seed_path else None
        if seed_path is not None and seed_path.suffix.lower() == ".csv":
            rows = read_branch(seed_path)
            if rows:
                config, start_index = self._resume_config(config, rows[-1])
                if not self.run_config.out_path:
                    branch_file = seed_path
                logger.info(
                    f"Resuming {seed_path} after step {start_index - 1} in {config.parameter} "
                    f"from {config.start:.10g}"
                )

        writer = BranchWriter(
            branch_file,
            branch_file.parent / self.output.get("solution_dir", "solutions"),
            Grid(config.n_theta),
            config.n_modes,
            config.parameter,
        )

        def on_point(point: BranchPoint) -> None:
            writer.append(point)

        result = continue_branch(config, opts, on_point=on_point, start_index=start_index)
        print(f"{len(result)} points written to {branch_file}: {result.message}")
        self._report_branch(result.points)
        if not result.completed:
            print(f"Branch truncated: {result.message}")
            return EXIT_NOT_CONVERGED
        return EXIT_OK

    def _resume_config(self, config, last):
        """Continue one step past the last stored row.

        The parameter is the one given with --fix-*, else the one the row was
        continued in; a given value is superseded by the row.
        """
        if self.run_config.fixed is not None:
            parameter, requested = self.run_config.fixed
        else:
            parameter, requested = last["parameter"] or config.parameter, None
        start = last[parameter] + config.step
        if requested is not None and requested != start:
            logger.warning(
                f"Ignoring {parameter}={requested:g}: resuming continues from the last row "
                f"at {parameter}={start:.10g}"
            )
        return dataclasses.replace(config, parameter=parameter, start=start), last["step_index"] + 1

    @staticmethod
    def _report_branch(points: List[BranchPoint]) -> None:
        if len(points) >= 3:
            fold = detect_fold(points)
            if fold is not None:
                print(f"Fold at r1={fold.r1:.6g}, b={fold.b:.6g}")
        try:
            print(f"Slope db/dr1 near r1=0: {branch_slope(points):.6g}")
        except ValueError as e:
            logger.debug(f"No slope estimate: {e}")

    def cmd_export(self) -> int:
        """Plot-ready tables from a branch CSV or a solution JSON."""
        in_path = Path(self.run_config.in_path)
        if not in_path.exists():
            raise FileNotFoundError(f"Input file not found: {in_path}")
        fmt = self.output_format
        suffix = in_path.suffix.lower()
        if suffix == ".csv":
            out_path = Path(self.run_config.out_path or in_path.with_name(f"{in_path.stem}_diagram.{fmt}"))
            written = export_branch(read_branch(in_path), out_path, fmt)
        elif suffix == ".json":
            out_path = Path(self.run_config.out_path or in_path.with_name(f"{in_path.stem}_curve.{fmt}"))
            written = [export_solution(load_solution(in_path), out_path, fmt)]
        else:
            raise ConfigError(f"Cannot export '{in_path}': expected a .csv branch or .json solution")
        for path in written:
            print(f"Wrote {path}")
        return EXIT_OK

    def run(self) -> int:
        """Dispatch the command and map its outcome to an exit code."""
        commands = {
            "verify": self.cmd_verify,
            "solve": self.cmd_solve,
            "continue": self.cmd_continue,
            "export": self.cmd_export,
        }
        try:
            return commands[self.run_config.command]()
        except (GeometryError, ContinuationError, ConvergenceError) as e:
            logger.error(f"{self.run_config.command} did not converge: {e}")
            return EXIT_NOT_CONVERGED
        except (ConfigError, OSError, ValueError) as e:
            logger.error(f"{self.run_config.command} failed: {e}")
            return EXIT_IO_ERROR


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vortexsheet", description="Rotating vortex-sheet equilibria: solve, continue, verify"
    )
    parser.add_argument("--command", required=True, choices=COMMANDS)
    parser.add_argument("--fix-r1", dest="fix_r1", type=float)
    parser.add_argument("--fix-b", dest="fix_b", type=float)
    parser.add_argument("--step", type=float)
    parser.add_argument("--steps", type=int)
    parser.add_argument("--N", dest="n_modes", type=int)
    parser.add_argument("--Ntheta", dest="n_theta", type=int)
    parser.add_argument("--tol", type=float)
    parser.add_argument("--seed", help="linear+, linear- or file:<path>")
    parser.add_argument("--in", dest="in_path")
    parser.add_argument("--out", dest="out_path")
    parser.add_argument("--format", choices=OUTPUT_FORMATS)
    parser.add_argument("--config", dest="config_path")
    parser.add_argument("--log-level", dest="log_level")
    parser.add_argument("--inject-fault", dest="inject_fault")
    parser.add_argument("--residual-mode", dest="residual_mode", choices=RESIDUAL_MODES)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_IO_ERROR

    run_config = RunConfig.from_args(args)
    setup_logging(run_config.log_level or "INFO")
    if not run_config.validate():
        logger.error(f"Invalid arguments: {run_config}")
        return EXIT_IO_ERROR

    try:
        app = VortexSheetApp(run_config)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_IO_ERROR

    log_settings = app.config_manager.get_section("logging")
    log_file = None
    if log_settings.get("log_to_file", False):
        log_file = default_config_dir() / LOG_FILE_NAME
    try:
        setup_logging(log_settings.get("level", "INFO"), log_file)
    except OSError as e:
        setup_logging(log_settings.get("level", "INFO"))
        logger.warning(f"Logging to {log_file} disabled: {e}")

    try:
        return app.run()
    except Exception as e:
        logger.exception(f"Fatal error: {e}")
        return EXIT_VERIFY_FAILED


if __name__ == "__main__":
    sys.exit(main())
