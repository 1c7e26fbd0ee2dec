import logging
from typing import Any, Dict, List, Optional

from .checks import check_registry
from .checks.base_check import CheckResult, VerifyContext, KNOWN_FAULTS
from .numerics.errors import ConfigError

logger = logging.getLogger(__name__)


class CheckManager:
    """Runs the verification checks and renders their report."""

    def __init__(self, settings: Dict[str, Any], fault: Optional[str] = None):
        if fault is not None and fault not in KNOWN_FAULTS:
            raise ConfigError(f"Unknown fault '{fault}', expected one of {KNOWN_FAULTS}")
        self.context = VerifyContext(dict(settings), fault)

    def run_all(self, only: Optional[List[str]] = None) -> List[CheckResult]:
        names = only or check_registry.get_check_names()
        results: List[CheckResult] = []
        for name in names:
            check = check_registry.get_check(name)
            if check is not None:
                logger.info(f"Running check {name}: {check.description}")
            check_results = check_registry.run_check(name, self.context)
            failed = [r.name for r in check_results if not r.passed]
            if failed:
                logger.error(f"Check {name} failed: {', '.join(failed)}")
            results.extend(check_results)
        return results

    @staticmethod
    def all_passed(results: List[CheckResult]) -> bool:
        return bool(results) and all(r.passed for r in results)

    @staticmethod
    def format_report(results: List[CheckResult]) -> str:
        header = f"{'name':<36} {'expected':>14} {'computed':>14} {'error':>10} {'tol':>8}  pass"
        lines = [header, "-" * len(header)]
        for r in results:
            line = (
                f"{r.name:<36} {r.expected:>14.8g} {r.computed:>14.8g} "
                f"{r.error:>10.2e} {r.tolerance:>8.0e}  {'yes' if r.passed else 'NO'}"
            )
            if r.note:
                line += f"  ({r.note})"
            lines.append(line)
        passed = sum(r.passed for r in results)
        lines.append("-" * len(header))
        lines.append(f"{passed}/{len(results)} checks passed")
        return "\n".join(lines)
