"""
Checks package for the verification suite.
Each check is implemented as a separate module with a BaseCheck subclass.
"""

import logging
from typing import Dict, Any, List
import importlib
import pkgutil
from .base_check import BaseCheck, CheckResult, VerifyContext

logger = logging.getLogger(__name__)

# report order; modules found by discovery but not listed here run last
CHECK_ORDER = [
    "trivial_residual",
    "integral_identities",
    "diagonal_limits",
    "mode_matrices",
    "kernel",
    "linear_response",
    "symmetry",
    "derivative_values",
    "reduced_functional",
]


class CheckRegistry:
    """Registry for dynamically loading and running checks."""

    def __init__(self):
        self.checks: Dict[str, BaseCheck] = {}
        self._load_checks()

    def _load_checks(self):
        """Load all check modules from the checks package."""
        excluded_modules = {"__init__", "base_check"}

        discovered_any = False
        try:
            for _finder, module_name, _is_pkg in pkgutil.iter_modules(__path__):  # type: ignore[name-defined]
                if module_name in excluded_modules:
                    continue
                full_name = f"{__name__}.{module_name}"
                try:
                    module = importlib.import_module(full_name)
                    self._register_checks_from_module(module_name, module)
                    discovered_any = True
                except Exception as import_error:
                    logger.error(f"Error importing check module '{full_name}': {import_error}")
        except Exception as discovery_error:
            logger.warning(
                f"Check discovery failed: {discovery_error}. Falling back to explicit imports."
            )

        if not discovered_any and not self.checks:
            for module_name in CHECK_ORDER:
                try:
                    module = importlib.import_module(f"{__name__}.{module_name}")
                    self._register_checks_from_module(module_name, module)
                except Exception as import_error:
                    logger.error(
                        f"Error importing fallback check module '{module_name}': {import_error}"
                    )

    def _register_checks_from_module(self, check_name: str, module: Any) -> None:
        """Find and register a concrete BaseCheck subclass from a module."""
        check_class = None
        for attr_name in dir(module):
            attr = getattr(module, attr_name)
            if isinstance(attr, type) and issubclass(attr, BaseCheck) and attr is not BaseCheck:
                check_class = attr
                break

        if check_class:
            check_instance = check_class()
            self.checks[check_name] = check_instance
            logger.debug(f"Loaded check: {check_name} ({check_instance.name})")
        else:
            logger.warning(f"Check module {check_name} missing Check class")

    def get_check(self, check_name: str) -> BaseCheck:
        return self.checks.get(check_name)

    def get_check_names(self) -> List[str]:
        """Check names in report order."""
        ordered = [name for name in CHECK_ORDER if name in self.checks]
        return ordered + sorted(name for name in self.checks if name not in CHECK_ORDER)

    def run_check(self, check_name: str, context: VerifyContext) -> List[CheckResult]:
        """Run one check; an exception becomes a single failed result."""
        check = self.get_check(check_name)
        if check is None:
            raise ValueError(f"Unknown check: {check_name}")
        try:
            return check.run(context)
        except Exception as e:
            logger.error(f"Check {check_name} raised: {e}")
            return [
                CheckResult(check.name, float("nan"), float("nan"), float("inf"), 0.0, False, str(e))
            ]


# Global check registry instance
check_registry = CheckRegistry()
