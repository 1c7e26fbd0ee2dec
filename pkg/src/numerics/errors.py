"""
Exception types raised by the numerical core.
"""

from typing import Any, Optional


class GeometryError(ValueError):
    """The sheet curve is inadmissible (non-positive radius or near self-intersection).

    ``last_iterate`` is the last accepted solver iterate, when raised from a solve.
    """

    def __init__(
        self,
        message: str,
        node: Optional[int] = None,
        last_iterate: Optional[Any] = None,
    ):
        super().__init__(message)
        self.node = node
        self.last_iterate = last_iterate


class ConvergenceError(ValueError):
    """A solve that was required to converge did not."""


class ContinuationError(ValueError):
    """A branch could not be started or resumed."""


class ConfigError(ValueError):
    """Invalid configuration or command-line input."""
