"""Exception types shared across the package.

The CLI maps these onto process exit codes: bad input -> 1, unreachable
coupling target -> 2, solver non-convergence -> 3.
"""

from __future__ import annotations


class InputError(ValueError):
    """Malformed argument, file, or degenerate input (e.g. no edges at all)."""


class UndefinedMetricError(InputError):
    """A metric has no defined value on this input (zero variance, all nodes isolated)."""


class InfeasibleTargetError(RuntimeError):
    """A coupling target cannot be reached for the given layer specs."""


class SupercriticalError(RuntimeError):
    """The small-outbreak linear system has no finite solution at this rate."""


class ConvergenceError(RuntimeError):
    """An iterative solver ran out of iterations; carries the last iterate."""

    def __init__(self, message: str, last=None):
        super().__init__(message)
        self.last = last
