"""Exception hierarchy shared across the package.

The command-line tool maps these onto process exit codes: invalid input -> 2,
non-convergence -> 3, resource caps -> 4.
"""


class PathdevError(Exception):
    """Base class for all package-specific errors."""


class InputError(PathdevError, ValueError):
    """Malformed user input: bad files, inconsistent shapes, invalid parameters."""


class ConvergenceError(PathdevError, RuntimeError):
    """An iterative solver failed to reach its tolerance.

    Carries the residual history so callers can report how close the solve got.
    """

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = list(residuals) if residuals is not None else []

    @property
    def last_residual(self):
        return self.residuals[-1] if self.residuals else float("nan")


class DivergenceError(ConvergenceError):
    """An iterative solver produced non-finite values (couplings outside the
    convergence ball)."""


class ResourceCapError(PathdevError, RuntimeError):
    """A requested computation exceeds a hard resource cap (e.g. qubit count)."""
