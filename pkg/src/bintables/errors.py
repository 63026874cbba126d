"""Exception types shared across the package."""


class DomainError(ValueError):
    """Parameters fall outside the region where a formula or construction applies."""


class InfeasibleError(ValueError):
    """No 0-1 matrix exists with the requested margins."""


class ConvergenceError(RuntimeError):
    """An iterative solver stopped before reaching its tolerance."""

    def __init__(self, message, residual=float("nan"), iterations=0):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class ResourceError(RuntimeError):
    """A size or state-space cap was exceeded."""
