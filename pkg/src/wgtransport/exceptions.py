"""Exception types shared across the package."""


class WgError(Exception):
    """Base class for all wgtransport errors."""


class MeshFormatError(WgError):
    """A mesh file could not be parsed. Carries the 1-based line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class MeshValidationError(WgError):
    """Mesh data violates a structural invariant."""


class ProblemSetupError(WgError):
    """Problem data and mesh are incompatible (bad boundary labels, wrong
    manufactured right-hand side, non-positive reaction coefficient...)."""


class SolverError(WgError):
    """The linear solve failed or missed its residual bound."""
