"""Exception hierarchy shared across the package."""


class VqesimError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(VqesimError):
    """An input violates a documented precondition or invariant."""


class DimensionError(ValidationError):
    """Operands have incompatible widths or lengths."""


class ResourceLimitError(VqesimError):
    """A dense or statevector object would exceed the configured size cap."""


class HermiticityError(VqesimError):
    """A transformation produced a non-Hermitian (complex-weighted) operator."""


class SymmetryViolationError(VqesimError):
    """An operator does not respect the symmetry required for qubit removal."""


class EmptySectorError(VqesimError):
    """A symmetry sector contains no basis states."""


class FcidumpError(ValidationError):
    """Malformed FCIDUMP content."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
