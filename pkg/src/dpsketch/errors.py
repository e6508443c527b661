"""Exception types shared across the package."""


class DpSketchError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(DpSketchError, ValueError):
    """An argument is outside its documented domain."""


class CertificationError(DpSketchError, ValueError):
    """A data matrix violates the row-norm bound it was declared with."""


class SingularSystemError(DpSketchError, RuntimeError):
    """A linear system is rank deficient where full rank is required."""


class DecompositionError(DpSketchError, RuntimeError):
    """A matrix decomposition failed to converge."""


class SketchFileError(DpSketchError, ValueError):
    """A serialized sketch file is malformed or unsupported."""
