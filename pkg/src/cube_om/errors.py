"""Exception hierarchy shared by all engine modules."""

from __future__ import annotations


class CubeError(ValueError):
    """Base class for every error raised by the engine."""


class CapExceededError(CubeError):
    """Dimension outside the supported range."""


class InvalidDescriptorError(CubeError):
    pass


class NotASubcubeError(CubeError):
    pass


class InvalidTripleError(CubeError):
    pass


class NotAModularPairError(CubeError):
    pass


class CacheMismatchError(CubeError):
    """A catalog cache does not belong to the requested dimension or fails its self-check."""


class NotACircuitError(CubeError):
    pass


class InconsistentCatalogError(CubeError):
    pass


class NotAnOrientationError(CubeError):
    """Cocircuit data violates orthogonality where a genuine orientation cannot."""


class NotNormalizableError(CubeError):
    pass


class MalformedFileError(CubeError):
    pass


class EmptySetError(CubeError):
    """Rank of the empty set was requested where a nonempty set is required."""
