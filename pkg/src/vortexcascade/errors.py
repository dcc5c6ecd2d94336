"""Exception types shared across the package."""


class VortexCascadeError(Exception):
    """Base class for all package errors."""


class ResolutionError(VortexCascadeError):
    """Grid too coarse to represent the requested field."""


class AliasingError(VortexCascadeError):
    """A phase factor or transfer function would alias on this grid."""


class GridMismatchError(VortexCascadeError):
    """Two fields that must share a grid do not."""


class DegenerateOverlapError(VortexCascadeError):
    """The interacting beams have essentially no spatial overlap."""


class AmbiguousCirculationError(VortexCascadeError):
    """Measured phase circulation is too far from an integer multiple of 2*pi."""


class NegativeFrequencyError(VortexCascadeError):
    """The sideband ladder was extended past zero frequency."""


class NonPeriodicError(VortexCascadeError):
    """No periodic structure found in a time series."""


class RegionError(VortexCascadeError):
    """An analysis region is too small or out of bounds."""


class ConfigError(VortexCascadeError):
    """Invalid run configuration; carries the offending key when known."""

    def __init__(self, message, key=None, line=None):
        prefix = ""
        if line is not None:
            prefix = f"line {line}: "
        super().__init__(prefix + message)
        self.key = key
        self.line = line


class BasisTruncationWarning(UserWarning):
    """Decomposition basis captured too little of the field power."""


class DetuningWarning(UserWarning):
    """Pump-Stokes difference frequency is far from the Raman resonance."""
