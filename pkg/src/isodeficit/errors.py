"""Exception types raised by the library."""


class IsodeficitError(Exception):
    """Base class for all library errors."""


class QuantileOutOfBand(IsodeficitError, ValueError):
    """Quantile requested too close to 0 or 1 for a profile-defined measure."""


class InvalidInterval(IsodeficitError, ValueError):
    """An interval with ``lo > hi`` was supplied."""


class DegenerateMeasure(IsodeficitError, ValueError):
    """The set has measure 0 or 1, so asymmetry is undefined."""


class OutOfDomain(IsodeficitError, ValueError):
    """A (measure, asymmetry) pair lies outside the feasible domain."""


class AsymmetricMeasure(IsodeficitError, ValueError):
    """The supplied measure is not symmetric about the origin."""


class ZeroAsymmetry(IsodeficitError):
    """The set is already a half-line; there is nothing to reduce.

    The matching half-line is available as ``half_line``.
    """

    def __init__(self, message, half_line=None):
        super().__init__(message)
        self.half_line = half_line


class EmptyBin(IsodeficitError, LookupError):
    """No enumerated set landed in the requested (m, lambda) bin."""


class ReductionError(IsodeficitError, RuntimeError):
    """An internal consistency check of the reducer failed."""


class PostconditionFailed(IsodeficitError, ArithmeticError):
    """A computed object failed its numerical self-check."""
