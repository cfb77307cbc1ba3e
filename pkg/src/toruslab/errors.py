"""Exception types shared across the package.

CLI exit-code mapping: InvariantViolation -> 1, ScaleExceeded -> 2,
QuadratureNonConvergence / NyquistViolation -> 3.
"""


class TorusLabError(Exception):
    """Base class for all package errors."""


class NotCoprime(TorusLabError):
    """Arguments required to be coprime are not."""


class EvenModulus(TorusLabError):
    """An odd modulus was required."""


class ScaleExceeded(TorusLabError):
    """A desk-scale cost or memory guard was exceeded."""


class CorruptCache(TorusLabError):
    """A cache file failed its magic/version/checksum validation."""


class QuadratureNonConvergence(TorusLabError):
    """Adaptive quadrature could not meet tolerance within its budget."""


class NyquistViolation(TorusLabError):
    """A quadrature grid is too coarse to be exact for the integrand."""


class EmptyShell(TorusLabError):
    """An operation requires at least one lattice point."""


class EmptyArcSet(TorusLabError):
    """An arc family is unexpectedly empty."""


class DimensionTooSmall(TorusLabError):
    """A critical exponent is undefined in this dimension."""


class InvariantViolation(TorusLabError):
    """A verification suite found a counterexample."""
