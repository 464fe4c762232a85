"""Exception hierarchy for staba2.

Every error raised on purpose by the library derives from ``Staba2Error`` and,
where one fits, from the closest builtin so callers can keep catching
``ValueError`` / ``RuntimeError``.
"""


class Staba2Error(Exception):
    """Base class for all staba2 errors."""


class ConfigError(Staba2Error, ValueError):
    """Invalid configuration value or file."""


class WordSyntaxError(Staba2Error, ValueError):
    """A braid word could not be parsed."""


class RadiusGuardError(Staba2Error, ValueError):
    """Requested exchange graph ball exceeds the radius guard."""


class MasslessClassError(Staba2Error, ValueError):
    """The central charge vanishes on the requested class."""

    def __init__(self, message: str = "massless class"):
        super().__init__(message)


class PhaseRangeError(Staba2Error, ValueError):
    """A charge has no phase in (0, 1]."""


class VanishingMassError(Staba2Error, ValueError):
    """A simple object of the heart has zero charge."""

    def __init__(self, message: str = "wall of vanishing mass"):
        super().__init__(message)


class InadmissibleChargeError(Staba2Error, ValueError):
    """A projective charge cannot be realised on the given heart."""


class DescentError(Staba2Error, RuntimeError):
    """Chamber descent did not converge."""

    def __init__(self, message: str = "descent did not converge"):
        super().__init__(message)


class SingularFiberError(Staba2Error, ValueError):
    """The elliptic curve over the requested point is singular."""

    def __init__(self, message: str = "singular fiber"):
        super().__init__(message)


class NearSingularError(Staba2Error, ValueError):
    """Branch points are too close for reliable quadrature."""

    def __init__(self, message: str = "near-singular, refusing"):
        super().__init__(message)


class ContinuationError(Staba2Error, RuntimeError):
    """Analytic continuation could not track the period lattice."""


class MonodromyAccuracyError(Staba2Error, RuntimeError):
    """A measured transition matrix is not integral within tolerance."""

    def __init__(self, message: str = "continuation accuracy insufficient"):
        super().__init__(message)


class CalibrationError(Staba2Error, RuntimeError):
    """No unimodular change of basis matches the measured monodromy."""

    def __init__(self, message: str = "calibration failed"):
        super().__init__(message)


class LiftError(Staba2Error, RuntimeError):
    """A loop scaled the period vector by something other than a sign."""
