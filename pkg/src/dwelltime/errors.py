"""Exception hierarchy shared by the numerical modules."""


class DwellTimeError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(DwellTimeError, ValueError):
    """An input lies outside the domain of a formula (e.g. non-positive momentum)."""


class DivergenceError(DomainError):
    """The requested quantity is unbounded at the given input."""


class DegenerateWavenumberError(DwellTimeError):
    """A segment has a vanishing local wavenumber (E equal to a real step)."""


class PoleError(DwellTimeError):
    """A closed-form expression hit a vanishing denominator."""

    def __init__(self, message, momentum=None):
        super().__init__(message)
        self.momentum = momentum


class UnitarityError(DwellTimeError):
    """Absorption probability fell outside [0, 1] beyond rounding."""


class AccuracyError(DwellTimeError):
    """A numerical procedure could not reach its target accuracy."""
