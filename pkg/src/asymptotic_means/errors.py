"""Exception hierarchy shared by every module of the package."""


class AsymptoticMeansError(Exception):
    """Base class for all errors raised by this package."""


class SpecError(AsymptoticMeansError, ValueError):
    """A function or sequence description is malformed."""


class ParseError(SpecError):
    """JSON input could not be turned into a spec tree."""


class DomainError(AsymptoticMeansError, ValueError):
    """A point or interval lies outside the domain of the function."""


class ToleranceError(AsymptoticMeansError, ValueError):
    """The requested integration tolerance cannot be certified."""


class OverflowGuardError(AsymptoticMeansError, OverflowError):
    """An exponential rescaling would overflow double precision."""


class ScheduleError(AsymptoticMeansError, ValueError):
    """Sweep parameters violate their invariants or leave no usable window."""
