"""Exception hierarchy shared by the simulator modules."""


class ImcError(Exception):
    """Base class for simulator errors."""


class InvalidBias(ImcError):
    """A signal combination whose cell behavior is undefined."""


class DomainError(ImcError, ValueError):
    pass


class WidthError(ImcError, ValueError):
    pass


class ShapeError(ImcError, ValueError):
    pass


class ConfigError(ImcError, ValueError):
    pass


class CalibrationError(ImcError, ValueError):
    pass


class MissingCalibration(CalibrationError, KeyError):
    pass
