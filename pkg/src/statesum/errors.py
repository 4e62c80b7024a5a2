"""Exception hierarchy shared by every module of the package."""


class StatesumError(ValueError):
    """Base class for all errors raised by :mod:`statesum`."""


class MalformedSimplexError(StatesumError):
    pass


class UnknownSimplexError(StatesumError):
    pass


class DimensionError(StatesumError):
    pass


class NotConnectedError(StatesumError):
    pass


class GroupSpecError(StatesumError):
    """Unknown group spec, bad Cayley table or group too large."""


class UnsupportedError(StatesumError):
    pass


class PathError(StatesumError):
    """Malformed edge path, or an open path where a loop is required."""


class MissingValueError(StatesumError):
    """A cochain or labeling is not defined on some required simplex."""


class RelatorViolationError(StatesumError):
    pass


class NotFlatError(StatesumError):
    pass


class NotACocycleError(StatesumError):
    pass


class NotACycleError(StatesumError):
    pass


class NoSolutionError(StatesumError):
    pass


class GaugeKindError(StatesumError, TypeError):
    pass
