"""Exception hierarchy. Each class maps to one CLI exit code."""


class RamVerifyError(Exception):
    exit_code = 2


class InvalidInput(RamVerifyError, ValueError):
    pass


class OutOfRange(InvalidInput):
    pass


class DomainError(InvalidInput):
    """A real-valued function was evaluated outside its domain."""


class ParameterViolation(InvalidInput):
    """Bound parameters break a hypothesis (j(n) <= 0, g(n) < 1, ...)."""


class CorruptCache(InvalidInput):
    pass


class ResourceLimit(RamVerifyError):
    exit_code = 3


class InternalError(RamVerifyError, RuntimeError):
    exit_code = 4
