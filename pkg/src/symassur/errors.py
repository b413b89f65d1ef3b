"""Exception hierarchy shared by all modules."""


class SymAssurError(Exception):
    """Base class for every error raised by this package."""


class GroupError(SymAssurError, ValueError):
    pass


class GraphError(SymAssurError, ValueError):
    """Malformed gain graph, covering graph or group action."""


class InstanceTooLarge(SymAssurError):
    pass


class NoOrientation(SymAssurError):
    def __init__(self, message, blocking=()):
        super().__init__(message)
        self.blocking = tuple(blocking)


class VerificationFailed(SymAssurError):
    def __init__(self, message, entries=()):
        super().__init__(message)
        self.entries = list(entries)


class NotIsostatic(SymAssurError):
    pass


class NotAssur(SymAssurError):
    pass


class ActionNotFree(SymAssurError):
    pass


class SingularMatrix(SymAssurError, ArithmeticError):
    pass


class GainViolation(SymAssurError, ValueError):
    pass


class ParseError(SymAssurError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
