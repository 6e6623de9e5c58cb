class SecInvError(Exception):
    """Base class for every error raised by the invariant services"""
    exit_code = 2


class InputError(SecInvError, ValueError):
    """Bad input: mismatched degrees, lengths, fields or widths"""
    exit_code = 2


class ParseError(InputError):
    """Group text that could not be parsed"""

    def __init__(self, message: str, position: int = 0):
        self.position = position
        self.detail = message
        super().__init__(f"{message} (at position {position})")


class ResourceError(SecInvError):
    """A configured cap was exceeded"""
    exit_code = 3


class ConsistencyError(SecInvError):
    """Something that theory guarantees did not happen; signals a bug"""
    exit_code = 4


class VerificationError(SecInvError):
    """A verification clause failed"""
    exit_code = 1

    def __init__(self, clause: str, message: str):
        self.clause = clause
        super().__init__(f"clause ({clause}) failed: {message}")


class CycloZeroDivisionError(SecInvError, ZeroDivisionError):
    """Inverting zero in a cyclotomic field"""
    exit_code = 2
