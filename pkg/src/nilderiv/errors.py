"""Exception hierarchy shared across the library."""


class NilderivError(Exception):
    """Base class for every error raised by this package."""


class FieldMismatch(NilderivError, ValueError):
    """Operands belong to different field specs."""


class DivisionByZero(NilderivError, ZeroDivisionError):
    """Inversion of the zero field element."""


class NoSolution(NilderivError):
    """Linear system is inconsistent (distinct from having the zero solution)."""


class SingularMatrix(NilderivError):
    """Inverse requested for a matrix of deficient rank."""


class TooLarge(NilderivError):
    """Requested object exceeds a desk-scale cap; the message states the limit."""


class RingMismatch(NilderivError, ValueError):
    """Operands live in different rings."""


class NotAUnit(NilderivError):
    """Element lies in the maximal ideal, hence has no inverse."""


class NotNilpotent(NilderivError):
    """Element fails a required nilpotency condition."""


class OutOfRange(NilderivError, ValueError):
    """Numeric argument outside the supported range."""


class BadInput(NilderivError):
    """A stated precondition fails; the message names the condition."""


class BadWitness(NilderivError):
    """A witness element fails its defining condition."""

    def __init__(self, index, condition):
        super().__init__(f"witness {index}: {condition}")
        self.index = index
        self.condition = condition


class NotSimple(NilderivError):
    """Derivation is not nilpotent simple."""


class BadFrame(NilderivError):
    """Frame validation failed; the message carries the reason."""


class BadAutomorphism(NilderivError):
    """Automorphism validation failed."""
