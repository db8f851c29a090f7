"""Exception hierarchy shared by all apnwb modules."""


class ApnwbError(Exception):
    """Base class for every error raised by this package."""


class PreconditionError(ApnwbError, ValueError):
    """An argument violates a documented precondition."""


# field construction / arithmetic

class UnsupportedWidth(PreconditionError):
    pass


class ReducibleModulus(PreconditionError):
    pass


class FieldMismatch(PreconditionError):
    pass


class DivisionByZero(ApnwbError, ZeroDivisionError):
    pass


class NotADivisor(PreconditionError):
    pass


class ZeroInput(PreconditionError):
    pass


class OddExtension(PreconditionError):
    """The operation needs n = 2m but the field has odd degree."""


# constructions

class DegenerateA(PreconditionError):
    """a + a^q = 0, i.e. a lies in the half subfield."""


class NonzeroConstant(PreconditionError):
    pass


class OddnessViolation(PreconditionError):
    pass


class CubeB(PreconditionError):
    pass


# theory checks

class NotQuadratic(PreconditionError):
    pass


class BadExponent(PreconditionError):
    pass


class DegenerateX(PreconditionError):
    pass


class DegenerateInput(PreconditionError):
    """A non-degeneracy condition assumed by an algebraic identity fails."""


# invariants

class TooLarge(PreconditionError):
    pass
