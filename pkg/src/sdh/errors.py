"""Exception hierarchy.

InputError subclasses become CLI exit code 2.  Aborted computations and
an exhausted enumeration budget become exit code 4.
"""


class SDHError(Exception):
    """Base class for every error raised by this package."""


class InputError(SDHError, ValueError):
    """Malformed or inconsistent user input."""


class DanglingEdge(InputError):
    pass


class DuplicateId(InputError):
    pass


class BadSign(InputError):
    pass


class EmptyGraph(InputError):
    pass


class BadBlockLevel(InputError):
    pass


class BadPeriod(InputError):
    pass


class NotSquare(InputError):
    pass


class ShapeMismatch(InputError):
    pass


class PoleAtZero(InputError):
    pass


class InvalidPresentation(InputError):
    """A pair presentation violates a structural invariant."""


class DegeneratePeriod(SDHError, ArithmeticError):
    """det(A^n - I) = 0, so the period-n points of the torus map are not isolated."""


class OrbitBudgetExceeded(SDHError):
    pass


class ComputationAborted(SDHError):
    """A constructed object failed its consistency checks."""


class InvarianceViolated(ComputationAborted):
    pass


class NotAChainMap(ComputationAborted):
    pass


class NotAComplex(ComputationAborted):
    pass


class CapExceeded(ComputationAborted):
    pass


class NonIntegralTrace(SDHError, ArithmeticError):
    pass
