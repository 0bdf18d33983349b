"""Exception hierarchy.

Every failure that callers are expected to handle derives from SUnitError so
the CLI can map it to an exit code.  Input problems derive from InputError
(exit 2), everything else is a mathematical/computational failure (exit 1).
"""


class SUnitError(Exception):
    """Base class for all library errors."""


class InputError(SUnitError):
    """The caller supplied malformed or inconsistent data."""


class NotIrreducible(InputError):
    pass


class NotMonic(InputError):
    pass


class BasisNotIntegral(InputError):
    pass


class HypothesisViolated(InputError):
    """A documented precondition of an operation does not hold."""


class RankDeficient(InputError):
    """Supplied generators do not have the expected S-unit rank."""


class ZeroElement(SUnitError, ArithmeticError):
    pass


class DivisionByZero(SUnitError, ZeroDivisionError):
    pass


class PrecisionExhausted(SUnitError):
    """A certified comparison could not be decided at the precision cap."""


class IndexDivisible(SUnitError):
    """p divides [O_K : Z[theta]] and no p-maximal basis was supplied."""


class LocalFactorizationUnsupported(SUnitError):
    pass


class NotAUnitAtP(SUnitError):
    pass


class AllSingular(SUnitError):
    pass


class Unsupported(SUnitError):
    pass


class ModeUnavailable(SUnitError):
    pass


class SearchExhausted(SUnitError):
    pass


class MemoryBudgetExceeded(SUnitError):
    pass


class DegenerateTau(SUnitError):
    pass


class CapTooSmall(SUnitError):
    pass


class HypothesisNotMet(SUnitError):
    pass


class FieldTooLarge(SUnitError):
    pass
