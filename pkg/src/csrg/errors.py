"""Exception hierarchy shared by every csrg module."""


class CsrgError(Exception):
    """Base class for all library errors."""


class NotCoprime(CsrgError, ValueError):
    pass


class BadSupport(CsrgError, ValueError):
    pass


class NotPrime(CsrgError, ValueError):
    pass


class TooLarge(CsrgError, ValueError):
    """A size cap was exceeded (field order, conductor, brute-force limit)."""


class NotADivisor(CsrgError, ValueError):
    pass


class RangeError(CsrgError, ValueError):
    pass


class DivisionByZero(CsrgError, ZeroDivisionError):
    pass


class ZeroElement(CsrgError, ValueError):
    pass


class ConductorMismatch(CsrgError, ValueError):
    pass


class NotSemiprimitive(CsrgError, ValueError):
    pass


class BadDegree(CsrgError, ValueError):
    pass


class DegenerateCharacter(CsrgError, ValueError):
    pass


class IndexUnstable(CsrgError, ValueError):
    pass


class IncompatibleCharacters(CsrgError, ValueError):
    pass


class TrivialRestriction(CsrgError, ValueError):
    pass


class BadParameters(CsrgError, ValueError):
    pass


class InvalidH(CsrgError, ValueError):
    pass


class HypothesisFailed(CsrgError, ValueError):
    """A theorem hypothesis does not hold; the message names the condition."""


class DuplicateIndices(CsrgError, ValueError):
    pass


class NonIntegralDivision(CsrgError, ArithmeticError):
    """An exact division left a remainder; this signals a pipeline bug."""


class NonIntegralPrediction(CsrgError, ArithmeticError):
    pass


class EvenField(CsrgError, ValueError):
    pass


class BadResidue(CsrgError, ValueError):
    pass


class CacheFormatError(CsrgError, ValueError):
    pass
