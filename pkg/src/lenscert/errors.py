"""Exception types shared across the library."""


class LensCertError(Exception):
    """Base class for all library errors."""


class DivisionByIntervalContainingZero(LensCertError):
    pass


class NonPositiveBase(LensCertError):
    pass


class DomainViolation(LensCertError):
    pass


class DivergentParameters(LensCertError):
    pass


class InvalidC(LensCertError):
    pass


class QuadratureBudgetExceeded(LensCertError):
    pass


class InvalidGeometry(LensCertError):
    pass


class PrecisionExhausted(LensCertError):
    pass


class NoValidPair(LensCertError):
    pass


class UnsupportedDimension(LensCertError):
    pass
