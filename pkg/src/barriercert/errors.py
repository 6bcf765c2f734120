"""Exception hierarchy shared across the toolkit."""


class BarrierCertError(Exception):
    """Base class for all toolkit errors."""


class PolynomialSyntaxError(BarrierCertError):
    """Expression text does not match the restricted polynomial grammar."""


class UnknownSymbolError(PolynomialSyntaxError):
    """Identifier is not a declared state or noise variable."""


class NonPolynomialError(PolynomialSyntaxError):
    """Expression is syntactically valid but not a polynomial (function call,
    negative/fractional exponent, division by a non-constant)."""


class DimensionMismatchError(BarrierCertError):
    """Vector/point length does not match the declared variable count."""


class EmptyBoxError(BarrierCertError):
    """Box with some lower bound strictly above the upper bound."""


class OddDegreeError(BarrierCertError):
    """SOS-constrained polynomial requested with an odd degree."""


class MomentOrderExceededError(BarrierCertError):
    """Requested raw moment order above the configured maximum."""


class NotSymmetricError(BarrierCertError):
    """Matrix handed to the PSD check is not symmetric."""


class NonpositiveLambdaError(BarrierCertError):
    """Confidence bound requested with lambda <= 0."""


class InvalidProblemError(BarrierCertError):
    """Safety problem violates its invariants (containment, disjointness,
    missing horizon, odd degrees, ...)."""


class InvalidCertificateError(BarrierCertError):
    """Certificate violates a structural requirement; carries the clause name."""

    def __init__(self, clause: str, message: str = ""):
        self.clause = clause
        super().__init__(f"{clause}: {message}" if message else clause)


class ConfigError(BarrierCertError):
    """Configuration document rejected; names the offending field."""

    def __init__(self, field: str, message: str):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")
