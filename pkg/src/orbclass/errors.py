"""Exception hierarchy.

Validation errors (bad user input) and internal check failures (a result that
should be impossible on valid input) are kept apart so the CLI can map them to
different exit codes.
"""


class OrbclassError(Exception):
    pass


class ValidationError(OrbclassError, ValueError):
    pass


class SchemaError(ValidationError):
    pass


class MixedOrZeroWeights(ValidationError):
    pass


class ZeroVector(ValidationError):
    pass


class OrderBudgetExceeded(ValidationError):
    pass


class AIncomplete(ValidationError):
    pass


class NonProportionalWeights(ValidationError):
    pass


class ProfileError(ValidationError):
    pass


class CommonFactorError(ValidationError):
    """A multiple fixed point where the contraction also vanishes.

    Such (F, G) share a factor, so they do not define a map of full degree.
    """


class InternalCheckError(OrbclassError, ArithmeticError):
    pass


class NonzeroRemainder(InternalCheckError):
    pass


class OracleMismatch(InternalCheckError):
    pass
