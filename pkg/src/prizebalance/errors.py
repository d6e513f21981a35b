"""Exception hierarchy. Everything raised for bad input derives from ``ValidationError``."""


class ValidationError(ValueError):
    pass


class EmptyOrSingletonError(ValidationError):
    pass


class NonpositiveBudgetError(ValidationError):
    pass


class NonfiniteBudgetError(ValidationError):
    pass


class KOutOfRangeError(ValidationError):
    pass


class MOutOfRangeError(ValidationError):
    pass


class WeightsNotMonotoneError(ValidationError):
    pass


class WeightsNotNormalizedError(ValidationError):
    pass


class AmountsMismatchError(ValidationError):
    pass


class NegativeEndowmentError(ValidationError):
    pass


class OutOfRangeError(ValidationError):
    pass


class PremiseViolatedError(ValidationError):
    """Raised when a threshold is requested for a k outside the threshold regime."""


class BadGridError(ValidationError):
    pass


class SingleCrossingViolation(RuntimeError):
    """The improve/hurt pattern over k changed sign more than once."""
