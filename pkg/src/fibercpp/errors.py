"""Exception types raised across the package.

Errors deriving from :class:`HypothesisViolation` mean "the inputs are well
formed but a mathematical precondition does not hold"; the CLI maps them to
exit status 3.
"""


class FieldError(ValueError):
    pass


class NotPrime(FieldError):
    pass


class OrderTooLarge(FieldError):
    pass


class NotIrreducible(FieldError):
    pass


class FieldMismatch(FieldError):
    pass


class MalformedTable(ValueError):
    pass


class HypothesisViolation(ValueError):
    pass


class NotOneModThree(HypothesisViolation):
    pass


class NotOneModNine(HypothesisViolation):
    pass


class NotInMu3(HypothesisViolation):
    pass


class DeltaNotInMu3(NotInMu3):
    pass


class GammaDegenerate(HypothesisViolation):
    pass


class DNotDividing(HypothesisViolation):
    pass


class ZeroCValue(HypothesisViolation):
    pass


class RNotScalarForm(HypothesisViolation):
    pass


class CNotKernelValued(HypothesisViolation):
    pass


class HypothesisViolated(HypothesisViolation):
    """A three-item gamma rule was requested on a field outside its range."""

    def __init__(self, item, reason):
        super().__init__(f"item {item}: {reason}")
        self.item = item
        self.reason = reason


class CriterionDefect(AssertionError):
    """Two routes that must agree did not. Always a bug, never user error."""
