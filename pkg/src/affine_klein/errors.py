"""Exception hierarchy shared by every module of the package."""


class ContractViolation(ValueError):
    """An operation was called outside its documented preconditions."""


class ShapeError(ContractViolation):
    """Matrix or vector dimensions are incompatible."""


class EvaluationError(ContractViolation):
    """A symbolic expression was evaluated without a value for some parameter."""

    def __init__(self, parameter):
        self.parameter = parameter
        super().__init__(f"parameter {parameter!r} is not assigned")


class UnsupportedCase(ContractViolation):
    """The linear data of a homomorphism is not one of the supported cases."""


class UnsupportedBase(ContractViolation):
    """Only the Klein bottle is supported as base surface."""


class NotFree(ContractViolation):
    """The action has a fixed point at the supplied parameter values."""
