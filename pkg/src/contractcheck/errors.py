"""Exception hierarchy for contractcheck."""


class ContractCheckError(Exception):
    """Base class for all contractcheck errors."""


class NonPositiveArgument(ContractCheckError):
    """Auxiliary functions are defined on (0, inf) only."""


class GridTooSmall(ContractCheckError):
    pass


class InvalidExponent(ContractCheckError):
    pass


class ShapeMismatch(ContractCheckError):
    pass


class DuplicatePoint(ContractCheckError):
    pass


class TooFewPoints(ContractCheckError):
    pass


class InvalidTau(ContractCheckError):
    pass


class NoEligiblePairs(ContractCheckError):
    pass


class C1Violated(ContractCheckError):
    """The (E, F) pair fails condition C1 on the realized distance range."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class GridMismatch(ContractCheckError):
    pass


class PointCollision(ContractCheckError):
    pass


class NoRightJump(ContractCheckError):
    pass


class NotNondecreasing(ContractCheckError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InternalInconsistency(ContractCheckError):
    """The two independent Meir-Keeler computations disagreed."""


class Diverged(ContractCheckError):
    pass


class FnParseError(ContractCheckError):
    """Malformed function mini-language expression."""
