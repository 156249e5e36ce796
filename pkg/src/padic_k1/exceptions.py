class PadicK1Error(Exception):
    """Base exception for p-adic K1 errors"""


class CompositePError(PadicK1Error):
    """Raised when a residue characteristic is not prime"""


class ZeroInputError(PadicK1Error):
    """Raised when a nonzero residue element is required"""


class DomainError(PadicK1Error):
    """Raised when a series argument lies outside its convergence domain"""


class PrecisionExhaustedError(PadicK1Error):
    """Raised when the guaranteed p-adic digits fall to zero"""


class NotAGroupError(PadicK1Error):
    """Raised when a multiplication table fails the group axioms"""


class EnumerationBudgetExceededError(PadicK1Error):
    """Raised when coset enumeration outgrows its table bound"""


class BudgetExceededError(PadicK1Error):
    """Raised when a computation would exceed a configured budget"""


class NotCentralError(PadicK1Error):
    """Raised when an element is required to be central of order p"""


class NotAPGroupError(PadicK1Error):
    """Raised when an operation requires a p-group"""


class NotAUnitError(PadicK1Error):
    """Raised when an element is required to be invertible"""


class NoEmbeddingError(PadicK1Error):
    """Raised when no embedding between coefficient rings is registered"""


class NewtonDivisionFailureError(PadicK1Error):
    """Raised when Newton's identities need to divide by p"""


class UnknownGroupError(PadicK1Error):
    """Raised when a catalog name is not recognised"""


class BadPresentationError(PadicK1Error):
    """Raised when a presentation file cannot be parsed"""


class ConsistencyError(PadicK1Error):
    """Raised when two independent computations of one quantity disagree"""


class ExpressionParseError(PadicK1Error):
    """Raised when a unit expression cannot be parsed"""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at position {position})")
        self.position = position
