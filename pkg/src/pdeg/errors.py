class PdegError(Exception):
    """Base class for library errors."""


class DomainError(PdegError, ValueError):
    """Input lies outside an operation's domain (bad prime, singular curve, ...)."""


class PrecisionError(PdegError, ArithmeticError):
    """p-adic working precision is too low to decide the answer.

    ``required`` is a best-effort estimate of the precision that would suffice.
    """

    def __init__(self, msg: str, required: int | None = None):
        super().__init__(msg)
        self.required = required


class BudgetExceeded(PdegError, RuntimeError):
    """An exhaustive computation would exceed its configured budget."""


class PrecisionWarning(UserWarning):
    """A p-adic subtraction cancelled enough digits to leave < 3 significant ones."""
