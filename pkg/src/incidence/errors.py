"""Exception types shared across the package."""


class IncidenceError(Exception):
    """Base class; carries an optional machine-readable witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class MalformedInput(IncidenceError):
    pass


class CompletenessFailure(IncidenceError):
    pass


class ClosureEscape(IncidenceError):
    """A product needed by a computation is undefined in the truncated data."""


class UndefinedProduct(ClosureEscape):
    pass


class AxiomViolation(IncidenceError):
    pass


class ExactnessNotCertified(IncidenceError):
    pass


class HypothesisFailed(IncidenceError):
    pass


class BudgetExceeded(IncidenceError):
    pass
