"""Exception hierarchy shared by the solver modules."""


class FucikError(Exception):
    """Base class for all errors raised by the package."""


class InvalidArgument(FucikError, ValueError):
    pass


class DegenerateDomain(FucikError):
    """A grid or subdomain has no interior nodes."""


class DomainMismatch(FucikError, ValueError):
    pass


class ConvergenceFailure(FucikError):
    """An iterative method hit its iteration cap.

    ``state`` carries the best iterate reached (if any) and ``log`` a list of
    per-iteration diagnostics.
    """

    def __init__(self, message, state=None, log=None):
        super().__init__(message)
        self.state = state
        self.log = log or []


class FiberInfeasible(FucikError):
    """The fiber map t -> f(-u^- + t u^+) has no interior critical point."""


class DegenerateSign(FucikError):
    """A field has an empty positive or negative part."""


class ReseedRequired(FucikError):
    """The positive support collapsed; the caller should restart from a wider seed."""

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


class OutOfRange(FucikError, ValueError):
    """beta lies outside the admissible range (beta <= lambda_1 + guard)."""


class InfeasibleCertificate(FucikError):
    pass


class NotApplicable(FucikError):
    pass


class UnsupportedDimension(FucikError, ValueError):
    pass
