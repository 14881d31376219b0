"""Exception hierarchy shared by every module of the toolkit."""


class DrazinKitError(Exception):
    """Base class for all toolkit errors."""


class ShapeError(DrazinKitError, ValueError):
    """Operands have incompatible or invalid shapes."""


class NumericalError(DrazinKitError, ArithmeticError):
    """A decomposition failed or produced non-finite output."""


class IllConditionedError(NumericalError):
    """A computed Drazin inverse misses the defining axioms by too much.

    The offending residuals are kept on the exception so callers can
    report them.
    """

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class PreconditionError(DrazinKitError, ValueError):
    """An operation was called outside its domain (e.g. index too large)."""


class HypothesisViolation(DrazinKitError):
    """The hypotheses of a closed-form formula do not hold for the input.

    ``report`` is the :class:`~drazin_kit.hypotheses.HypothesisReport`
    (or a plain dict of residuals) describing what failed.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
