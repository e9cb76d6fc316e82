"""Exception hierarchy shared by all layers."""


class ValFieldError(Exception):
    """Base class for every error raised by this package."""


class UnsupportedResidueFactorization(ValFieldError):
    pass


class NegativeValue(ValFieldError):
    pass


class DepthExhausted(ValFieldError):
    """The p-root tower would have to grow beyond its configured maximum depth."""


class RejectedAugmentation(ValFieldError):
    pass


class ChainBudgetExhausted(ValFieldError):
    """Raised in strict mode when a chain could not be classified within the bounds.

    The partially computed reports are kept on ``reports``.
    """

    def __init__(self, message, reports=()):
        super().__init__(message)
        self.reports = list(reports)


class NotSquarefree(ValFieldError):
    pass


class Inconclusive(ValFieldError):
    pass


class NotNormal(ValFieldError):
    pass


class InconsistentReports(ValFieldError):
    pass


class HypothesisNotMet(ValFieldError):
    pass


class OracleBoundExceeded(ValFieldError):
    pass


class RootsNotRational(ValFieldError):
    """The polynomial does not split in K[x]/(g), or its roots were not found within bounds."""


class ParseError(ValFieldError, SyntaxError):
    """Syntax error in a polynomial or base-field expression.

    ``position`` is the 0-based character offset; ``offset`` follows the
    1-based :class:`SyntaxError` convention.
    """

    def __init__(self, message, position=None):
        text = message if position is None else f"{message} (at position {position})"
        super().__init__(text)
        self.msg = text
        self.position = position
        self.offset = None if position is None else position + 1

    def __str__(self):
        return self.msg


class UnknownIndeterminate(ParseError):
    pass


class TheoryViolation(ValFieldError):
    """A randomized spot check contradicted a proven identity: an implementation bug."""
