"""Exception hierarchy shared by all modules."""


class PptError(Exception):
    """Base class for every error raised by this package."""


class NonHermitian(PptError, ValueError):
    pass


class NoConvergence(PptError, ArithmeticError):
    pass


class DimensionMismatch(PptError, ValueError):
    pass


class BadIndex(PptError, ValueError):
    pass


class BadDimension(PptError, ValueError):
    pass


class OneSidedSpace(PptError, ValueError):
    """A bipartite operation was asked of a space with an empty side."""


class TooLarge(PptError, ValueError):
    pass


class BadChannelKind(PptError, ValueError):
    pass


class IllPosed(PptError, ArithmeticError):
    """The equality constraints of an SDP are linearly dependent."""


class NonMonotone(PptError, ArithmeticError):
    pass


class BadRange(PptError, ValueError):
    pass


class BadEnsemble(PptError, ValueError):
    pass


class SumMismatch(PptError, ValueError):
    pass


class BadEffect(PptError, ValueError):
    pass


class NotAPovm(PptError, ValueError):
    pass


class NotEntangled(PptError, ValueError):
    pass


class PreconditionViolated(PptError, ValueError):
    pass


class BadIndexing(PptError, ValueError):
    pass


class InvalidState(PptError, ValueError):
    """Vector or matrix fails the normalisation/positivity contract of a state."""


class NotOrthogonal(PptError, ValueError):
    pass


class CrossCheckFailed(PptError, ArithmeticError):
    """Two independent evaluations of the same criterion disagreed."""
