"""Exception hierarchy shared by all modules."""


class KanterError(Exception):
    """Base class for errors raised by kanterlab."""


class DomainError(KanterError, ValueError):
    """Argument outside the domain of the function."""


class PoleError(DomainError):
    """Evaluation at a pole of the Gamma function."""


class ParameterError(KanterError, ValueError):
    """Invalid parameter combination."""


class BracketError(KanterError, ValueError):
    """Root bracket does not contain a sign change."""


class ConvergenceError(KanterError, RuntimeError):
    """Iteration or series failed to converge within its cap."""


class SeriesDivergenceError(ConvergenceError):
    """Series terms kept growing; the divergence guard tripped."""


class TruncationError(KanterError, RuntimeError):
    """Contour truncation height too small for the requested tolerance."""


class BoundarySingularWarning(UserWarning):
    """A density was evaluated exactly at an integrable boundary singularity."""


class SlowConvergenceWarning(UserWarning):
    """Series evaluated close to the edge of its convergence domain."""


class NearUnitIndexWarning(UserWarning):
    """Stability index very close to 1; accuracy is not guaranteed."""
