"""Exceptions and warnings raised by tamsdld."""


class PositiveDefiniteError(ValueError):
    """A covariance matrix has an eigenvalue that is not positive."""


class EigenSolverError(RuntimeError):
    """The symmetric eigensolver did not converge.

    Parameters
    ----------
    message : str
    info : int, optional
        LAPACK ``info`` diagnostic (number of off-diagonal elements of
        the intermediate tridiagonal form that failed to converge).
    """

    def __init__(self, message, info=None):
        super().__init__(message)
        self.info = info


class TruncationError(RuntimeError):
    """The mixture series reached its hard cap before the mass tolerance.

    Attributes
    ----------
    mass_deficit : float
        ``1 - C * sum(delta_k)`` at the point the series was abandoned.
    terms : int
        Number of series terms computed.
    """

    def __init__(self, message, mass_deficit, terms):
        super().__init__(message)
        self.mass_deficit = mass_deficit
        self.terms = terms


class DegeneratePathError(ValueError):
    """A trajectory has zero TAMSD, so its log cannot be taken."""


class UnsupportedParameterError(ValueError):
    """A parameter combination outside what a bound is derived for."""


class PartialResultError(RuntimeError):
    """A Monte Carlo run stopped early.

    Attributes
    ----------
    completed : int
        Number of trials that finished before the failure.
    """

    def __init__(self, message, completed):
        super().__init__(message)
        self.completed = completed


class SamplerFallbackWarning(UserWarning):
    """Circulant embedding failed and dense sampling was used instead."""


class SandwichWarning(UserWarning):
    """An eigenvalue sandwich was computed where it is not guaranteed."""
