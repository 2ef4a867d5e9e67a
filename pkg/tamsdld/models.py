"""Gaussian process models and the covariance of their increments.

Every downstream computation needs only :py:func:`increment_autocov`,
the autocovariance of the lag-`tau` increments of the process sampled
on the unit grid ``t = 1, ..., N``.
"""
import enum
from dataclasses import dataclass

import numpy as np

from tamsdld.util._functions import require_limits, require_integer


@enum.unique
class ProcessKind(enum.Enum):
    """Gaussian process family."""

    BM = 'bm'
    """Brownian motion."""
    FBM = 'fbm'
    """Fractional Brownian motion."""


@dataclass(frozen=True)
class ProcessModel:
    """A centered Gaussian process with stationary increments.

    The covariance is :math:`D(|t|^{2H} + |s|^{2H} - |t-s|^{2H})`, so
    the variance at time `t` is :math:`2Dt^{2H}`.

    Parameters
    ----------
    kind : ProcessKind
    diffusion : float, default 0.5
        Diffusion coefficient :math:`D > 0`.
    hurst : float, optional
        Hurst index in (0, 1). Required for FBM and must be omitted (or
        equal to 0.5) for BM.

    Raises
    ------
    ValueError
        If `diffusion` or `hurst` is outside its domain.
    """

    kind: ProcessKind
    diffusion: float = 0.5
    hurst: float = None

    def __post_init__(self):
        kind = ProcessKind(self.kind)
        object.__setattr__(self, 'kind', kind)
        require_limits('diffusion', self.diffusion, lower_bound=0)
        object.__setattr__(self, 'diffusion', float(self.diffusion))
        if kind is ProcessKind.FBM:
            if self.hurst is None:
                raise ValueError('hurst must be given for FBM')
            require_limits('hurst', self.hurst, 0, 1)
            object.__setattr__(self, 'hurst', float(self.hurst))
        elif self.hurst not in (None, 0.5):
            raise ValueError(
                f"hurst={self.hurst!r} given for BM, which has H = 0.5"
            )
        else:
            object.__setattr__(self, 'hurst', None)

    @classmethod
    def bm(cls, diffusion=0.5):
        """Brownian motion with diffusion coefficient `diffusion`."""
        return cls(ProcessKind.BM, diffusion)

    @classmethod
    def fbm(cls, hurst, diffusion=0.5):
        """Fractional Brownian motion with Hurst index `hurst`."""
        return cls(ProcessKind.FBM, diffusion, hurst)

    @property
    def hurst_index(self):
        """Hurst index, 0.5 for BM."""
        if self.kind is ProcessKind.BM:
            return 0.5
        return self.hurst

    @property
    def exponent(self):
        """Anomalous diffusion exponent :math:`\\beta = 2H`."""
        return 2 * self.hurst_index


@dataclass(frozen=True)
class LagSpec:
    """Trajectory length and lag.

    Parameters
    ----------
    n : int
        Trajectory length `N` (samples ``X(1), ..., X(N)``).
    tau : int
        Lag, ``1 <= tau <= N - 1``.

    Raises
    ------
    ValueError
        If the lag is not admissible for the trajectory length.
    """

    n: int
    tau: int

    def __post_init__(self):
        require_integer('N', self.n, 2)
        require_integer('tau', self.tau, 1)
        if self.tau > self.n - 1:
            raise ValueError(
                f"tau set to {self.tau}, must be at most N - 1 = {self.n - 1}"
            )

    @property
    def m(self):
        """Number of lag-`tau` increments, ``N - tau``."""
        return self.n - self.tau


def increment_autocov(model, tau, j):
    r"""Autocovariance of the lag-`tau` increments.

    .. math::

        \sigma_\tau(j) = \mathrm{Cov}(X(t+\tau) - X(t), X(t+j+\tau) - X(t+j))

    which for FBM is :math:`D[(j+\tau)^{2H} - 2j^{2H} + |j-\tau|^{2H}]`
    and for BM is :math:`2D(\tau - j)` for ``j < tau`` and 0 otherwise.

    Parameters
    ----------
    model : ProcessModel
    tau : int
        Lag, at least 1.
    j : int or array_like of int
        Nonnegative separation between increments.

    Returns
    -------
    float or ndarray
        :math:`\sigma_\tau(j)`, with the shape of `j`.

    Raises
    ------
    ValueError
        If `tau` < 1 or any `j` < 0.
    """
    require_integer('tau', tau, 1)
    j_arr = np.asarray(j, dtype=float)
    require_limits('j', j_arr, lower_bound=0, inclusive_lower=True)
    d = model.diffusion
    if model.kind is ProcessKind.BM:
        cov = np.where(j_arr <= tau - 1, 2 * d * (tau - j_arr), 0.0)
    else:
        two_h = 2 * model.hurst
        # 0 ** two_h is 0 for the j == tau term
        cov = d * (np.power(j_arr + tau, two_h)
                   - 2 * np.power(j_arr, two_h)
                   + np.power(np.abs(j_arr - tau), two_h))
    if np.ndim(j) == 0:
        return float(cov)
    return cov


def increment_mean_square(model, tau):
    """Expected TAMSD :math:`E(M_N(\\tau)) = \\sigma_\\tau(0) = 2D\\tau^{2H}`.

    Parameters
    ----------
    model : ProcessModel
    tau : int

    Returns
    -------
    float
    """
    return increment_autocov(model, tau, 0)
