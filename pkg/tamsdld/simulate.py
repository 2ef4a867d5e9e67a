"""Exact simulation of BM/FBM paths and Monte Carlo tail estimates.

Paths are sampled by circulant embedding of the lag-1 increment process
(fractional Gaussian noise) and cumulatively summed from ``X(0) = 0``.
Each trial draws its normals from its own counter-based ``Philox``
stream keyed by ``(master_seed, trial)``, so results do not depend on
how trials are scheduled across threads.
"""
import enum
import functools
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from statsmodels.stats.proportion import proportion_confint

from tamsdld import models
from tamsdld.errors import (DegeneratePathError, PartialResultError,
                            SamplerFallbackWarning)
from tamsdld.util._functions import require_integer, require_limits


SAMPLER_DEFAULTS = {
    # trials per unit of parallel work; does not affect results
    'block_size': 256,
    # negative circulant eigenvalues tolerated, relative to sigma_1(0)
    'embedding_tolerance': 1e-10,
    # two-sided level of the binomial confidence interval
    'confidence': 0.99,
}


@enum.unique
class Statistic(enum.Enum):
    """Deviation event counted by a Monte Carlo tail estimate."""

    TAMSD_TWO_SIDED = 'tamsd_two_sided'
    """:math:`|M_N(\\tau) - \\sigma_\\tau(0)| > \\epsilon`"""
    TAMSD_RIGHT = 'tamsd_right'
    """:math:`M_N(\\tau) - \\sigma_\\tau(0) > \\epsilon`"""
    BETA_RIGHT = 'beta_right'
    """:math:`\\hat\\beta - \\bar\\beta > \\epsilon`"""


@dataclass(frozen=True)
class Trajectory:
    """A sampled path ``X(1), ..., X(N)``.

    Attributes
    ----------
    values : ndarray
    model : ProcessModel
    seed_path : tuple of int
        ``(master_seed, trial)`` identifying the random stream.
    """

    values: np.ndarray
    model: models.ProcessModel
    seed_path: tuple


@dataclass(frozen=True)
class McTailEstimate:
    """Monte Carlo estimate of a tail probability.

    Attributes
    ----------
    trials : int
    hits : int
    p_hat : float
    ci_low, ci_high : float
        Exact (Clopper-Pearson) binomial confidence limits.
    epsilon : float
    statistic : Statistic
    center : float
        Value the statistic is centered at.
    """

    trials: int
    hits: int
    p_hat: float
    ci_low: float
    ci_high: float
    epsilon: float
    statistic: Statistic
    center: float

    @property
    def std_error(self):
        """Binomial standard error of `p_hat`."""
        return float(np.sqrt(self.p_hat * (1 - self.p_hat) / self.trials))


def _check_seed(master_seed):
    require_integer('master_seed', master_seed, 0)
    if master_seed >= 2**64:
        raise ValueError(
            f"master_seed={master_seed} must fit in 64 unsigned bits"
        )
    return master_seed


def _generator(master_seed, trial):
    key = np.array([master_seed, trial], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


@functools.lru_cache(maxsize=32)
def _embedding(model, n):
    # Square roots of the circulant eigenvalues for the N lag-1
    # increments, or a Cholesky factor if the embedding is not
    # nonnegative definite.
    cov = models.increment_autocov(model, 1, np.arange(n + 1))
    row = np.concatenate([cov[:n + 1], cov[n - 1:0:-1]])
    eigenvalues = np.fft.fft(row).real
    if eigenvalues.min() < -SAMPLER_DEFAULTS['embedding_tolerance'] * cov[0]:
        warnings.warn(
            f"circulant embedding of {model} with N={n} has negative "
            f"eigenvalue {eigenvalues.min():.3g}; using dense Cholesky "
            "sampling",
            SamplerFallbackWarning
        )
        factor = scipy.linalg.cholesky(scipy.linalg.toeplitz(cov[:n]),
                                       lower=True)
        return 'dense', factor
    return 'circulant', np.sqrt(np.clip(eigenvalues, 0, None) / (2 * n))


def _increments(model, n, noise):
    # noise has shape (trials, 2, 2n)
    method, factor = _embedding(model, n)
    if method == 'dense':
        return noise[:, 0, :n] @ factor.T
    spectral = factor * (noise[:, 0, :] + 1j * noise[:, 1, :])
    return np.fft.fft(spectral, axis=-1).real[:, :n]


def _paths(model, n, master_seed, start, stop):
    noise = np.stack([
        _generator(master_seed, trial).standard_normal((2, 2 * n))
        for trial in range(start, stop)
    ])
    return np.cumsum(_increments(model, n, noise), axis=1)


def sample_path(model, n, seed):
    """Sample one path of `model` on ``t = 1, ..., n``.

    Parameters
    ----------
    model : ProcessModel
    n : int
        Number of samples, at least 2.
    seed : int or tuple of int
        ``(master_seed, trial)``; an int is taken as trial 0 of that
        master seed. Trial `t` of a Monte Carlo run with the same master
        seed is bit-identical to ``sample_path(model, n, (seed, t))``.

    Returns
    -------
    Trajectory
    """
    require_integer('N', n, 2)
    if isinstance(seed, tuple):
        master_seed, trial = seed
    else:
        master_seed, trial = seed, 0
    _check_seed(master_seed)
    require_integer('trial', trial, 0)
    values = _paths(model, n, master_seed, trial, trial + 1)[0]
    values.setflags(write=False)
    return Trajectory(values, model, (master_seed, trial))


def _values(traj):
    return np.asarray(getattr(traj, 'values', traj), dtype=float)


def _check_tau(tau, n):
    require_integer('tau', tau, 1)
    if tau > n - 1:
        raise ValueError(f"tau set to {tau}, must be at most N - 1 = {n - 1}")


def tamsd(traj, tau):
    """Time-averaged mean square displacement at lag `tau`.

    .. math::

        M_N(\\tau) = \\frac{1}{N-\\tau}\\sum_{j=1}^{N-\\tau}
        (X(j+\\tau) - X(j))^2

    Parameters
    ----------
    traj : Trajectory or array_like
        Path ``X(1), ..., X(N)``.
    tau : int
        Lag, ``1 <= tau <= N - 1``.

    Returns
    -------
    float
    """
    x = _values(traj)
    _check_tau(tau, len(x))
    return float(np.mean((x[tau:] - x[:-tau]) ** 2))


def _log_ratio(tamsd_values, tau):
    if tau < 2:
        raise ValueError(
            f"tau set to {tau}, must be at least 2: ln(tau) = 0 for tau = 1"
        )
    tamsd_values = np.asarray(tamsd_values, dtype=float)
    if np.any(tamsd_values <= 0):
        raise DegeneratePathError(
            'TAMSD is zero for a constant path; the exponent estimate '
            'is undefined'
        )
    return np.log(tamsd_values) / np.log(tau)


def beta_hat(traj, tau):
    """Anomalous diffusion exponent estimate :math:`\\ln M_N(\\tau)/\\ln\\tau`.

    Parameters
    ----------
    traj : Trajectory or array_like
    tau : int
        Lag, at least 2.

    Returns
    -------
    float

    Raises
    ------
    ValueError
        If ``tau < 2``.
    DegeneratePathError
        If the path is constant.
    """
    if tau < 2:
        _log_ratio(1.0, tau)
    return float(_log_ratio(tamsd(traj, tau), tau))


def _resolve_threads(threads):
    require_integer('threads', threads, 0)
    if threads == 0:
        return os.cpu_count() or 1
    return threads


def sample_tamsd(model, lag, trials, master_seed=0, threads=1):
    """TAMSD of `trials` independent paths.

    Parameters
    ----------
    model : ProcessModel
    lag : LagSpec
    trials : int
    master_seed : int, default 0
        Unsigned 64-bit seed.
    threads : int, default 1
        Worker threads; 0 uses all CPUs. The result does not depend on
        this value.

    Returns
    -------
    ndarray
        Length `trials`, entry `t` from the path of trial `t`.

    Raises
    ------
    PartialResultError
        If memory runs out; carries the number of completed trials.
    """
    require_integer('trials', trials, 1)
    _check_seed(master_seed)
    workers = _resolve_threads(threads)
    block = SAMPLER_DEFAULTS['block_size']
    starts = range(0, trials, block)

    def run(start):
        stop = min(start + block, trials)
        x = _paths(model, lag.n, master_seed, start, stop)
        return np.mean((x[:, lag.tau:] - x[:, :-lag.tau]) ** 2, axis=1)

    results = []
    completed = 0
    with ThreadPoolExecutor(max_workers=workers) as pool:
        try:
            for values in pool.map(run, starts):
                results.append(values)
                completed += len(values)
        except MemoryError as err:
            raise PartialResultError(
                f"ran out of memory after {completed} of {trials} trials",
                completed=completed
            ) from err
    return np.concatenate(results)


def sample_beta_hat(model, lag, trials, master_seed=0, threads=1):
    """Exponent estimates of `trials` independent paths.

    Same parameters as :py:func:`sample_tamsd`; ``lag.tau`` must be at
    least 2.

    Returns
    -------
    ndarray
    """
    if lag.tau < 2:
        _log_ratio(1.0, lag.tau)
    return _log_ratio(
        sample_tamsd(model, lag, trials, master_seed, threads), lag.tau)


def sample_gchi2(eigenvalues, size, seed=0):
    """Draw :math:`\\sum_j \\lambda_j U_j`, :math:`U_j` iid :math:`\\chi^2_1`.

    Parameters
    ----------
    eigenvalues : array_like
    size : int
    seed : int, default 0

    Returns
    -------
    ndarray
        `size` draws of :math:`(N-\\tau)M_N(\\tau)`.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    rng = np.random.Generator(np.random.Philox(key=_check_seed(seed)))
    return rng.chisquare(1, size=(size, len(lam))) @ lam


def tail_estimate(values, center, epsilon, statistic, confidence=None):
    """Count deviations of `values` from `center` beyond `epsilon`.

    Parameters
    ----------
    values : array_like
        Per-trial statistics (TAMSD or exponent estimates).
    center : float
    epsilon : float
        Deviation threshold, > 0.
    statistic : Statistic or str
        Two-sided or right-tail event.
    confidence : float, optional
        Level of the Clopper-Pearson interval. Defaults to
        ``SAMPLER_DEFAULTS['confidence']``.

    Returns
    -------
    McTailEstimate
    """
    statistic = Statistic(statistic)
    require_limits('epsilon', epsilon, lower_bound=0)
    if confidence is None:
        confidence = SAMPLER_DEFAULTS['confidence']
    values = np.asarray(values, dtype=float)
    deviation = values - center
    if statistic is Statistic.TAMSD_TWO_SIDED:
        deviation = np.abs(deviation)
    hits = int(np.count_nonzero(deviation > epsilon))
    trials = len(values)
    ci_low, ci_high = proportion_confint(hits, trials, alpha=1 - confidence,
                                         method='beta')
    # the beta quantiles are undefined at 0 and `trials` hits
    ci_low = 0.0 if hits == 0 or np.isnan(ci_low) else float(ci_low)
    ci_high = 1.0 if hits == trials or np.isnan(ci_high) else float(ci_high)
    return McTailEstimate(
        trials=trials,
        hits=hits,
        p_hat=hits / trials,
        ci_low=ci_low,
        ci_high=ci_high,
        epsilon=float(epsilon),
        statistic=statistic,
        center=float(center),
    )


def mc_tail(model, lag, epsilon, statistic, trials, master_seed=0,
            threads=1, center='analytic'):
    """Monte Carlo estimate of a deviation probability.

    Parameters
    ----------
    model : ProcessModel
    lag : LagSpec
    epsilon : float
    statistic : Statistic or str
    trials : int
    master_seed : int, default 0
    threads : int, default 1
    center : {'analytic', 'ensemble'}, default 'analytic'
        Center deviations at the exact expectation (:math:`\\sigma_\\tau(0)`
        for the TAMSD, :math:`2H` for the exponent) or at the sample mean.

    Returns
    -------
    McTailEstimate
        A deterministic function of the inputs, independent of
        `threads`.
    """
    statistic = Statistic(statistic)
    if statistic is Statistic.BETA_RIGHT:
        values = sample_beta_hat(model, lag, trials, master_seed, threads)
        analytic = model.exponent
    else:
        values = sample_tamsd(model, lag, trials, master_seed, threads)
        analytic = models.increment_mean_square(model, lag.tau)
    if center == 'analytic':
        center_value = analytic
    elif center == 'ensemble':
        center_value = float(np.mean(values))
    else:
        raise ValueError(
            f"center must be 'analytic' or 'ensemble', got {center!r}"
        )
    return tail_estimate(values, center_value, epsilon, statistic)
