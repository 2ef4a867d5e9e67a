r"""Large deviation upper bounds for the TAMSD and the exponent estimator.

The centered quadratic form :math:`(N-\tau)(M_N(\tau) - E M_N(\tau))` is
sub-gamma with variance factor :math:`\nu = 2\sum_j\lambda_j^2` and scale
factor :math:`c = \bar\lambda = 2\max_j\lambda_j`, so every bound here is
an instance of the Chernoff inequality

.. math::

    P(X > \epsilon) \le \exp\left(-\frac{\nu}{c^2}
    \mathcal{H}\left(\frac{c\epsilon}{\nu}\right)\right),
    \quad \mathcal{H}(u) = 1 + u - \sqrt{1 + 2u}.

Bounds are carried in log space. ``BoundResult.bound`` underflows to 0
for extreme deviations while ``log_bound`` stays exact.
"""
import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from tamsdld import models, spectrum as _spectrum
from tamsdld.errors import SandwichWarning, UnsupportedParameterError
from tamsdld.util._functions import require_limits


@enum.unique
class Sided(enum.Enum):
    """Which deviations a bound covers."""

    TWO_SIDED = 'two_sided'
    RIGHT_TAIL = 'right_tail'


@dataclass(frozen=True)
class SubGammaParams:
    """Variance factor `nu` and scale factor `c` of a sub-gamma variable."""

    nu: float
    c: float

    def __post_init__(self):
        require_limits('nu', self.nu, lower_bound=0)
        require_limits('c', self.c, lower_bound=0)


@dataclass(frozen=True)
class BoundResult:
    """Evaluated large deviation bound.

    Attributes
    ----------
    epsilon : float or ndarray
        Deviation in the units of the bounded statistic.
    bound : float or ndarray
        Upper bound on the probability (at most 2 for two-sided bounds).
    log_bound : float or ndarray
        Natural log of `bound`.
    nu, c : float
        Sub-gamma parameters used.
    sided : Sided
    deviation : float or ndarray
        Deviation of the quadratic form passed to the Chernoff
        inequality.
    """

    epsilon: object
    bound: object
    log_bound: object
    nu: float
    c: float
    sided: Sided
    deviation: object = None


def h_function(u):
    r""":math:`\mathcal{H}(u) = 1 + u - \sqrt{1 + 2u}`.

    Evaluated as :math:`u^2 / (1 + u + \sqrt{1 + 2u})` which avoids the
    cancellation of the direct form for small `u`.

    Parameters
    ----------
    u : float or array_like
        Nonnegative argument.

    Returns
    -------
    float or ndarray

    Raises
    ------
    ValueError
        If any `u` < 0.
    """
    u_arr = np.asarray(u, dtype=float)
    require_limits('u', u_arr, lower_bound=0, inclusive_lower=True)
    h = u_arr**2 / (1 + u_arr + np.sqrt(1 + 2 * u_arr))
    if np.ndim(u) == 0:
        return float(h)
    return h


def subgamma_params(spectrum):
    """Sub-gamma parameters of the centered quadratic form.

    Parameters
    ----------
    spectrum : SpectrumSummary

    Returns
    -------
    SubGammaParams
        ``nu = 2 * sum(lambda**2)``, ``c = 2 * max(lambda)``.
    """
    return SubGammaParams(2 * spectrum.sum_lambda_sq, spectrum.lambda_bar)


def _positive_epsilon(epsilon):
    eps = np.asarray(epsilon, dtype=float)
    require_limits('epsilon', eps, lower_bound=0)
    return eps


def _scalar(value, like):
    if np.ndim(like) == 0:
        return float(value)
    return value


def chernoff_tail(params, epsilon):
    """Right-tail Chernoff bound for a sub-gamma variable.

    Parameters
    ----------
    params : SubGammaParams
    epsilon : float or array_like
        Deviations > 0.

    Returns
    -------
    BoundResult
        With ``log_bound = -(nu/c**2) * H(c*epsilon/nu)``.
    """
    eps = _positive_epsilon(epsilon)
    log_bound = -(params.nu / params.c**2) * h_function(
        params.c * eps / params.nu)
    return BoundResult(
        epsilon=_scalar(eps, epsilon),
        bound=_scalar(np.exp(log_bound), epsilon),
        log_bound=_scalar(log_bound, epsilon),
        nu=params.nu,
        c=params.c,
        sided=Sided.RIGHT_TAIL,
        deviation=_scalar(eps, epsilon),
    )


def _two_sided(params, epsilon, deviation):
    # sum of right and left sub-gamma tails
    tail = chernoff_tail(params, deviation)
    log_bound = math.log(2) + np.asarray(tail.log_bound)
    return BoundResult(
        epsilon=_scalar(np.asarray(epsilon, dtype=float), epsilon),
        bound=_scalar(np.exp(log_bound), epsilon),
        log_bound=_scalar(log_bound, epsilon),
        nu=params.nu,
        c=params.c,
        sided=Sided.TWO_SIDED,
        deviation=tail.deviation,
    )


def gamma_tail_bound(lam, epsilon):
    r"""Bound on the tail of one centered gamma summand.

    :math:`\lambda U - \lambda` with :math:`U \sim \chi^2_1` is
    sub-gamma with :math:`\nu = 2\lambda^2` and :math:`c = 2\lambda`,
    giving :math:`\exp(-\frac{1}{2}\mathcal{H}(\epsilon/\lambda))`.

    Parameters
    ----------
    lam : float
        Positive eigenvalue.
    epsilon : float or array_like

    Returns
    -------
    BoundResult
    """
    require_limits('lam', lam, lower_bound=0)
    return chernoff_tail(SubGammaParams(2 * lam**2, 2 * lam), epsilon)


def centered_log_mgf(spectrum, gamma):
    r"""Exact log-MGF of the centered quadratic form.

    .. math::

        \sum_j \left[-\gamma\lambda_j
        - \tfrac{1}{2}\log(1 - 2\gamma\lambda_j)\right]

    Parameters
    ----------
    spectrum : SpectrumSummary
    gamma : float or array_like
        In ``[0, 1/(2 lambda_max))``.

    Returns
    -------
    float or ndarray
    """
    g = np.asarray(gamma, dtype=float)
    require_limits('gamma', g, 0, 1 / (2 * spectrum.lambda_max),
                   inclusive_lower=True)
    x = 2 * g[..., np.newaxis] * spectrum.eigenvalues
    # -x/2 - log(1 - x)/2 without cancellation near x = 0
    value = np.sum(-0.5 * x - 0.5 * np.log1p(-x), axis=-1)
    return _scalar(value, gamma)


def subgamma_log_mgf_bound(params, gamma):
    """Sub-gamma envelope :math:`\\gamma^2\\nu / (2(1 - c\\gamma))`.

    Parameters
    ----------
    params : SubGammaParams
    gamma : float or array_like
        In ``[0, 1/c)``.

    Returns
    -------
    float or ndarray
    """
    g = np.asarray(gamma, dtype=float)
    require_limits('gamma', g, 0, 1 / params.c, inclusive_lower=True)
    return _scalar(g**2 * params.nu / (2 * (1 - params.c * g)), gamma)


def deviation_rate(result):
    """Rate :math:`I(\\epsilon, \\tau, N) = -\\log` of a bound."""
    return -result.log_bound


def tamsd_deviation_bound(spectrum, lag, epsilon):
    """Two-sided bound on :math:`P(|M_N(\\tau) - E M_N(\\tau)| > \\epsilon)`.

    .. math::

        2\\exp\\left(-\\frac{2\\sum_j\\lambda_j^2}{\\bar\\lambda^2}
        \\mathcal{H}\\left(\\frac{\\bar\\lambda\\epsilon(N-\\tau)}
        {2\\sum_j\\lambda_j^2}\\right)\\right)

    Parameters
    ----------
    spectrum : SpectrumSummary
        Eigenvalues of :math:`\\Sigma(\\tau)`.
    lag : LagSpec
    epsilon : float or array_like
        Deviations of the time average, > 0.

    Returns
    -------
    BoundResult

    Raises
    ------
    ValueError
        If the spectrum does not have ``N - tau`` eigenvalues.
    """
    if spectrum.m != lag.m:
        raise ValueError(
            f"spectrum has {spectrum.m} eigenvalues but N - tau = {lag.m}"
        )
    eps = _positive_epsilon(epsilon)
    return _two_sided(subgamma_params(spectrum), epsilon, eps * lag.m)


def _resolve_lambda_max(model, lag, lambda_max):
    if lambda_max == 'exact':
        return _spectrum.model_spectrum(model, lag).lambda_max
    if lambda_max == 'sandwich':
        sandwich = _spectrum.max_eigenvalue_sandwich(model, lag)
        if not sandwich.guaranteed:
            warnings.warn(
                "the sandwich upper bound is not guaranteed for this model; "
                "the resulting deviation bound may not hold",
                SandwichWarning
            )
        return sandwich.upper
    require_limits('lambda_max', lambda_max, lower_bound=0)
    return float(lambda_max)


def _closed_form_bound(model, lag, epsilon, lambda_max):
    eps = _positive_epsilon(epsilon)
    nu = 2 * _spectrum.sum_lambda_sq_closed_form(model, lag)
    c = 2 * _resolve_lambda_max(model, lag, lambda_max)
    return _two_sided(SubGammaParams(nu, c), epsilon, eps * lag.m)


def bm_deviation_bound(model, lag, epsilon, lambda_max='exact'):
    """Two-sided TAMSD bound for Brownian motion.

    Uses the polynomial closed form of :math:`\\sum_j\\lambda_j^2` from
    :py:func:`~tamsdld.spectrum.sum_lambda_sq_closed_form`, so only the
    largest eigenvalue needs a spectrum.

    Parameters
    ----------
    model : ProcessModel
        A BM model.
    lag : LagSpec
    epsilon : float or array_like
    lambda_max : {'exact', 'sandwich'} or float, default 'exact'
        Source of the largest eigenvalue: the full spectrum, the
        Perron-Frobenius upper bound (a looser but still valid bound)
        or a given value.

    Returns
    -------
    BoundResult
    """
    if model.kind is not models.ProcessKind.BM:
        raise ValueError('bm_deviation_bound requires a BM model')
    return _closed_form_bound(model, lag, epsilon, lambda_max)


def fbm_deviation_bound(model, lag, epsilon, lambda_max='exact'):
    """Two-sided TAMSD bound for fractional Brownian motion.

    Uses the band sum of :math:`\\sum_j\\lambda_j^2` from
    :py:func:`~tamsdld.spectrum.sum_lambda_sq_closed_form`.

    Parameters
    ----------
    model : ProcessModel
        An FBM model.
    lag : LagSpec
    epsilon : float or array_like
    lambda_max : {'exact', 'sandwich'} or float, default 'exact'

    Returns
    -------
    BoundResult
    """
    if model.kind is not models.ProcessKind.FBM:
        raise ValueError('fbm_deviation_bound requires an FBM model')
    return _closed_form_bound(model, lag, epsilon, lambda_max)


def beta_estimator_bound(model, lag, epsilon, spectrum=None):
    """One-sided bound for the anomalous diffusion exponent estimator.

    With :math:`D = 1/2`, :math:`E M_N(\\tau) = \\tau^\\beta` and
    :math:`\\hat\\beta - \\beta > \\epsilon` is the event
    :math:`M_N(\\tau) > \\tau^{\\epsilon + \\beta}`, so

    .. math::

        P(\\hat\\beta - \\beta > \\epsilon) \\le
        \\exp\\left(-\\frac{2\\sum_j\\lambda_j^2}{\\bar\\lambda^2}
        \\mathcal{H}\\left(\\frac{\\bar\\lambda(N-\\tau)
        (\\tau^{\\epsilon+\\beta} - \\tau^\\beta)}{2\\sum_j\\lambda_j^2}
        \\right)\\right)

    Parameters
    ----------
    model : ProcessModel
        FBM (or BM, treated as H = 0.5) with ``diffusion == 0.5``.
    lag : LagSpec
        With ``tau >= 2``.
    epsilon : float or array_like
        Deviations of the estimate, > 0.
    spectrum : SpectrumSummary, optional
        Precomputed spectrum of :math:`\\Sigma(\\tau)`.

    Returns
    -------
    BoundResult
        Right-tail bound; `deviation` holds
        :math:`(N-\\tau)(\\tau^{\\epsilon+\\beta} - \\tau^\\beta)`.

    Raises
    ------
    ValueError
        If ``tau < 2`` (``ln(tau) = 0``).
    UnsupportedParameterError
        If the diffusion coefficient is not 1/2.
    """
    if lag.tau < 2:
        raise ValueError(
            f"tau set to {lag.tau}, must be at least 2: the estimator "
            "divides by ln(tau), which is 0 for tau = 1"
        )
    if model.diffusion != 0.5:
        raise UnsupportedParameterError(
            f"diffusion={model.diffusion}: the exponent bound is derived "
            "for D = 1/2"
        )
    eps = _positive_epsilon(epsilon)
    if spectrum is None:
        spectrum = _spectrum.model_spectrum(model, lag)
    beta = model.exponent
    params = SubGammaParams(
        2 * _spectrum.sum_lambda_sq_closed_form(model, lag),
        spectrum.lambda_bar
    )
    threshold = lag.tau ** (eps + beta) - lag.tau ** beta
    tail = chernoff_tail(params, lag.m * threshold)
    return BoundResult(
        epsilon=_scalar(eps, epsilon),
        bound=tail.bound,
        log_bound=tail.log_bound,
        nu=params.nu,
        c=params.c,
        sided=Sided.RIGHT_TAIL,
        deviation=tail.deviation,
    )
