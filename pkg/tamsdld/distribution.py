"""Exact finite-sample distribution of the TAMSD.

:math:`(N-\\tau)M_N(\\tau)` is distributed as :math:`\\sum_j \\lambda_j U_j`
with :math:`U_j` independent :math:`\\chi^2_1` and :math:`\\lambda_j` the
eigenvalues of :math:`\\Sigma(\\tau)`. The density, distribution and tail
functions are evaluated with the Moschopoulos series, a mixture of
gamma distributions with common scale :math:`2\\lambda_1` and shapes
:math:`M/2 + k`:

.. math::

    g(x) = C \\sum_{k=0}^{\\infty} \\delta_k f_{(M/2+k, \\theta)}(x),
    \\quad C = \\prod_j (\\lambda_1/\\lambda_j)^{1/2}

All functions take ``scaled=False`` to work with the time-average
:math:`M_N(\\tau)` (scale :math:`\\theta = 2\\lambda_1/M`) or
``scaled=True`` for :math:`(N-\\tau)M_N(\\tau)` (scale
:math:`\\theta = 2\\lambda_1`).
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy import special, stats

from tamsdld.errors import TruncationError
from tamsdld.util._functions import require_limits


SERIES_LIMITS = {
    # stop once C * sum(delta_k) >= 1 - mass_tolerance
    'mass_tolerance': 1e-12,
    # hard cap on the number of delta_k terms
    'max_terms': 200000,
    # delta_k are rescaled by 2**-rescale_exponent when they exceed
    # 2**rescale_exponent
    'rescale_exponent': 512,
}


@dataclass(frozen=True)
class GChi2Series:
    """State of the Moschopoulos expansion.

    Attributes
    ----------
    lambda1 : float
        Smallest eigenvalue.
    m : int
        Number of eigenvalues, ``N - tau``.
    log_c : float
        :math:`\\log C = \\frac{1}{2}\\sum_j \\log(\\lambda_1/\\lambda_j)`.
    gamma_coeffs : ndarray
        :math:`\\gamma_1, \\ldots, \\gamma_K`.
    delta : ndarray
        :math:`\\delta_0, \\ldots, \\delta_K` divided by
        ``exp(delta_log_scale)``.
    delta_log_scale : float
        Log of the common factor removed from `delta`.
    mass_deficit : float
        :math:`1 - C\\sum_{k \\le K}\\delta_k`.
    ratios : ndarray
        :math:`1 - \\lambda_1/\\lambda_j`, which generate the
        :math:`\\gamma_k` beyond `K`.
    """

    lambda1: float
    m: int
    log_c: float
    gamma_coeffs: np.ndarray
    delta: np.ndarray
    delta_log_scale: float
    mass_deficit: float
    ratios: np.ndarray

    @property
    def k(self):
        """Truncation index `K`."""
        return len(self.delta) - 1

    @property
    def log_weights(self):
        """:math:`\\log(C\\delta_k)`, ``-inf`` where the weight underflows."""
        with np.errstate(divide='ignore'):
            return self.log_c + self.delta_log_scale + np.log(self.delta)

    @property
    def weights(self):
        """Mixture weights :math:`C\\delta_k`."""
        return np.exp(self.log_weights)

    @property
    def lambda_max(self):
        if len(self.ratios) == 0:
            return self.lambda1
        return self.lambda1 / (1 - np.max(self.ratios))

    def shapes(self):
        return self.m / 2 + np.arange(self.k + 1)

    def scale(self, scaled=False):
        if scaled:
            return 2 * self.lambda1
        return 2 * self.lambda1 / self.m


def build_series(spectrum, mass_tolerance=None, max_terms=None):
    """Run the :math:`\\delta_k` recursion for a spectrum.

    .. math::

        \\delta_{k+1} = \\frac{1}{k+1}\\sum_{j=1}^{k+1} j\\gamma_j
        \\delta_{k+1-j}, \\quad \\delta_0 = 1,
        \\quad \\gamma_k = \\sum_j \\frac{(1-\\lambda_1/\\lambda_j)^k}{2k}

    The recursion stops at the smallest `K` with
    :math:`C\\sum_{k \\le K}\\delta_k \\ge 1 - ` `mass_tolerance`. Since
    the :math:`C\\delta_k` are the weights of a probability mixture the
    deficit is exactly the probability mass left out.

    Parameters
    ----------
    spectrum : SpectrumSummary
    mass_tolerance : float, optional
        In (0, 1). Defaults to ``SERIES_LIMITS['mass_tolerance']``.
    max_terms : int, optional
        Defaults to ``SERIES_LIMITS['max_terms']``.

    Returns
    -------
    GChi2Series

    Raises
    ------
    TruncationError
        If `max_terms` is reached before the mass tolerance.
    """
    if mass_tolerance is None:
        mass_tolerance = SERIES_LIMITS['mass_tolerance']
    if max_terms is None:
        max_terms = SERIES_LIMITS['max_terms']
    require_limits('mass_tolerance', mass_tolerance, 0, 1)
    rescale_exp = SERIES_LIMITS['rescale_exponent']
    rescale_at = 2.0 ** rescale_exp

    lam = spectrum.eigenvalues
    lambda1 = lam[0]
    log_c = 0.5 * float(np.sum(np.log(lambda1 / lam)))
    ratios = 1 - lambda1 / lam
    ratios = ratios[ratios > 0]

    size = 1024
    delta = np.zeros(size)
    # jgamma[j] = j * gamma_j = sum(ratios ** j) / 2
    jgamma = np.zeros(size)
    delta[0] = 1.0
    log_scale = 0.0
    mass = math.exp(log_c)
    power = ratios.copy()
    k = 0
    while mass < 1 - mass_tolerance:
        if k >= max_terms:
            deficit = 1 - mass
            raise TruncationError(
                f"series reached {max_terms} terms with mass deficit "
                f"{deficit:.3g} > {mass_tolerance:.3g}; the spectrum is "
                f"too ill-conditioned (lambda_1 = {lambda1:.3g})",
                mass_deficit=deficit, terms=k + 1
            )
        if k + 2 > size:
            size *= 2
            delta = np.concatenate([delta, np.zeros(size - len(delta))])
            jgamma = np.concatenate([jgamma, np.zeros(size - len(jgamma))])
        jgamma[k + 1] = 0.5 * power.sum()
        power *= ratios
        nxt = np.dot(jgamma[1:k + 2], delta[k::-1]) / (k + 1)
        k += 1
        delta[k] = nxt
        if nxt > rescale_at:
            delta[:k + 1] *= 2.0 ** -rescale_exp
            log_scale += rescale_exp * math.log(2)
            nxt = delta[k]
        if nxt > 0:
            mass += math.exp(log_c + log_scale + math.log(nxt))

    delta = delta[:k + 1].copy()
    gamma_coeffs = jgamma[1:k + 1] / np.arange(1, k + 1)
    for arr in (delta, gamma_coeffs, ratios):
        arr.setflags(write=False)
    return GChi2Series(
        lambda1=float(lambda1),
        m=spectrum.m,
        log_c=log_c,
        gamma_coeffs=gamma_coeffs,
        delta=delta,
        delta_log_scale=log_scale,
        mass_deficit=max(0.0, 1 - mass),
        ratios=ratios,
    )


def _positive(name, x):
    x = np.asarray(x, dtype=float)
    require_limits(name, x, lower_bound=0)
    return x


def _result(x, values):
    if np.ndim(x) == 0:
        return float(values[0])
    return values.reshape(np.shape(x))


def tamsd_pdf(series, x, scaled=False):
    """Probability density of the TAMSD.

    Parameters
    ----------
    series : GChi2Series
    x : float or array_like
        Points > 0.
    scaled : bool, default False
        Evaluate the density of :math:`(N-\\tau)M_N(\\tau)` instead of
        :math:`M_N(\\tau)`.

    Returns
    -------
    float or ndarray

    Raises
    ------
    ValueError
        If any `x` <= 0.
    """
    xs = _positive('x', x).ravel()
    log_terms = stats.gamma.logpdf(
        xs[:, np.newaxis],
        a=series.shapes()[np.newaxis, :],
        scale=series.scale(scaled)
    ) + series.log_weights[np.newaxis, :]
    return _result(x, np.exp(special.logsumexp(log_terms, axis=1)))


def tamsd_cdf(series, w, scaled=False):
    """Distribution function :math:`P(M_N(\\tau) \\le w)`.

    Each mixture component is a regularized lower incomplete gamma
    function :math:`P(M/2 + k, w/\\theta)`.

    Parameters
    ----------
    series : GChi2Series
    w : float or array_like
        Points > 0.
    scaled : bool, default False

    Returns
    -------
    float or ndarray
        Nondecreasing in `w`, tending to ``1 - mass_deficit``.
    """
    ws = _positive('w', w).ravel()
    terms = special.gammainc(series.shapes()[np.newaxis, :],
                             ws[:, np.newaxis] / series.scale(scaled))
    return _result(w, terms @ series.weights)


def tamsd_tail(series, w, scaled=False):
    """Tail probability :math:`P(M_N(\\tau) > w)`.

    Computed directly from the regularized upper incomplete gamma
    function :math:`Q(M/2 + k, wM/(2\\lambda_1))`, which keeps full
    relative precision far in the tail.

    Parameters
    ----------
    series : GChi2Series
    w : float or array_like
        Points > 0.
    scaled : bool, default False

    Returns
    -------
    float or ndarray
    """
    ws = _positive('w', w).ravel()
    terms = special.gammaincc(series.shapes()[np.newaxis, :],
                              ws[:, np.newaxis] / series.scale(scaled))
    return _result(w, terms @ series.weights)


def tamsd_quantile(series, p, scaled=False, iterations=60):
    """Quantile of the TAMSD.

    All probabilities are solved together. Each step evaluates the
    distribution function and density once for the unresolved
    points and takes a Newton step, falling back to bisection when the
    step leaves the bracket.

    Parameters
    ----------
    series : GChi2Series
    p : float or array_like
        Probabilities in (0, 1 - mass_deficit).
    scaled : bool, default False
    iterations : int, default 60
        Maximum number of steps.

    Returns
    -------
    float or ndarray
    """
    ps = np.asarray(p, dtype=float).ravel()
    require_limits('p', ps, 0, 1 - series.mass_deficit)
    rtol = 4 * np.finfo(float).eps
    shapes, weights = series.shapes(), series.weights
    theta = series.scale(scaled)
    mean = float(shapes @ weights) * theta
    var = float((shapes * (shapes + 1)) @ weights) * theta**2 - mean**2
    lo = np.zeros_like(ps)
    hi = np.full_like(ps, 2 * mean)
    below = tamsd_cdf(series, hi, scaled) < ps
    while below.any():
        lo[below] = hi[below]
        hi[below] *= 2
        below[below] = tamsd_cdf(series, hi[below], scaled) < ps[below]
    # start from the moment-matched gamma quantile
    x = stats.gamma.ppf(ps, a=mean**2 / var, scale=var / mean)
    outside = ~((x > lo) & (x < hi))
    x[outside] = 0.5 * (lo[outside] + hi[outside])
    active = np.ones(len(ps), dtype=bool)
    for _ in range(iterations):
        if not active.any():
            break
        idx = np.flatnonzero(active)
        xa = x[idx]
        diff = tamsd_cdf(series, xa, scaled) - ps[idx]
        low_side = diff < 0
        lo[idx[low_side]] = xa[low_side]
        hi[idx[~low_side]] = xa[~low_side]
        with np.errstate(divide='ignore', invalid='ignore'):
            step = xa - diff / tamsd_pdf(series, xa, scaled)
        bad = ~np.isfinite(step) | (step <= lo[idx]) | (step >= hi[idx])
        step[bad] = 0.5 * (lo[idx[bad]] + hi[idx[bad]])
        done = ((diff == 0) | (np.abs(step - xa) <= rtol * xa)
                | (hi[idx] - lo[idx] <= rtol * hi[idx]))
        x[idx] = np.where(diff == 0, xa, step)
        active[idx[done]] = False
    return _result(p, x)


def tamsd_mgf(series, s):
    """Moment generating function of :math:`(N-\\tau)M_N(\\tau)`.

    .. math::

        C(1 - 2\\lambda_1 s)^{-M/2}
        \\exp\\left(\\sum_{k=1}^\\infty \\frac{\\gamma_k}
        {(1 - 2\\lambda_1 s)^k}\\right)

    With :math:`u = 1/(1 - 2\\lambda_1 s)` and :math:`r_j = 1 -
    \\lambda_1/\\lambda_j` the exponent is summed over `k` in closed
    form, :math:`\\sum_j -\\frac{1}{2}\\log(1 - r_j u)`, so the result
    stays exact up to the edge of the domain.

    Parameters
    ----------
    series : GChi2Series
    s : float or array_like
        Arguments below :math:`1/(2\\lambda_{max})`.

    Returns
    -------
    float or ndarray

    Raises
    ------
    ValueError
        If any `s` is outside the domain of convergence.
    """
    ss = np.asarray(s, dtype=float).ravel()
    require_limits('s', ss, upper_bound=1 / (2 * series.lambda_max))
    u = 1 / (1 - 2 * series.lambda1 * ss)
    exponent = -0.5 * np.sum(
        np.log1p(-series.ratios[np.newaxis, :] * u[:, np.newaxis]), axis=1)
    values = np.exp(series.log_c + series.m / 2 * np.log(u) + exponent)
    return _result(s, values)


def tamsd_cf(spectrum, k):
    """Characteristic function of :math:`(N-\\tau)M_N(\\tau)`.

    .. math::

        \\phi(k) = \\prod_j (1 - 2\\lambda_j i k)^{-1/2}

    Parameters
    ----------
    spectrum : SpectrumSummary
    k : float or array_like

    Returns
    -------
    complex or ndarray of complex
    """
    ks = np.asarray(k, dtype=float).ravel()
    logs = np.log(1 - 2j * spectrum.eigenvalues[np.newaxis, :]
                  * ks[:, np.newaxis])
    values = np.exp(-0.5 * np.sum(logs, axis=1))
    if np.ndim(k) == 0:
        return complex(values[0])
    return values.reshape(np.shape(k))


def tamsd_mean(spectrum):
    """:math:`E(M_N(\\tau)) = \\sum_j\\lambda_j / (N-\\tau)`."""
    return spectrum.sum_lambda / spectrum.m


def tamsd_variance(spectrum):
    """:math:`Var(M_N(\\tau)) = 2\\sum_j\\lambda_j^2 / (N-\\tau)^2`."""
    return 2 * spectrum.sum_lambda_sq / spectrum.m**2
