"""Eigenvalues of the Toeplitz covariance matrix of lag-tau increments.

The TAMSD scaled by ``N - tau`` is a weighted sum of independent
:math:`\\chi^2_1` variables whose weights are the eigenvalues of the
covariance matrix :math:`\\Sigma(\\tau)` of the increment vector. This
module builds that matrix, computes its spectrum, and evaluates the
closed forms available for BM and FBM.
"""
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from tamsdld import models
from tamsdld.errors import (EigenSolverError, PositiveDefiniteError,
                            SandwichWarning)


# Relative tolerances are anchored to sigma_tau(0). Eigenvalues below
# absolute_floor * M * sigma_tau(0) are treated as zero.
TOLERANCES = {
    'relative': 1e-10,
    'absolute_floor': 1e-14,
}


@dataclass(frozen=True)
class ToeplitzSpec:
    """First row of the symmetric Toeplitz matrix :math:`\\Sigma(\\tau)`.

    Parameters
    ----------
    first_row : ndarray
        :math:`\\sigma_\\tau(0), \\ldots, \\sigma_\\tau(M-1)`.
    """

    first_row: np.ndarray

    def __post_init__(self):
        row = np.array(self.first_row, dtype=float, ndmin=1)
        if row.ndim != 1 or len(row) < 1:
            raise ValueError('first_row must be a non-empty vector')
        if not row[0] > 0:
            raise ValueError(
                f"first_row[0]={row[0]!r} must be positive (it is a variance)"
            )
        row.setflags(write=False)
        object.__setattr__(self, 'first_row', row)

    @property
    def m(self):
        """Matrix dimension ``N - tau``."""
        return len(self.first_row)

    def matrix(self):
        """Dense :math:`M \\times M` matrix."""
        return scipy.linalg.toeplitz(self.first_row)


@dataclass(frozen=True)
class SpectrumSummary:
    """Eigenvalues of :math:`\\Sigma(\\tau)` and derived aggregates.

    `eigenvalues` are sorted ascending, so ``eigenvalues[0]`` is the
    smallest eigenvalue :math:`\\lambda_1(\\tau)`.
    """

    eigenvalues: np.ndarray

    def __post_init__(self):
        values = np.sort(np.array(self.eigenvalues, dtype=float, ndmin=1))
        if values.ndim != 1 or len(values) < 1:
            raise ValueError('eigenvalues must be a non-empty vector')
        if not values[0] > 0:
            raise PositiveDefiniteError(
                f"smallest eigenvalue {values[0]:.6g} is not positive"
            )
        values.setflags(write=False)
        object.__setattr__(self, 'eigenvalues', values)

    @property
    def m(self):
        return len(self.eigenvalues)

    @property
    def lambda_min(self):
        return float(self.eigenvalues[0])

    @property
    def lambda_max(self):
        return float(self.eigenvalues[-1])

    @property
    def lambda_bar(self):
        """:math:`\\bar\\lambda(\\tau) = 2 \\max_j \\lambda_j(\\tau)`."""
        return 2 * self.lambda_max

    @property
    def sum_lambda(self):
        return float(np.sum(self.eigenvalues))

    @property
    def sum_lambda_sq(self):
        return float(np.sum(self.eigenvalues ** 2))


class EigenvalueSandwich(NamedTuple):
    """Row-sum bounds on the largest eigenvalue."""

    lower: float
    upper: float
    guaranteed: bool


def build_toeplitz(model, lag):
    """Build :math:`\\Sigma(\\tau)` for `model` sampled at `lag`.

    Parameters
    ----------
    model : ProcessModel
    lag : LagSpec

    Returns
    -------
    ToeplitzSpec
        ``first_row[j] = increment_autocov(model, lag.tau, j)`` for
        ``j = 0, ..., N - tau - 1``.
    """
    if lag.m < 1:
        raise ValueError(f"dimension N - tau = {lag.m} must be at least 1")
    return ToeplitzSpec(
        models.increment_autocov(model, lag.tau, np.arange(lag.m))
    )


def _tolerance(scale):
    return max(TOLERANCES['relative'] * scale, TOLERANCES['absolute_floor'])


def spectrum(spec):
    """Compute all eigenvalues of a symmetric Toeplitz matrix.

    The dense matrix is reduced to tridiagonal form by orthogonal
    similarity transforms and diagonalized with implicitly shifted QR
    (LAPACK ``?syev``).

    Parameters
    ----------
    spec : ToeplitzSpec

    Returns
    -------
    SpectrumSummary

    Raises
    ------
    EigenSolverError
        If LAPACK fails to converge.
    PositiveDefiniteError
        If the smallest eigenvalue is not positive. Eigenvalues below
        ``-1e-10 * sigma(0)`` indicate an invalid covariance; values up
        to ``1e-14 * M * sigma(0)``, the rounding level of the solver,
        indicate a numerically singular one.
    """
    sigma0 = spec.first_row[0]
    if spec.m == 1:
        eigenvalues = np.array([sigma0])
    else:
        try:
            eigenvalues = scipy.linalg.eigh(
                spec.matrix(), eigvals_only=True, driver='ev',
                check_finite=True
            )
        except np.linalg.LinAlgError as err:
            raise EigenSolverError(
                f"eigensolver did not converge for M={spec.m}: {err}",
                info=getattr(err, 'info', None)
            ) from err
    smallest = np.min(eigenvalues)
    if smallest <= -_tolerance(sigma0):
        raise PositiveDefiniteError(
            f"smallest eigenvalue {smallest:.6g} is negative; the first "
            "row is not a valid covariance"
        )
    if smallest <= TOLERANCES['absolute_floor'] * spec.m * sigma0:
        raise PositiveDefiniteError(
            f"smallest eigenvalue {smallest:.6g} is indistinguishable "
            "from zero; the covariance matrix is numerically singular"
        )
    return SpectrumSummary(eigenvalues)


def model_spectrum(model, lag):
    """Shortcut for ``spectrum(build_toeplitz(model, lag))``."""
    return spectrum(build_toeplitz(model, lag))


def _square_sum(n):
    # sum_{k=1}^n k^2, zero for n <= 0
    n = max(n, 0)
    return n * (n + 1) * (2 * n + 1) / 6


def _cube_sum(n):
    # sum_{k=1}^n k^3, zero for n <= 0
    n = max(n, 0)
    return (n * (n + 1) / 2) ** 2


def _trace_of_square(first_row):
    # trace(T^2) of a symmetric Toeplitz T: entry j sits on 2(M - j)
    # off-diagonal positions
    m = len(first_row)
    j = np.arange(1, m)
    return float(m * first_row[0]**2
                 + 2 * np.sum((m - j) * first_row[1:]**2))


def sum_lambda_sq_closed_form(model, lag):
    r"""Sum of squared eigenvalues from :math:`\mathrm{trace}(\Sigma^2)`.

    .. math::

        \sum_j \lambda_j^2 = M\sigma_\tau(0)^2
            + 2\sum_{j=1}^{M-1}(M-j)\sigma_\tau(j)^2

    For BM only ``j < tau`` contributes and the sum is a polynomial:
    with :math:`K = \min(\tau, M) - 1`,

    .. math::

        4D^2\left[M\tau^2 + 2(M-\tau)(S_2(\tau-1) - S_2(\tau-K-1))
            + 2(S_3(\tau-1) - S_3(\tau-K-1))\right]

    where :math:`S_2(n) = n(n+1)(2n+1)/6` and
    :math:`S_3(n) = (n(n+1)/2)^2`. For FBM the band is full and the
    weighted sum of :math:`D^2[(i+\tau)^{2H} - 2i^{2H} + |i-\tau|^{2H}]^2`
    is evaluated directly.

    Parameters
    ----------
    model : ProcessModel
    lag : LagSpec

    Returns
    -------
    float
    """
    m, tau, d = lag.m, lag.tau, model.diffusion
    if model.kind is models.ProcessKind.BM:
        top = tau - min(tau, m)
        band = (m * tau**2
                + 2 * (m - tau) * (_square_sum(tau - 1) - _square_sum(top))
                + 2 * (_cube_sum(tau - 1) - _cube_sum(top)))
        return 4 * d**2 * band
    return _trace_of_square(build_toeplitz(model, lag).first_row)


def _row_sums(first_row):
    # row i (1-based) of a symmetric Toeplitz matrix sums to
    # sigma(0) + sum_{j=1}^{i-1} sigma(j) + sum_{j=1}^{M-i} sigma(j)
    m = len(first_row)
    partial = np.concatenate([[0.0], np.cumsum(first_row[1:])])
    i = np.arange(1, m + 1)
    return first_row[0] + partial[i - 1] + partial[m - i]


def max_eigenvalue_sandwich(model, lag):
    """Perron-Frobenius bounds on the largest eigenvalue.

    The lower bound is the sum of the first row and the upper bound is
    the sum of the central row (row ``(M+1)/2`` for odd ``M``, row
    ``M/2`` for even ``M``), which are the smallest and largest row
    sums when the covariances are nonnegative and nonincreasing.

    Parameters
    ----------
    model : ProcessModel
    lag : LagSpec

    Returns
    -------
    EigenvalueSandwich
        `guaranteed` is False when some covariance is negative (FBM
        with H < 0.5), in which case a :py:class:`SandwichWarning` is
        also issued.

    Notes
    -----
    For even ``M`` the central row sum is
    :math:`\\sigma(0) + 2\\sum_{j=1}^{M/2-1}\\sigma(j) + \\sigma(M/2)`.
    """
    row = build_toeplitz(model, lag).first_row
    m = len(row)
    if m == 1:
        return EigenvalueSandwich(row[0], row[0], True)
    sums = _row_sums(row)
    guaranteed = bool(np.all(row >= 0))
    if not guaranteed:
        warnings.warn(
            f"negative increment covariances for {model}: the row-sum "
            "bounds on the largest eigenvalue are not guaranteed",
            SandwichWarning
        )
    return EigenvalueSandwich(float(sums[0]), float(sums[(m - 1) // 2]),
                              guaranteed)


def bm_sandwich_closed_form(model, lag):
    """BM bounds :math:`D\\tau(\\tau+1) \\le \\lambda_{max} \\le 2D\\tau^2`.

    Valid when the central row contains the whole covariance band,
    ``N - tau >= 2 tau - 1``.

    Parameters
    ----------
    model : ProcessModel
        A BM model.
    lag : LagSpec

    Returns
    -------
    EigenvalueSandwich
    """
    if model.kind is not models.ProcessKind.BM:
        raise ValueError('bm_sandwich_closed_form requires a BM model')
    if lag.m < 2 * lag.tau - 1:
        raise ValueError(
            f"N - tau = {lag.m} must be at least 2 tau - 1 = "
            f"{2 * lag.tau - 1} for the closed form"
        )
    d, tau = model.diffusion, lag.tau
    return EigenvalueSandwich(d * tau * (tau + 1), 2 * d * tau**2, True)


def fbm_sandwich_closed_form(model, lag):
    """Simplified FBM bounds on the largest eigenvalue for ``tau = 1``.

    For even `N`

    .. math::

        D[(N-1)^{2H} - (N-2)^{2H} + 1] \\le \\lambda_{max}
        \\le 2D[(N/2)^{2H} - ((N-2)/2)^{2H}]

    and for odd `N` the upper bound is
    :math:`2D[((N-1)/2)^{2H} - ((N-3)/2)^{2H}] + \\sigma_1((N-1)/2)`.

    Parameters
    ----------
    model : ProcessModel
        An FBM model.
    lag : LagSpec
        With ``tau = 1`` and ``N >= 3``.

    Returns
    -------
    EigenvalueSandwich
    """
    if model.kind is not models.ProcessKind.FBM:
        raise ValueError('fbm_sandwich_closed_form requires an FBM model')
    if lag.tau != 1 or lag.n < 3:
        raise ValueError('the simplified form needs tau = 1 and N >= 3')
    n, d, two_h = lag.n, model.diffusion, 2 * model.hurst
    lower = d * ((n - 1)**two_h - (n - 2)**two_h + 1)
    if n % 2 == 0:
        upper = 2 * d * ((n / 2)**two_h - ((n - 2) / 2)**two_h)
    else:
        # N - 1 even: the central row also holds sigma_1((N - 1) / 2)
        upper = (2 * d * (((n - 1) / 2)**two_h - ((n - 3) / 2)**two_h)
                 + models.increment_autocov(model, 1, (n - 1) // 2))
    return EigenvalueSandwich(lower, upper, model.hurst >= 0.5)
