"""Tests for Toeplitz covariance spectra."""
import warnings

import numpy as np
import pytest
from tamsdld import models, spectrum
from tamsdld.errors import (PositiveDefiniteError, SandwichWarning,
                            EigenSolverError)

from .conftest import spectrum_grid


def test_build_toeplitz_bm(bm, bm_lag):
    spec = spectrum.build_toeplitz(bm, bm_lag)
    np.testing.assert_allclose(spec.first_row, [2, 1, 0, 0, 0, 0, 0])
    assert spec.m == 7
    matrix = spec.matrix()
    assert matrix.shape == (7, 7)
    np.testing.assert_allclose(matrix, matrix.T)
    np.testing.assert_allclose(np.diag(matrix, 1), np.ones(6))


def test_toeplitz_spec_read_only():
    spec = spectrum.ToeplitzSpec([1.0, 0.5])
    with pytest.raises(ValueError):
        spec.first_row[0] = 3.0


@pytest.mark.parametrize('row', [[0.0, 1.0], [-1.0], []])
def test_toeplitz_spec_invalid(row):
    with pytest.raises(ValueError):
        spectrum.ToeplitzSpec(row)


def test_identity():
    result = spectrum.spectrum(spectrum.ToeplitzSpec([1, 0, 0, 0]))
    np.testing.assert_allclose(result.eigenvalues, [1, 1, 1, 1])
    assert result.sum_lambda == pytest.approx(4)
    assert result.sum_lambda_sq == pytest.approx(4)


def test_single_increment():
    result = spectrum.spectrum(spectrum.ToeplitzSpec([2.5]))
    np.testing.assert_array_equal(result.eigenvalues, [2.5])
    assert result.lambda_bar == 5.0


def test_negative_eigenvalue():
    with pytest.raises(PositiveDefiniteError, match='negative'):
        spectrum.spectrum(spectrum.ToeplitzSpec([1, 2]))


def test_singular():
    with pytest.raises(PositiveDefiniteError):
        spectrum.spectrum(spectrum.ToeplitzSpec([1, 1, 1]))


def test_positive_definite_error_is_value_error():
    assert issubclass(PositiveDefiniteError, ValueError)
    assert issubclass(EigenSolverError, RuntimeError)


def test_bm_tridiagonal_eigenvalues(bm_spectrum):
    # 2 + 2 cos(k pi / 8), k = 1, ..., 7
    k = np.arange(7, 0, -1)
    np.testing.assert_allclose(bm_spectrum.eigenvalues,
                               2 + 2 * np.cos(k * np.pi / 8), rtol=1e-12)
    assert bm_spectrum.lambda_min == pytest.approx(
        2 + 2 * np.cos(7 * np.pi / 8))
    assert bm_spectrum.lambda_max == pytest.approx(2 + 2 * np.cos(np.pi / 8))
    assert bm_spectrum.lambda_bar == pytest.approx(2 * bm_spectrum.lambda_max)


def test_eigenvalues_sorted_read_only(fbm_super):
    result = spectrum.model_spectrum(fbm_super, models.LagSpec(40, 3))
    assert np.all(np.diff(result.eigenvalues) >= 0)
    with pytest.raises(ValueError):
        result.eigenvalues[0] = 1.0


def test_spectrum_summary_sorts():
    summary = spectrum.SpectrumSummary([3.0, 1.0, 2.0])
    np.testing.assert_array_equal(summary.eigenvalues, [1.0, 2.0, 3.0])
    assert summary.m == 3


def test_spectrum_summary_rejects_nonpositive():
    with pytest.raises(PositiveDefiniteError):
        spectrum.SpectrumSummary([0.0, 1.0])


@pytest.mark.parametrize('model, lag', spectrum_grid())
def test_trace_identities(model, lag):
    result = spectrum.model_spectrum(model, lag)
    sigma0 = models.increment_mean_square(model, lag.tau)
    assert result.sum_lambda == pytest.approx(lag.m * sigma0, rel=1e-10)
    assert result.sum_lambda_sq == pytest.approx(
        spectrum.sum_lambda_sq_closed_form(model, lag), rel=1e-10)


def test_sum_lambda_sq_bm_example(bm, bm_lag):
    # 7 * 2**2 on the diagonal plus 12 off-diagonal ones
    assert spectrum.sum_lambda_sq_closed_form(bm, bm_lag) == pytest.approx(40)


@pytest.mark.parametrize('n, tau', [(5, 3), (3, 2), (20, 19), (12, 6)])
def test_sum_lambda_sq_bm_short_rows(n, tau):
    # rows shorter than the covariance band
    model = models.ProcessModel.bm(diffusion=0.8)
    lag = models.LagSpec(n, tau)
    expected = np.sum(spectrum.build_toeplitz(model, lag).matrix() ** 2)
    assert spectrum.sum_lambda_sq_closed_form(model, lag) == pytest.approx(
        expected, rel=1e-12)


@pytest.mark.parametrize('n', [2, 3, 10, 33])
def test_sum_lambda_sq_fbm_half(n):
    model = models.ProcessModel.fbm(0.5)
    assert spectrum.sum_lambda_sq_closed_form(
        model, models.LagSpec(n, 1)) == pytest.approx(n - 1)


@pytest.mark.parametrize('hurst', [0.1, 0.2, 0.3, 0.4, 0.5,
                                   0.6, 0.7, 0.8, 0.9])
def test_sum_lambda_sq_fbm(hurst):
    model = models.ProcessModel.fbm(hurst, diffusion=1.3)
    lag = models.LagSpec(30, 4)
    result = spectrum.model_spectrum(model, lag)
    assert spectrum.sum_lambda_sq_closed_form(model, lag) == pytest.approx(
        result.sum_lambda_sq, rel=1e-10)


@pytest.mark.parametrize('model, lag', spectrum_grid())
def test_fbm_half_spectrum_equals_bm(model, lag):
    if model.kind is models.ProcessKind.FBM and model.hurst == 0.5:
        bm_result = spectrum.model_spectrum(models.ProcessModel.bm(), lag)
        np.testing.assert_allclose(
            spectrum.model_spectrum(model, lag).eigenvalues,
            bm_result.eigenvalues, rtol=1e-10, atol=1e-12
        )


def test_sandwich_bm_example(bm, bm_lag, bm_spectrum):
    result = spectrum.max_eigenvalue_sandwich(bm, bm_lag)
    assert result.lower == pytest.approx(3)
    assert result.upper == pytest.approx(4)
    assert result.guaranteed
    assert result.lower <= bm_spectrum.lambda_max <= result.upper


@pytest.mark.parametrize('n, tau', [(9, 2), (30, 4), (64, 7), (100, 1)])
def test_sandwich_bm_closed_form(n, tau):
    model = models.ProcessModel.bm(diffusion=0.7)
    lag = models.LagSpec(n, tau)
    generic = spectrum.max_eigenvalue_sandwich(model, lag)
    closed = spectrum.bm_sandwich_closed_form(model, lag)
    assert generic.lower == pytest.approx(closed.lower, rel=1e-12)
    assert generic.upper == pytest.approx(closed.upper, rel=1e-12)


def test_sandwich_bm_closed_form_short():
    with pytest.raises(ValueError, match='2 tau - 1'):
        spectrum.bm_sandwich_closed_form(models.ProcessModel.bm(),
                                         models.LagSpec(6, 3))


def test_sandwich_bm_closed_form_kind(fbm_super, bm_lag):
    with pytest.raises(ValueError, match='BM'):
        spectrum.bm_sandwich_closed_form(fbm_super, bm_lag)


@pytest.mark.parametrize('model, lag', spectrum_grid())
def test_sandwich_contains_lambda_max(model, lag, record_property):
    lambda_max = spectrum.model_spectrum(model, lag).lambda_max
    tol = 1e-10 * lambda_max
    if model.hurst_index >= 0.5:
        result = spectrum.max_eigenvalue_sandwich(model, lag)
        assert result.lower - tol <= lambda_max <= result.upper + tol
        return
    with pytest.warns(SandwichWarning):
        result = spectrum.max_eigenvalue_sandwich(model, lag)
    assert not result.guaranteed
    # reported, not required, for negative covariances
    record_property('sandwich_holds', bool(
        result.lower - tol <= lambda_max <= result.upper + tol))
    # the mean row sum is a Rayleigh quotient
    row_sums = spectrum.build_toeplitz(model, lag).matrix().sum(axis=1)
    assert np.mean(row_sums) <= lambda_max + tol


def test_sandwich_even_m_includes_middle_term(fbm_super):
    # M = 2: both rows sum to sigma(0) + sigma(1) = lambda_max
    lag = models.LagSpec(3, 1)
    result = spectrum.max_eigenvalue_sandwich(fbm_super, lag)
    lambda_max = spectrum.model_spectrum(fbm_super, lag).lambda_max
    assert result.upper == pytest.approx(lambda_max)
    assert result.lower == pytest.approx(lambda_max)


def test_sandwich_single_increment(bm):
    result = spectrum.max_eigenvalue_sandwich(bm, models.LagSpec(4, 3))
    assert result == (3.0, 3.0, True)


def test_sandwich_subdiffusive_warns(fbm_sub):
    with pytest.warns(SandwichWarning):
        result = spectrum.max_eigenvalue_sandwich(fbm_sub,
                                                  models.LagSpec(16, 1))
    assert not result.guaranteed


def test_sandwich_superdiffusive_silent(fbm_super):
    with warnings.catch_warnings():
        warnings.simplefilter('error')
        spectrum.max_eigenvalue_sandwich(fbm_super, models.LagSpec(16, 1))


@pytest.mark.parametrize('n', [3, 4, 9, 10, 64, 65])
def test_fbm_sandwich_closed_form(fbm_super, n):
    lag = models.LagSpec(n, 1)
    generic = spectrum.max_eigenvalue_sandwich(fbm_super, lag)
    closed = spectrum.fbm_sandwich_closed_form(fbm_super, lag)
    assert closed.lower == pytest.approx(generic.lower, rel=1e-12)
    assert closed.upper == pytest.approx(generic.upper, rel=1e-12)
    assert closed.guaranteed
    lambda_max = spectrum.model_spectrum(fbm_super, lag).lambda_max
    assert closed.lower <= lambda_max * (1 + 1e-10)
    assert lambda_max <= closed.upper * (1 + 1e-10)


def test_fbm_sandwich_closed_form_requires_unit_lag(fbm_super):
    with pytest.raises(ValueError, match='tau = 1'):
        spectrum.fbm_sandwich_closed_form(fbm_super, models.LagSpec(10, 2))
