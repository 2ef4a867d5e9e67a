"""Tests for process models and increment covariances."""
import numpy as np
import pytest
from tamsdld import models


def test_bm_defaults():
    model = models.ProcessModel.bm()
    assert model.kind is models.ProcessKind.BM
    assert model.diffusion == 0.5
    assert model.hurst is None
    assert model.hurst_index == 0.5
    assert model.exponent == 1.0


def test_kind_from_string():
    model = models.ProcessModel('fbm', 1.0, 0.3)
    assert model.kind is models.ProcessKind.FBM
    assert model.exponent == pytest.approx(0.6)


def test_bm_accepts_half_hurst():
    assert models.ProcessModel('bm', 0.5, 0.5) == models.ProcessModel.bm()


@pytest.mark.parametrize('hurst', [0.0, 1.0, -0.2, 1.5])
def test_fbm_hurst_domain(hurst):
    with pytest.raises(ValueError, match='hurst'):
        models.ProcessModel.fbm(hurst)


def test_fbm_requires_hurst():
    with pytest.raises(ValueError, match='hurst must be given'):
        models.ProcessModel('fbm')


def test_bm_rejects_hurst():
    with pytest.raises(ValueError, match='H = 0.5'):
        models.ProcessModel('bm', 0.5, 0.7)


@pytest.mark.parametrize('diffusion', [0.0, -1.0])
def test_diffusion_positive(diffusion):
    with pytest.raises(ValueError, match='diffusion'):
        models.ProcessModel.bm(diffusion)


def test_unknown_kind():
    with pytest.raises(ValueError):
        models.ProcessModel('levy')


def test_lag_spec():
    lag = models.LagSpec(9, 2)
    assert lag.m == 7


@pytest.mark.parametrize('n, tau', [(9, 9), (9, 0), (1, 1), (9, 12)])
def test_lag_spec_invalid(n, tau):
    with pytest.raises(ValueError):
        models.LagSpec(n, tau)


def test_lag_spec_integer():
    with pytest.raises(ValueError, match='must be an integer'):
        models.LagSpec(9.0, 2)


def test_increment_autocov_bm():
    model = models.ProcessModel.bm()
    np.testing.assert_allclose(
        models.increment_autocov(model, 2, np.arange(5)),
        [2.0, 1.0, 0.0, 0.0, 0.0]
    )


def test_increment_autocov_bm_diffusion():
    model = models.ProcessModel.bm(diffusion=2.0)
    np.testing.assert_allclose(
        models.increment_autocov(model, 3, np.arange(4)),
        [12.0, 8.0, 4.0, 0.0]
    )


def test_increment_autocov_scalar():
    model = models.ProcessModel.fbm(0.7)
    value = models.increment_autocov(model, 1, 1)
    assert isinstance(value, float)
    assert value == pytest.approx(0.5 * (2**1.4 - 2))


@pytest.mark.parametrize('tau', [1, 2, 5])
def test_fbm_half_equals_bm(tau):
    j = np.arange(20)
    np.testing.assert_allclose(
        models.increment_autocov(models.ProcessModel.fbm(0.5), tau, j),
        models.increment_autocov(models.ProcessModel.bm(), tau, j),
        rtol=1e-12, atol=1e-12
    )


def test_fbm_sign_of_covariance():
    j = np.arange(1, 30)
    # long-range dependence: positive for H > 1/2, negative for H < 1/2
    assert np.all(models.increment_autocov(
        models.ProcessModel.fbm(0.7), 1, j) > 0)
    assert np.all(models.increment_autocov(
        models.ProcessModel.fbm(0.3), 1, j) < 0)


def test_increment_autocov_negative_j():
    with pytest.raises(ValueError, match='j='):
        models.increment_autocov(models.ProcessModel.bm(), 2, -1)


def test_increment_autocov_invalid_tau():
    with pytest.raises(ValueError, match='tau'):
        models.increment_autocov(models.ProcessModel.bm(), 0, 1)


@pytest.mark.parametrize('hurst, diffusion, tau', [
    (0.7, 0.5, 8),
    (0.3, 1.5, 4),
    (0.5, 0.25, 1),
])
def test_increment_mean_square(hurst, diffusion, tau):
    model = models.ProcessModel.fbm(hurst, diffusion)
    assert models.increment_mean_square(model, tau) == pytest.approx(
        2 * diffusion * tau ** (2 * hurst))
