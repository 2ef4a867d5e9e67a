"""Common fixtures for tamsdld tests."""
import pytest

from tamsdld import models, spectrum


def pytest_addoption(parser):
    parser.addoption(
        "--runslow", action="store_true", default=False, help="run slow tests"
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: mark test as slow to run")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        # --runslow given in cli: do not skip slow tests
        return
    skip_slow = pytest.mark.skip(reason="need --runslow option to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def bm():
    """Brownian motion with D = 1/2."""
    return models.ProcessModel.bm()


@pytest.fixture
def fbm_super():
    """Superdiffusive FBM, H = 0.7."""
    return models.ProcessModel.fbm(0.7)


@pytest.fixture
def fbm_sub():
    """Subdiffusive FBM, H = 0.3."""
    return models.ProcessModel.fbm(0.3)


@pytest.fixture
def bm_lag():
    """N = 9, tau = 2: a 7 x 7 tridiagonal covariance for BM."""
    return models.LagSpec(9, 2)


@pytest.fixture
def bm_spectrum(bm, bm_lag):
    return spectrum.model_spectrum(bm, bm_lag)


def spectrum_grid():
    """(model, lag) pairs over N, tau and H used by identity checks."""
    hursts = [None, 0.3, 0.5, 0.7]
    cases = []
    for n in (16, 64, 257):
        for tau in (1, 2, 5):
            for hurst in hursts:
                if hurst is None:
                    model = models.ProcessModel.bm()
                else:
                    model = models.ProcessModel.fbm(hurst)
                cases.append((model, models.LagSpec(n, tau)))
    return cases
