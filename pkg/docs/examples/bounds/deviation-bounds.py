"""
Deviation Bounds
================

Comparing the two-sided TAMSD bound with Monte Carlo tail estimates.
"""

# %%
# :py:func:`tamsdld.bounds.tamsd_deviation_bound` bounds
# :math:`P(|M_N(\tau) - \sigma_\tau(0)| > \epsilon)` using the sum of
# squared eigenvalues and the largest eigenvalue of the increment
# covariance matrix.

from tamsdld import bounds, models, simulate, spectrum
import matplotlib.pyplot as plt
import numpy as np

model = models.ProcessModel.bm()
lag = models.LagSpec(100, 5)
eps = np.linspace(0.5, 8, 40)
result = bounds.tamsd_deviation_bound(spectrum.model_spectrum(model, lag),
                                      lag, eps)

# %%
# The bound holds for every trajectory length, so Monte Carlo estimates
# must lie below it. :py:func:`tamsdld.simulate.tail_estimate` adds an
# exact binomial confidence interval to each estimate.

values = simulate.sample_tamsd(model, lag, 20000, master_seed=7, threads=0)
center = models.increment_mean_square(model, lag.tau)
estimates = [simulate.tail_estimate(values, center, e, 'tamsd_two_sided')
             for e in eps]
p_hat = np.array([e.p_hat for e in estimates])
ci_high = np.array([e.ci_high for e in estimates])

plt.semilogy(eps, np.minimum(result.bound, 1), label='bound')
plt.semilogy(eps, p_hat, 'o', label='Monte Carlo')
plt.semilogy(eps, ci_high, ':', label='99% upper limit')
plt.xlabel(r'$\epsilon$')
plt.ylabel('tail probability')
plt.legend()
plt.show()

# %%
# For BM the sum of squared eigenvalues is a polynomial in ``N`` and
# ``tau``, and the largest eigenvalue can be replaced by its row-sum
# upper bound, so the bound can be evaluated without an eigensolver.

loose = bounds.bm_deviation_bound(model, lag, eps, lambda_max='sandwich')
assert np.all(loose.bound >= result.bound * (1 - 1e-12))
