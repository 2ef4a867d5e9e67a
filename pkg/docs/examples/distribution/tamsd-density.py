"""
TAMSD Density
=============

Comparing the exact TAMSD density with a histogram of simulated
trajectories.
"""

# %%
# For a short FBM trajectory the TAMSD is far from Gaussian. Its exact
# density follows from the spectrum of the increment covariance matrix
# via :py:func:`tamsdld.distribution.build_series`.

from tamsdld import distribution, models, simulate, spectrum
import matplotlib.pyplot as plt
import numpy as np

model = models.ProcessModel.fbm(0.3)
lag = models.LagSpec(12, 3)
series = distribution.build_series(spectrum.model_spectrum(model, lag))
print(f"{series.k} terms, mass deficit {series.mass_deficit:.1e}")

# %%
# :py:func:`tamsdld.simulate.sample_tamsd` samples trajectories exactly,
# so their TAMSD histogram should match the density.

values = simulate.sample_tamsd(model, lag, 50000, master_seed=1)
x = np.linspace(1e-3, np.quantile(values, 0.999), 400)
plt.hist(values, bins=100, density=True, alpha=0.5, label='simulated')
plt.plot(x, distribution.tamsd_pdf(series, x), label='exact')
plt.axvline(models.increment_mean_square(model, lag.tau), color='k',
            linestyle='--', label=r'$\sigma_\tau(0)$')
plt.xlabel(r'$M_N(\tau)$')
plt.legend()
plt.show()
