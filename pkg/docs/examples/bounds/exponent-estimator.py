"""
Exponent Estimator
==================

Tail bound for the anomalous diffusion exponent estimated from a
single trajectory.
"""

# %%
# With :math:`D = 1/2` the exponent estimate
# :math:`\hat\beta = \ln M_N(\tau)/\ln\tau` overestimates
# :math:`\beta = 2H` by more than :math:`\epsilon` with probability at
# most :py:func:`tamsdld.bounds.beta_estimator_bound`. The bound
# tightens as the trajectory grows.

from tamsdld import bounds, models
import matplotlib.pyplot as plt
import numpy as np

model = models.ProcessModel.fbm(0.7)
eps = np.linspace(0.02, 0.5, 50)
for n in (256, 1024, 4096):
    result = bounds.beta_estimator_bound(model, models.LagSpec(n, 4), eps)
    plt.semilogy(eps, result.bound, label=f'N = {n}')
plt.xlabel(r'$\epsilon$')
plt.ylabel(r'bound on $P(\hat\beta - \beta > \epsilon)$')
plt.legend()
plt.show()
