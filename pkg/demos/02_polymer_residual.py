"""Residual P = |psi|^2 - |M|^2 between lattice and continuum shutters.

The first-order asymptotic model (continuum term plus a 1/sqrt(tau)
correction) and the exact lattice sum give different maxima over
tau in [10, 400] at mu = 10, rho = 0.3.
"""

import numpy as np

from polydit.moshinsky import moshinsky_density, xi_of
from polydit.shutter import density
from polydit.transition import asymptotic_moshinsky, residual_max

taus = np.arange(10.0, 400.0, 0.05)
p = density(10, 0.3, taus) - moshinsky_density(xi_of(10, 0.3, taus))
i = int(np.argmax(np.abs(p)))
print(f"exact residual: max |P| = {abs(p[i]):.6f} at tau = {taus[i]:.2f}")

t1, p1 = residual_max(10, 0.3, (10.0, 400.0), model="first_order")
print(f"first-order model: max |P| = {abs(p1):.6f} at tau = {t1:.2f}")

rep = asymptotic_moshinsky(10, 0.3, 100.0)
print(f"tau=100: main={rep.main_term:.5f} correction={rep.correction:.5f} exact={rep.exact:.5f}")
