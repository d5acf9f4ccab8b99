"""Time profiles at a fixed site for a beam released at tau = 0.

At high energy (rho = 2.5) the lattice density rises through the classical
level 1 and rings; near the band edge (rho = 3.1) the group velocity
sin(2 rho) is tiny and the density never reaches 1 in the window.
"""

import numpy as np

from polydit import crossings, density, profile_time
from polydit.moshinsky import moshinsky_density, xi_of
from polydit.spiral import NoCrossingError

taus = np.arange(0.0, 100.0, 0.05)

for rho in (2.5, 3.1):
    prof = profile_time(10, rho, taus)
    try:
        rep = crossings(prof)
        print(f"rho={rho}: first crossings at tau={rep.first:.3f}, {rep.second:.3f}; width {rep.width:.3f}")
    except NoCrossingError as exc:
        print(f"rho={rho}: {exc}")

# pre-arrival suppression and the continuum comparison on a coarse grid
print(f"density(10, 2.5, 4) = {density(10, 2.5, 4.0):.4e}")
for t in (10.0, 30.0, 60.0):
    print(f"tau={t:5.1f}  polymer={density(10, 0.3, t):.5f}  continuum={moshinsky_density(xi_of(10, 0.3, t)):.5f}")
