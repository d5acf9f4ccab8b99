"""Diffraction widths read from the Cornu spiral and from density crossings."""

import warnings

import numpy as np

from polydit import crossings, profile_space, profile_time
from polydit.moshinsky import space_width, time_width
from polydit.spiral import cornu_circle_intersections, cornu_circle_width

a, b = cornu_circle_intersections()
print(f"Cornu spiral meets the classical circle at xi = {a:.5f}, {b:.5f}")
print(f"arc length between them: {cornu_circle_width():.6f}")

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    formula = time_width(10, 0.3)
prof = profile_time(10, 0.3, np.arange(0.0, 400.0, 0.05))
print(f"time width at mu=10, rho=0.3: formula {formula:.2f}, "
      f"measured {crossings(prof).width:.2f} (raw), {crossings(prof, hysteresis=0.05).width:.2f} (hysteresis 0.05)")

sp = crossings(profile_space(250.0, 0.3, (-50, 150)))
print(f"space width at tau=250: formula {space_width(250.0):.2f}, measured {sp.width:.2f}")
