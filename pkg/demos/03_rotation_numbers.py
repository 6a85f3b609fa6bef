"""
Rotation number across a pencil
===============================

Between the member touching the circle from inside (rho -> 0) and the focal
segment (rho -> 1/2) the rotation number grows.  The iso-periodic pencils are
flat at 1/2.
"""

# %%
from fractions import Fraction as Q

import numpy as np

from poncelet_lab.classifier import locate_t0, rho_profile
from poncelet_lab.geometry import BoundaryCircle, ConfocalPencil

circle = BoundaryCircle(Q(1, 5), Q(1, 10))
pencil = ConfocalPencil(Q(1, 2), Q(1, 5))
t0 = locate_t0(circle, pencil)
print(f"t0 = {t0.value:.15f} (bracket width {float(t0.hi - t0.lo):.0e})")

# %% Grid points crowd both ends logarithmically; the outermost pair sits 1e-60 from the ends.
prof = rho_profile(circle, pencil, grid_size=24, n_steps=20_000)
for t, rho, err in prof.grid[::3] + [prof.grid[-1]]:
    print(f"t={float(t):+.12f}  rho={rho:.6f} +- {err:.0e}")
print("verdict:", prof.monotone_verdict.value, "plateaus:", prof.plateaus)

# %% An iso-periodic pencil: every sampled member has rho = 1/2
iso = rho_profile(BoundaryCircle.from_squares(0, Q(1, 2)), ConfocalPencil(Q(3, 2), 1),
                  grid_size=12, n_steps=20_000, strict=False)
print("max |rho - 1/2| =", np.max(np.abs(iso.rhos - 0.5)))
