"""
A Painleve VI family from the concentric pencil
===============================================

With ``a = b + 1`` and ``s = a - t - 1`` the curve ``x = s^2, y = -s`` solves
Painleve VI with constants (0, 0, 0, 1/2); its Okamoto image ``y = s`` solves
the equation with (1/8, -1/8, 1/8, 3/8).
"""

# %%
from fractions import Fraction as Q

from poncelet_lab.painleve import (OKAMOTO_CONSTANTS, PICARD_CONSTANTS, PVIConstants, family_sample,
                                   identity_ratio, okamoto_transform, picard_point, pvi_residual)

# %% Exact residuals on rational points
for t in (Q(1, 3), Q(3, 4), Q(7, 5)):
    print(t, pvi_residual(PICARD_CONSTANTS, family_sample("picard", 3, t)),
          pvi_residual(OKAMOTO_CONSTANTS, family_sample("okamoto", 3, t)))

# %% The transform flips the sign of y0 because the ratio below is -2 everywhere
x, y0, y0p = picard_point(3, Q(1, 3))
print("ratio", identity_ratio(x, y0, y0p), " y0 ->", okamoto_transform(x, y0, y0p), "from", y0)

# %% Wrong constants leave a visible residual
print(pvi_residual(PVIConstants(Q(1, 8), Q(-1, 8), Q(1, 8), Q(1, 2)), family_sample("okamoto", 3, Q(1, 3))))
