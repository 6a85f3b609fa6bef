"""
Blaschke ellipses
=================

Solutions of ``B(z) = lambda`` on the unit circle are the vertices of Poncelet
polygons.  For degree 3 the caustic has foci at the non-zero zeros; for a
decomposable degree-4 product it is again an ellipse, and the pencil engine
finds the same conic.
"""

# %%
import numpy as np

from poncelet_lab.blaschke import (BlaschkeProduct, blaschke_caustic, blaschke_solve, polygon_tangency,
                                   solve_conjugating_c, unique_caustic_crosscheck)

a, b = 0.3, -0.2
print("c with B_c(a) = b:", solve_conjugating_c(a, b), "exact:", solve_conjugating_c("3/10", "-1/5", exact=True))

# %% Sweep lambda around the circle and measure tangency of every side
for prod in (BlaschkeProduct.degree3(a, b), BlaschkeProduct.decomposable4(a, b)):
    caustic = blaschke_caustic(prod)
    worst = max(polygon_tangency(blaschke_solve(prod, lam), caustic)
                for lam in np.exp(2j * np.pi * np.arange(24) / 24))
    print(f"degree {prod.degree}: worst side tangency {worst:.1e}")

# %% Same ellipse from the Cayley side; there is never a hyperbola quadrilateral caustic
for k in (3, 4):
    rep = unique_caustic_crosscheck(k, a, b)
    print(k, rep.kind.value, f"axis {rep.major_axis_cayley:.12f} vs {rep.major_axis_blaschke:.12f}",
          "hyperbola roots:", rep.hyperbola_roots)
