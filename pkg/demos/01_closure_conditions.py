"""
Closure conditions in a confocal pencil
=======================================

Which members of ``x^2/(a-t) + y^2/(b-t) = 1`` carry closed ``k``-gons
inscribed in a unit circle?  The Hankel determinants answer this exactly in
``t``; the geometric map confirms each root.
"""

# %%
from fractions import Fraction as Q

import numpy as np

from poncelet_lab.cayley import Domain, cayley_condition, closed_forms, solve_caustics
from poncelet_lab.dynamics import default_start, detect_period, trajectory
from poncelet_lab.geometry import BoundaryCircle, ConfocalPencil, confocal_conic

circle = BoundaryCircle(Q(1, 5), Q(-1, 10))
pencil = ConfocalPencil(Q(5, 2), Q(3, 4))

# %% The k = 3 condition is linear in t, so triangles live on exactly one member.
print("C_2(t) =", cayley_condition(3, circle, pencil))
cf = closed_forms(circle, pencil)
print("t3 =", cf.t3, " alpha4, beta4 =", cf.alpha4, cf.beta4)

# %% Roots for k = 3..6, with the closure gap of the orbit they predict
for k in range(3, 7):
    for r in solve_caustics(k, circle, pencil, Domain.REAL_CONICS):
        caustic = confocal_conic(pencil, r.exact if r.exact is not None else r.t)
        try:
            tr = trajectory(default_start(caustic, circle), caustic, circle, k)
        except Exception as exc:  # the member may not be visible from the circle
            print(f"k={k} t={r.t:+.6f} {r.kind.value:9s} no real orbit ({type(exc).__name__})")
            continue
        gap = np.hypot(*(tr.vertices[-1] - tr.vertices[0]))
        print(f"k={k} t={r.t:+.6f} {r.kind.value:9s} gap={gap:.1e} winding={round(tr.angles[-1] - tr.angles[0])}")

# %% A member between two roots does not close
t = Q(0)
caustic = confocal_conic(pencil, t)
tr = trajectory(default_start(caustic, circle), caustic, circle, 50)
print("t = 0 closes?", detect_period(tr, 1e-9))
