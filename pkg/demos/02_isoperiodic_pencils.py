"""
Pencils in which every member is a quadrilateral caustic
========================================================

Three configurations make the k = 4 condition vanish identically.  Here we
certify each, look at the orbits, and check that no other k behaves this way.
"""

# %%
from fractions import Fraction as Q

from poncelet_lab.classifier import certify_isoperiodic, classify, explicit_quadrilateral
from poncelet_lab.dynamics import default_start, detect_period, trajectory
from poncelet_lab.geometry import BoundaryCircle, ConfocalPencil, confocal_conic

examples = {
    "foci on the circle": (BoundaryCircle.from_squares(0, Q(1, 2)), ConfocalPencil(Q(3, 2), 1)),
    "foci mirrored in the circle": (BoundaryCircle.from_squares(2, 0), ConfocalPencil(2, 1)),
    "concentric, centre on the circle": (BoundaryCircle(Q(3, 5), Q(4, 5)), ConfocalPencil(1, 1, concentric=True)),
}

# %% Class, certificate for k = 4, and the verdict for the other small k
for name, (g, p) in examples.items():
    print(name, "->", classify(g, p).tag.value)
    for k in range(3, 9):
        print(f"   k={k}: {certify_isoperiodic(k, g, p)}")

# %% Orbits close after four steps but wind twice around the circle.
# A quadrilateral that closes after 4 steps also closes after 8, which is why k = 8 is certified too.
g, p = examples["foci on the circle"]
for t in (Q(-1), Q(0), Q(1, 2), Q(99, 100)):
    c = confocal_conic(p, t)
    rep = detect_period(trajectory(default_start(c, g), c, g, 9), 1e-8)
    print(f"t={float(t):+.2f}: k={rep.k}, p={rep.p}, distinct vertices={rep.distinct_vertices}")

# %% The ruler-and-compass quadrilateral N P N Q
q = explicit_quadrilateral(g, p, Q(1, 2))
print(q.branch, q.vertices.round(6), "tangency", q.tangency_residuals)
g2, p2 = examples["foci mirrored in the circle"]
print("cross ratio on the axis:", explicit_quadrilateral(g2, p2, 0).cross_ratio)
