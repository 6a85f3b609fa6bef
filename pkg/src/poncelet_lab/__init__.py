"""Poncelet polygons in a circle with caustics from a confocal pencil."""
__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .geometry import (BoundaryCircle, ConfocalPencil, Conic, ConicKind, Line, confocal_conic,
                       cross_ratio, ellipse_from_foci, foci, tangents_from_point)
from .ratfunc import RationalFunctionT
from .roots import RealRoot, real_roots
from .cayley import (CayleySeries, Domain, IDENTICALLY_ZERO, cayley_condition, cayley_hankel,
                     closed_forms, pencil_cubic, solve_caustics, sqrt_series)
from .dynamics import PeriodReport, detect_period, poncelet_step, rotation_number, trajectory
from .classifier import (CertificateAllT, IsoTag, Refutation, certify_isoperiodic, classify,
                         explicit_quadrilateral, locate_t0, noisorot_case_analysis, rho_profile)
from .blaschke import (BlaschkeProduct, blaschke_caustic, blaschke_factor, blaschke_solve,
                       mobius_identities_check, outside_focus_search, solve_conjugating_c,
                       unique_caustic_crosscheck)
from .painleve import (OKAMOTO_CONSTANTS, PICARD_CONSTANTS, PVIConstants, SolutionSample,
                       identity_ratio, okamoto_transform, picard_point, pvi_residual, residual_scan)
from .svg import SceneSpec, render_svg
