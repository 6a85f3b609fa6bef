"""End-to-end checks of the library's theorems on random instances.

Each ``check_*`` function draws its instances from a seeded generator and
returns a :class:`Check`.  The acceptance suite and ``poncelet verify-all``
both run them.
"""
from __future__ import annotations

import math
import tempfile
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .blaschke import mobius_bullets, mobius_identities_check, solve_conjugating_c, unique_caustic_crosscheck
from .cayley import Domain, IDENTICALLY_ZERO, closed_forms, solve_caustics
from .classifier import (CertificateAllT, IsoTag, Refutation, _poly5_identity, certify_isoperiodic,
                         classify, foci_inside, locate_t0, rho_profile)
from .dynamics import detect_period, orbit_extended, trajectory
from .errors import PonceletError
from .geometry import BoundaryCircle, ConfocalPencil, confocal_conic, tangents_from_point
from .painleve import (OKAMOTO_CONSTANTS, PICARD_CONSTANTS, PVIConstants, family_sample, hitchin_constants,
                       identity_ratio, okamoto_transform, picard_point, residual_scan)
from .svg import FIGURE_SCENES, render_svg

__all__ = [
    "Check",
    "random_pencil",
    "iso_pencil",
    "ISO_CLASSES",
    "painleve_grid",
    "check_closed_forms",
    "check_geometric_oracle",
    "check_isoperiodic_certificates",
    "check_no_other_k",
    "check_rotation_profiles",
    "check_blaschke_crosscheck",
    "check_mobius",
    "check_painleve",
    "check_figures",
    "ALL_CHECKS",
    "KNOWN_DEVIATIONS",
    "verify_all",
]

Q = Fraction


@dataclass
class Check:
    number: int
    title: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number}. {self.title} ({self.seconds:.1f} s)"


def _q(rng, lo: int, hi: int, den: int = 100) -> Fraction:
    return Q(int(rng.integers(lo, hi + 1)), den)


def random_pencil(rng: np.random.Generator, foci_in: bool = False):
    """A rational pencil and circle outside the iso-periodic classes.

    With ``foci_in`` the foci are drawn strictly inside the circle.
    """
    while True:
        if foci_in:
            b = _q(rng, 20, 200)
            a = b + _q(rng, 5, 40)
            g = BoundaryCircle(_q(rng, -25, 25), _q(rng, -25, 25))
        else:
            b = _q(rng, 10, 200)
            a = b + _q(rng, 5, 300)
            g = BoundaryCircle(_q(rng, -120, 120), _q(rng, -120, 120))
        p = ConfocalPencil(a, b)
        if classify(g, p).tag is not IsoTag.NOT_ISO_PERIODIC:
            continue
        cf = closed_forms(g, p)
        if cf.t3 in (a, b):
            continue
        if foci_in and not foci_inside(g, p):
            continue
        return g, p


def iso_pencil(tag: IsoTag, rng: np.random.Generator):
    """A random pencil from one of the three 4-iso-periodic classes."""
    b = _q(rng, 10, 200)
    sign = 1 if rng.integers(0, 2) else -1
    if tag is IsoTag.FOCI_ON_CIRCLE:
        c = _q(rng, 5, 95)
        return BoundaryCircle.from_squares(0, 1 - c, y_sign=sign), ConfocalPencil(b + c, b)
    if tag is IsoTag.FOCI_SYMMETRIC_TO_CIRCLE:
        c = _q(rng, 5, 300)
        return BoundaryCircle.from_squares(c + 1, 0, x_sign=sign), ConfocalPencil(b + c, b)
    if tag is IsoTag.CONCENTRIC_CENTER_ON_GAMMA:
        x0 = _q(rng, -95, 95)
        return BoundaryCircle.from_squares(x0 * x0, 1 - x0 * x0, x_sign=1 if x0 >= 0 else -1,
                                           y_sign=sign), ConfocalPencil(b, b, concentric=True)
    raise ValueError(tag)


ISO_CLASSES = (IsoTag.FOCI_ON_CIRCLE, IsoTag.FOCI_SYMMETRIC_TO_CIRCLE, IsoTag.CONCENTRIC_CENTER_ON_GAMMA)


def _real_cubic_roots(coeffs_low_first, exclude=()) -> list[float]:
    """Real roots from ``numpy.roots``, then Newton-refined in exact rational arithmetic."""
    c = [Q(x) for x in coeffs_low_first]
    while c and c[-1] == 0:
        c.pop()
    if len(c) < 2:
        return []
    r = np.roots([float(x) for x in c[::-1]])
    dc = [i * x for i, x in enumerate(c)][1:]

    def ev(cs, x):
        acc = Q(0)
        for co in reversed(cs):
            acc = acc * x + co
        return acc

    out = []
    for z in r:
        if abs(z.imag) > 1e-7 * max(1.0, abs(z)):
            continue
        x = Q(float(z.real))
        for _ in range(4):
            d = ev(dc, x)
            if d == 0:
                break
            x = Q(float(x - ev(c, x) / d))
        if all(abs(x - Q(e)) > Q(1, 10**12) for e in exclude):
            out.append(float(x))
    return sorted(out)


def check_closed_forms(rng: np.random.Generator, n: int = 100) -> Check:
    """Criterion 1: t3 exact, the k = 4 root on the linear form, k = 5 roots against the cubic."""
    bad = []
    worst5 = 0.0
    for _ in range(n):
        g, p = random_pencil(rng)
        cf = closed_forms(g, p)
        r3 = solve_caustics(3, g, p)
        if len(r3) != 1 or r3[0].exact != cf.t3:
            bad.append(("k3", g, p))
        r4 = solve_caustics(4, g, p)
        for r in r4:
            if r.exact is None or cf.alpha4 + cf.beta4 * r.exact != 0:
                bad.append(("k4", g, p))
        r5 = solve_caustics(5, g, p)
        want = _real_cubic_roots(cf.k5_poly().num_coeffs, exclude=(p.a, p.b))
        got = sorted(r.t for r in r5)
        if len(got) != len(want):
            bad.append(("k5-count", g, p, got, want))
            continue
        for x, y in zip(got, want):
            worst5 = max(worst5, abs(x - y))
    ok = not bad and worst5 < 1e-12
    return Check(1, "Cayley closed forms", ok, {"instances": n, "failures": bad[:5], "max_k5_error": worst5})


def _mp_center(g: BoundaryCircle):
    cx = g.x0 if isinstance(g.x0, Fraction) else (g.x0_sq, 1 if g.x0 >= 0 else -1)
    cy = g.y0 if isinstance(g.y0, Fraction) else (g.y0_sq, 1 if g.y0 >= 0 else -1)
    return cx, cy


def _closure(g, p, t, k, starts: int = 16):
    """Largest ``|V_k - V_0|`` over the admissible starts among ``starts`` equally spaced ones.

    ``t`` is exact and the orbit runs in 160-bit MPFR, so the gap reflects
    the member and not rounding in the float kernel (thin members amplify
    double-precision error to ~1e-7).  Closure does not depend on the start,
    so the largest gap is the honest measure of non-closure; a start at the
    edge of the visible arc can shrink the gap by an order of magnitude.
    ``None`` when no start yields a full ``k``-step trajectory.
    """
    try:
        caustic = confocal_conic(p, t)
    except (PonceletError, ValueError):
        return None
    cx, cy = _mp_center(g)
    errs = []
    for j in range(starts):
        v = g.point(j / starts)
        try:
            if not tangents_from_point(v, caustic):
                continue
            trajectory(v, caustic, g, k)  # admissibility: every step has real tangents
        except (PonceletError, ValueError):
            continue
        errs.append(orbit_extended(p.a - t, p.b - t, cx, cy, k, start=Q(j, starts), bits=160)[2])
    return max(errs) if errs else None


def check_geometric_oracle(rng: np.random.Generator, n: int = 50, ks=(3, 4, 5)) -> Check:
    """Criterion 2: Cayley roots close geometrically; perturbed members do not."""
    tested = skipped = 0
    worst_root, best_miss = 0.0, math.inf
    bad = []
    for _ in range(n):
        g, p = random_pencil(rng)
        for k in ks:
            for r in solve_caustics(k, g, p, Domain.REAL_CONICS, tol=Q(1, 10**40)):
                # keep t rational so that thin members (b - t ~ 1e-7) stay accurate
                t = r.exact if r.exact is not None else (r.root.lo + r.root.hi) / 2
                err = _closure(g, p, t, k)
                if err is None:
                    skipped += 1
                    continue
                tested += 1
                worst_root = max(worst_root, err)
                if err >= 1e-7:
                    bad.append(("root", k, str(p), str(g), float(t), err))
                for dt in (Q(-1, 1000), Q(1, 1000)):
                    e2 = _closure(g, p, t + dt, k)
                    if e2 is None:
                        continue
                    best_miss = min(best_miss, e2)
                    if e2 < 1e-4:
                        bad.append(("perturbed", k, str(p), str(g), float(t + dt), e2))
    return Check(2, "geometric closure oracle", not bad,
                 {"roots_tested": tested, "roots_inadmissible": skipped, "max_root_closure": worst_root,
                  "min_perturbed_closure": best_miss, "failures": bad[:5]})


def _random_member_start(g, p, rng, tries: int = 200):
    """A random admissible member ``t`` of an iso-periodic pencil and a start seeing it."""
    t0 = locate_t0(g, p, strict=False)
    lo, hi = float(t0.hi), float(p.b)
    for _ in range(tries):
        t = lo + (hi - lo) * rng.uniform(0.05, 0.95)
        caustic = confocal_conic(p, t)
        for _ in range(50):
            s = g.point(rng.uniform())
            if tangents_from_point(s, caustic):
                return t, s
    raise RuntimeError("no admissible member found")


def check_isoperiodic_certificates(rng: np.random.Generator, per_class: int = 20, pairs: int = 10,
                                   others: int = 200) -> Check:
    """Criterion 3: certificates for the three classes, (4, 1) periods, refutations elsewhere."""
    cert_bad, periods, refute_bad = [], {}, []
    for tag in ISO_CLASSES:
        for _ in range(per_class):
            g, p = iso_pencil(tag, rng)
            if not isinstance(certify_isoperiodic(4, g, p), CertificateAllT):
                cert_bad.append((tag.value, str(g), str(p)))
            for _ in range(pairs):
                t, s = _random_member_start(g, p, rng)
                tr = trajectory(s, confocal_conic(p, t), g, 8)
                rep = detect_period(tr, 1e-8)
                key = (tag.value, None if rep is None else (rep.k, rep.p))
                periods[key] = periods.get(key, 0) + 1
    for _ in range(others):
        g, p = random_pencil(rng)
        if not isinstance(certify_isoperiodic(4, g, p), Refutation):
            refute_bad.append((str(g), str(p)))
    literal = all(kp == (4, 1) for (_, kp) in periods)
    closes_at_4 = all(kp is not None and kp[0] == 4 for (_, kp) in periods)
    ok = not cert_bad and not refute_bad and literal
    return Check(3, "iso-periodic certificates", ok,
                 {"certificate_failures": cert_bad, "refutation_failures": refute_bad[:5],
                  "periods_observed": {f"{t}:{kp}": c for (t, kp), c in sorted(periods.items(), key=str)},
                  "all_close_at_k4": closes_at_4, "all_periods_4_1": literal})


def check_no_other_k(rng: np.random.Generator, per_class: int = 20, others: int = 200,
                     ks=(3, 5, 6, 7, 8)) -> Check:
    """Criterion 4: refutations for k != 4 on the same 260 pencils; the quintic identity on t3 = a."""
    pencils = [iso_pencil(tag, rng) for tag in ISO_CLASSES for _ in range(per_class)]
    pencils += [random_pencil(rng) for _ in range(others)]
    bad = []
    for g, p in pencils:
        for k in ks:
            if not isinstance(certify_isoperiodic(k, g, p), Refutation):
                bad.append((k, str(g), str(p)))
    branch = ident_bad = 0
    for g, p in pencils:
        if p.concentric:
            continue
        cf = closed_forms(g, p)
        if cf.t3 == p.a:
            branch += 1
            if not _poly5_identity(g, p, cf):
                ident_bad += 1
    ok = not bad and branch > 0 and ident_bad == 0
    return Check(4, "no iso-periodic pencils for k != 4", ok,
                 {"pencils": len(pencils), "failures": bad[:5], "t3_eq_a_instances": branch,
                  "identity_failures": ident_bad})


def check_rotation_profiles(rng: np.random.Generator, generic: int = 5, grid: int = 64,
                            steps: int = 100_000) -> Check:
    """Criterion 5: rho limits 0 and 1/2 with monotone growth; iso pencils sit at 1/2."""
    rows = []
    ok = True
    for _ in range(generic):
        g, p = random_pencil(rng, foci_in=True)
        pr = rho_profile(g, p, grid_size=grid, n_steps=steps)
        r = pr.rhos
        good = r[0] < 0.02 and r[-1] > 0.48 and not pr.violations
        ok &= bool(good)
        rows.append({"pencil": f"a={p.a}, b={p.b}, x0={g.x0}, y0={g.y0}", "first": float(r[0]),
                     "last": float(r[-1]), "verdict": pr.monotone_verdict.value, "ok": bool(good)})
    iso = []
    for tag in ISO_CLASSES:
        g, p = iso_pencil(tag, rng)
        pr = rho_profile(g, p, grid_size=grid, n_steps=steps, strict=False)
        dev = float(np.max(np.abs(pr.rhos - 0.5)))
        ok &= dev <= 1e-5
        iso.append({"class": tag.value, "max_deviation": dev})
    return Check(5, "rotation-number limits and monotonicity", bool(ok), {"generic": rows, "isoperiodic": iso})


def check_blaschke_crosscheck(rng: np.random.Generator, n: int = 100) -> Check:
    """Criterion 6: Blaschke ellipses against the unique Cayley caustic for k = 3 and 4."""
    bad, worst, hyper = [], 0.0, 0
    for _ in range(n):
        a, b = float(_q(rng, -95, 95)), float(_q(rng, -95, 95))
        for k in (3, 4):
            rep = unique_caustic_crosscheck(k, a, b)
            hyper += len(rep.hyperbola_roots)
            worst = max(worst, rep.axis_error, rep.foci_error)
            if not rep.ok():
                bad.append((k, a, b, rep))
    return Check(6, "Blaschke / Cayley cross-check", not bad,
                 {"pairs": n, "max_error": worst, "hyperbola_k4_roots": hyper, "failures": bad[:5]})


def check_mobius(rng: np.random.Generator, n: int = 10_000) -> Check:
    """Criterion 7: the four mapping properties, the two-point identity, the conjugating c."""
    bullets = mobius_bullets(n, rng)
    worst = 0.0
    for _ in range(n):
        z, w, v = (0.95 * math.sqrt(rng.uniform()) * complex(math.cos(x), math.sin(x))
                   for x in rng.uniform(0, 2 * math.pi, 3))
        res = mobius_identities_check(z, w, v)
        worst = max(worst, *res.values())
    c = solve_conjugating_c(Q(3, 10), Q(-1, 5), exact=True)
    ok = all(v == 0 for v in bullets.values()) and worst < 1e-13 and c.re == Q(5, 47) and c.im == 0
    return Check(7, "Mobius lemma suite", ok,
                 {"bullet_violations": bullets, "max_identity_residual": worst, "c": f"{c.re}+{c.im}i"})


def painleve_grid(a=3) -> list[float]:
    """50 interior points of ``(0, 1.9)`` for ``a = 3``; none hits the singular member ``t = 1``."""
    return [float(t) for t in np.linspace(0.0, 1.9, 52)[1:-1]]


def check_painleve(a=3) -> Check:
    """Criterion 8: residual scans, the exact -2 ratio, the involution, Hitchin and a negative control."""
    grid = painleve_grid(a)
    d = {
        "picard": residual_scan(PICARD_CONSTANTS, "picard", a, grid),
        "okamoto": residual_scan(OKAMOTO_CONSTANTS, "okamoto", a, grid),
    }
    ratios = {identity_ratio(*picard_point(Q(a), Q(j, 20))) for j in range(1, 38) if j != 20}
    d["identity_ratio_values"] = sorted(str(r) for r in ratios)
    # the involution is checked in exact arithmetic on the grid's binary values;
    # the float round trip loses digits next to the pole of the transform at x = 1
    inv = inv_float = 0.0
    for t in grid:
        x, y0, y0p = picard_point(Q(a), Q(t))
        y = okamoto_transform(x, y0, y0p)
        inv = max(inv, abs(float(okamoto_transform(x, y, 1 / (2 * y)) - y0)))
        xf, y0f, y0pf = picard_point(float(a), t)
        yf = okamoto_transform(xf, y0f, y0pf)
        inv_float = max(inv_float, abs(okamoto_transform(xf, yf, 1 / (2 * yf)) - y0f))
    d["involution_error"] = inv
    d["involution_error_float"] = inv_float
    hitchin = [hitchin_constants(al, ga) for al in (Q(-1, 4), Q(0), Q(1, 3)) for ga in (Q(-1, 2), Q(1, 8), Q(1))]
    d["hitchin"] = max(residual_scan(c, fam, a, grid) for c in hitchin for fam in ("picard", "okamoto"))
    d["negative_control"] = residual_scan(PVIConstants(Q(1, 8), Q(-1, 8), Q(1, 8), Q(1, 2)), "okamoto", a, grid)
    ok = (d["picard"] < 1e-10 and d["okamoto"] < 1e-10 and ratios == {Q(-2)} and inv < 1e-12
          and d["hitchin"] < 1e-10 and d["negative_control"] > 1e-3)
    return Check(8, "Painleve VI suite", ok, d)


def check_figures(out_dir: Path | None = None) -> Check:
    """Criterion 9: the three figure scenes render with every drawn side tangent to 1e-8."""
    d = {}
    with tempfile.TemporaryDirectory() as tmp:
        base = Path(out_dir) if out_dir is not None else Path(tmp)
        base.mkdir(parents=True, exist_ok=True)
        for name, build in FIGURE_SCENES.items():
            rep = render_svg(build(), base / f"{name}.svg")
            d[name] = {"sides": len(rep.tangency_residuals), "max_residual": rep.max_tangency_residual}
    ok = all(v["sides"] > 0 and v["max_residual"] < 1e-8 for v in d.values())
    return Check(9, "figure scenes", ok, d)


ALL_CHECKS = {
    1: check_closed_forms,
    2: check_geometric_oracle,
    3: check_isoperiodic_certificates,
    4: check_no_other_k,
    5: check_rotation_profiles,
    6: check_blaschke_crosscheck,
    7: check_mobius,
    8: check_painleve,
    9: check_figures,
}

# 3: iso-periodic orbits close with winding 2, never (4, 1); 4: a 4-iso-periodic
# pencil is also 8-iso-periodic, so k = 8 cannot be refuted on the class pencils
KNOWN_DEVIATIONS = frozenset({3, 4})

_QUICK = {
    1: {"n": 20}, 2: {"n": 10}, 3: {"per_class": 4, "pairs": 3, "others": 30},
    4: {"per_class": 4, "others": 30}, 5: {"generic": 1, "grid": 16, "steps": 20_000},
    6: {"n": 20}, 7: {"n": 2000},
}


def verify_all(seed: int = 0, quick: bool = False, only=None, out_dir: Path | None = None) -> list[Check]:
    out = []
    for num, fn in ALL_CHECKS.items():
        if only is not None and num not in only:
            continue
        kwargs = dict(_QUICK.get(num, {})) if quick else {}
        if num <= 7:
            kwargs["rng"] = np.random.default_rng([seed, num])
        if num == 9:
            kwargs["out_dir"] = out_dir
        t = time.perf_counter()
        chk = fn(**kwargs)
        chk.seconds = time.perf_counter() - t
        out.append(chk)
    return out
