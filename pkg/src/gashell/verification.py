"""Executable invariant checks grouped into suites.

Each check reports a measured value against a tolerance.  Ratio checks
(convergence orders) pass when the value lies in ``RATIO_WINDOW``.  All
random draws come from a fixed seed so reruns are identical.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import balance, ga3
from .case import ShellCase, manufactured_body_force
from .errors import UnknownSuite
from .fields import AnalyticField
from .kinematics import displacement_motion, kinematic_state, rigid_motion
from .linearized import (
    CylinderCase,
    PerturbedMotion,
    cylinder_closed_form,
    cylinder_general,
    linearization_consistency,
    perturb_kinematics,
    perturbed_state,
    small_displacement_state,
)
from .stress import MaterialParams, constitutive_eval, energy_density, pull_back
from .surface import DEFAULT_POLICY, bivector_christoffel_table, cylinder, frame_from_jet, plane, principal_curvatures, sphere

RATIO_WINDOW = (3.5, 4.5)
SEED = 20240611


@dataclass(frozen=True)
class Check:
    """One verdict: ``value`` compared with ``tolerance`` (or a ratio window)."""

    name: str
    value: float
    tolerance: float | tuple
    passed: bool

    def line(self) -> str:
        tol = f"[{self.tolerance[0]:g}, {self.tolerance[1]:g}]" if isinstance(self.tolerance, tuple) else f"{self.tolerance:.1e}"
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name:<58s} value={self.value:.3e}  tol={tol}"

    def as_dict(self) -> dict:
        tol = list(self.tolerance) if isinstance(self.tolerance, tuple) else self.tolerance
        return {"name": self.name, "value": float(self.value), "tolerance": tol, "passed": bool(self.passed)}


def below(name, value, tol) -> Check:
    value = float(value)
    return Check(name, value, float(tol), bool(value <= tol))


def ratio(name, value, window=RATIO_WINDOW) -> Check:
    value = float(value)
    return Check(name, value, tuple(window), bool(window[0] <= value <= window[1]))


def sample_points(chart, n: int, rng, margin: float = 0.1, box: float = 2.0) -> np.ndarray:
    """``n`` random points inside the chart domain, clipped to [-box, box]^2."""
    (a1, b1), (a2, b2) = chart.domain
    lo = np.array([max(a1, -box) + margin, max(a2, -box) + margin])
    hi = np.array([min(b1, box) - margin, min(b2, box) - margin])
    return lo + (hi - lo) * rng.random((n, 2))


def _tol(override, default):
    return default if override is None else override


# standard motions ------------------------------------------------------------------


def stretching_motion(ref=None, speed: float = 1.0):
    """Time-periodic in-plane stretch and shear of the plane."""
    ref = ref or plane()
    U = (
        AnalyticField.sine([0.1, 0.0, 0.0], w=1.1 * speed, powers=(1, 0, 0))
        + AnalyticField.cosine([0.0, 0.04, 0.0], w=0.7 * speed, powers=(1, 0, 0))
        + AnalyticField.sine([0.0, 0.06, 0.0], k1=0.5, w=0.9 * speed, powers=(0, 1, 0))
    )
    return displacement_motion(ref, U, "stretching")


def bending_motion(ref=None, amp: float = 0.02, speed: float = 1.0):
    """The plane rolling into a gentle time-dependent sinusoid."""
    ref = ref or plane()
    U = AnalyticField.sine([0.0, 0.0, amp], k1=1.0, k2=0.3, w=0.8 * speed) + AnalyticField.cosine(
        [0.0, 0.0, 0.5 * amp], k2=0.9, w=1.3 * speed
    )
    return displacement_motion(ref, U, "bending")


def stretch_bend_motion(ref=None, speed: float = 1.0):
    """In-plane stretching combined with out-of-plane bending of the plane."""
    ref = ref or plane()
    U = stretching_motion(ref, speed).field + bending_motion(ref, 0.1, speed).field - ref.field.scale(2.0)
    return displacement_motion(ref, U, "stretch-bend")


def sphere_motion(ref=None, speed: float = 1.0):
    """Breathing and twisting of a sphere."""
    ref = ref or sphere(1.0)
    U = (
        AnalyticField.sine([0.05, 0.02, -0.03], k1=1.0, k2=1.0, w=1.2 * speed)
        + AnalyticField.cosine([0.0, 0.04, 0.02], k1=2.0, w=0.7 * speed)
        + ref.field * AnalyticField.sine(0.05, w=0.9 * speed)
    )
    return displacement_motion(ref, U, "sphere-mixed")


def shell_motion(ref=None, speed: float = 1.0):
    """Mixed stretching and bending of a cylinder."""
    ref = ref or cylinder(2.0)
    U = AnalyticField.cosine([0.0, 0.0, 0.05], k1=1.0, k2=0.5, w=1.3 * speed) + AnalyticField.sine(
        [0.03, 0.01, 0.0], k1=0.7, k2=-0.4, w=0.9 * speed
    )
    return displacement_motion(ref, U, "cylinder-mixed")


def random_rigid(ref, rng):
    axis = rng.normal(size=3)
    return rigid_motion(ref, axis=axis, rate=rng.uniform(0.5, 2.0), angle0=rng.uniform(-1, 1),
                        velocity=rng.normal(size=3), center=rng.normal(size=3))


BUILTIN_GEOMETRIES = (
    ("plane", plane()),
    ("cylinder R=0.5", cylinder(0.5)),
    ("cylinder R=2", cylinder(2.0)),
    ("sphere R=1", sphere(1.0)),
    ("sphere R=3", sphere(3.0)),
)


# suites ------------------------------------------------------------------------------


def geometry_suite(grid: int = 10, tol: float | None = None) -> list[Check]:
    rng = np.random.default_rng(SEED)
    numeric = DEFAULT_POLICY.numeric()
    out = []
    for label, chart in BUILTIN_GEOMETRIES:
        pts = sample_points(chart, grid * grid, rng)
        for pol, kind, t0 in ((DEFAULT_POLICY, "exact", 1e-10), (numeric, "finite differences", 1e-6)):
            det_err = eq1_err = rel_err = 0.0
            for p in pts:
                f = frame_from_jet(chart.jet(p, pol))
                det_err = max(det_err, abs(np.linalg.det(f.metric) - f.volume**2) / max(1.0, f.volume**2))
                eq1_err = max(eq1_err, np.max(np.abs(f.bivector_christoffel - bivector_christoffel_table(f))))
                g = f.christoffel
                rel_err = max(
                    rel_err,
                    np.max(np.abs(g[2, :, :2] - f.second_form)),
                    np.max(np.abs(g[:2, :, 2] + f.shape_operator)),
                    np.max(np.abs(g[2, :, 2])),
                )
            t = _tol(tol, t0)
            out.append(below(f"det(G) = V^2 [{label}, {kind}]", det_err, t))
            out.append(below(f"bivector Christoffel relations [{label}, {kind}]", eq1_err, t))
            out.append(below(f"curvature Christoffels [{label}, {kind}]", rel_err, t))
    for R in (0.5, 2.0):
        chart = cylinder(R)
        err = max(
            np.max(np.abs(np.sort(frame_from_jet(chart.jet(p)).curvatures) - [0.0, 1.0 / R]))
            for p in sample_points(chart, grid, rng)
        )
        out.append(below(f"cylinder principal curvatures (0, 1/R) [R={R:g}]", err, _tol(tol, 1e-8)))
    return out


def _rate_errors(motion, u, t, dt):
    ref = motion.reference
    k = kinematic_state(ref, motion, u, t)
    kp = kinematic_state(ref, motion, u, t + dt, rates=False)
    km = kinematic_state(ref, motion, u, t - dt, rates=False)
    eE = np.max(np.abs((kp.E - km.E) / (2 * dt) - k.Edot))
    eH = np.max(np.abs((kp.H - km.H) / (2 * dt) - k.Hdot))
    return eE, eH


def kinematics_suite(grid: int = 4, tol: float | None = None) -> list[Check]:
    rng = np.random.default_rng(SEED + 1)
    mat = MaterialParams()
    out = []
    worst = 0.0
    for k in range(5):
        ref = (plane(), cylinder(2.0), sphere(1.0))[k % 3]
        motion = random_rigid(ref, rng)
        for p in sample_points(ref, grid * grid, rng, margin=0.2):
            st = kinematic_state(ref, motion, p, rng.uniform(0, 2))
            S, N = constitutive_eval(st.E, st.H, st.reference.metric, mat)
            worst = max(worst, *(np.max(np.abs(a)) for a in (st.E, st.H, st.Edot, st.Hdot, S, N)))
    out.append(below("rigid motions: |E|, |H|, |Edot|, |Hdot|, |Stilde|, |N|", worst, _tol(tol, 1e-8)))
    for motion in (stretch_bend_motion(speed=3.0), shell_motion(speed=3.0), sphere_motion(speed=3.0)):
        u, t = np.array([0.7, 0.4]), 0.3
        e1 = _rate_errors(motion, u, t, 1e-4)
        e2 = _rate_errors(motion, u, t, 5e-5)
        out.append(ratio(f"Edot vs time difference of E, order [{motion.name}]", e1[0] / e2[0]))
        out.append(ratio(f"Hdot vs time difference of H, order [{motion.name}]", e1[1] / e2[1]))
        case = ShellCase(motion, mat)
        out.append(below(f"mass: d/dt (rho det F) [{motion.name}]", abs(balance.mass_residual(case, u, t, 1e-4)),
                         _tol(tol, 1e-6)))
    return out


def stress_suite(grid: int = 10, tol: float | None = None) -> list[Check]:
    rng = np.random.default_rng(SEED + 2)
    out = []
    worst = 0.0
    step = 1e-6
    for _ in range(grid * grid):
        mat = MaterialParams(rng.uniform(0.5, 2.0), rng.uniform(0.0, 0.45), rng.uniform(0.05, 0.5), 1.0)
        E = rng.normal(scale=0.1, size=(2, 2))
        E = 0.5 * (E + E.T)
        H = rng.normal(scale=0.5, size=(2, 2))
        H = 0.5 * (H + H.T)
        A = rng.normal(size=(2, 2))
        G = A @ A.T + np.eye(2)
        Ginv = np.linalg.inv(G)
        S, N = constitutive_eval(E, H, G, mat)
        gS, gN = np.zeros((2, 2)), np.zeros((2, 2))
        for i in range(2):
            for j in range(2):
                d = np.zeros((2, 2))
                d[i, j] = step
                gS[i, j] = (energy_density(E + d, H, mat, Ginv) - energy_density(E - d, H, mat, Ginv)) / (2 * step)
                gN[i, j] = (energy_density(E, H + d, mat, Ginv) - energy_density(E, H - d, mat, Ginv)) / (2 * step)
        worst = max(worst, np.max(np.abs(gS - S)) / np.max(np.abs(S)), np.max(np.abs(gN - N)) / np.max(np.abs(N)))
    out.append(below("constitutive law = gradient of energy density (relative)", worst, _tol(tol, 1e-6)))

    mat = MaterialParams()
    case = ShellCase(shell_motion(), mat)
    sym = ang3 = tang = m12 = trip = 0.0
    for p in sample_points(case.reference, grid, rng, margin=0.3):
        st = case.stress(p, 0.4)
        fs = st.kinematics.spatial
        sym = max(sym, abs(st.Stilde[0, 1] - st.Stilde[1, 0]), abs(st.N[0, 1] - st.N[1, 0]))
        ang3 = max(ang3, abs(balance.angular_momentum_residual(case, p, 0.4, stress=st)[2]))
        tang = max(tang, np.max(np.abs(fs.normal @ st.Mbold)))
        m12 = max(m12, np.max(np.abs(st.M[2])))
        back = pull_back(st.sigma, fs, st.kinematics.detF)
        trip = max(trip, np.max(np.abs(back - st.T)))
    out.append(below("Stilde and N symmetric", sym, _tol(tol, 1e-12)))
    out.append(below("assembled S: S^21 - S^12 + N^2i b^1_i - N^1i b^2_i", ang3, _tol(tol, 1e-10)))
    out.append(below("couple stress: M^(1,2)i = 0", m12, _tol(tol, 1e-15)))
    out.append(below("modified couple stress tangent to the surface", tang, _tol(tol, 1e-12)))
    out.append(below("sigma -> T round trip", trip, _tol(tol, 1e-12)))
    return out


def balance_suite(grid: int = 3, tol: float | None = None, inject_asymmetry: bool = False) -> list[Check]:
    rng = np.random.default_rng(SEED + 3)
    out = []
    mat = MaterialParams()
    case = ShellCase(shell_motion(), mat, s12_offset=0.1 if inject_asymmetry else 0.0)
    t = 0.4
    pts = sample_points(case.reference, grid, rng, margin=0.3)
    worst = np.zeros(3)
    for p in pts:
        worst = np.maximum(worst, np.abs(balance.angular_momentum_residual(case, p, t)))
    out.append(below("angular momentum (1,3) component", worst[0], _tol(tol, 1e-10)))
    out.append(below("angular momentum (2,3) component", worst[1], _tol(tol, 1e-10)))
    out.append(below("angular momentum (1,2) component", worst[2], _tol(tol, 1e-10)))

    p = pts[0]
    probe = balance.angular_momentum_residual(case.with_(s12_offset=0.1), p, t)[2]
    out.append(below("probe: S^12 + 0.1 reported as -0.1", abs(probe + 0.1), _tol(tol, 1e-10)))
    delta = 0.05
    st = case.stress(p, t)
    shifted = case.with_(body_moment=lambda u, tt: np.array([delta, 0.0]))
    probe_c = balance.angular_momentum_residual(shifted, p, t, stress=st)[0]
    base = balance.angular_momentum_residual(case, p, t, stress=st)[0]
    out.append(below("probe: c^(1,3) + d reported as rho0 d", abs(probe_c - base - mat.rho0 * delta), _tol(tol, 1e-10)))

    wmax = 0.0
    for _ in range(1000):
        w = ga3.Multivector.bivector(*rng.normal(size=3))
        q = ga3.Multivector.bivector(*rng.normal(size=3))
        wv, qv = ga3.dual(w).vector_part, ga3.dual(q).vector_part
        wmax = max(wmax, abs(balance.bivector_work(w, q) - wv @ qv))
    out.append(below("bivector work -w.q = w_v . q_v (1000 pairs)", wmax, _tol(tol, 1e-12)))

    for motion, thick in ((stretching_motion(speed=3.0), 0.1), (bending_motion(speed=3.0), 0.2)):
        c = ShellCase(motion, MaterialParams(h=thick))
        u = np.array([0.3, 0.4])
        r1 = abs(balance.energy_residual(c, u, t, 1e-4))
        r2 = abs(balance.energy_residual(c, u, t, 5e-5))
        out.append(ratio(f"energy residual order in dt [{motion.name}]", r1 / r2))

    b = manufactured_body_force(case.with_(s12_offset=0.0))
    u = pts[0]
    rh = [np.linalg.norm(balance.momentum_residual(case.with_(s12_offset=0.0, body_force=b, grid_h=h), u, t))
          for h in (4e-3, 2e-3)]
    out.append(ratio("momentum residual order in stencil step (manufactured)", rh[0] / rh[1]))

    clean = case.with_(s12_offset=0.0)
    kin = case.kinematics(u, t)
    v1 = clean.stress_divergence(u, t)
    v2 = clean.with_(order=4).stress_divergence(u, t, ambient=True)
    out.append(below("vector divergence: component vs ambient route", np.max(np.abs(v1 - v2)), _tol(tol, 1e-6)))
    b1 = balance.bivector_in_frame(
        balance.covariant_divergence_bivector(lambda q: case.couple_components(q, t), u, kin.spatial, kin.reference,
                                              case.grid_h), kin.spatial)
    b2 = balance.divergence_ambient_bivector(lambda q: case.stress(q, t, closure=False).M_bivectors, u, kin.reference,
                                             case.grid_h, 4)
    out.append(below("bivector divergence: component vs ambient route", np.max(np.abs(b1 - b2)), _tol(tol, 1e-6)))
    return out


def richardson_pairs():
    """(label, perturbed motion) pairs used for the first-order checks."""
    ref = plane()
    smooth = AnalyticField.stack([
        AnalyticField.cosine(0.2, k1=0.3, k2=1.2),
        AnalyticField.sine(0.1, k1=1.3),
        AnalyticField.sine(0.3, k1=0.6, k2=-0.8),
    ])
    bent = AnalyticField.stack([AnalyticField.sine(0.05, k1=1.0), AnalyticField.zeros(),
                                AnalyticField.cosine(0.1, k1=0.7, k2=0.9)])
    cyl = CylinderCase(2.0, 0.05, AnalyticField.stack([
        AnalyticField.sine(0.3, k1=0.8, k2=0.4),
        AnalyticField.cosine(0.2, k1=0.5, k2=0.5),
        AnalyticField.sine(0.5, k2=0.5) + AnalyticField.cosine(0.1, k1=1.1),
    ]))
    return (
        ("plane, no background", PerturbedMotion(ref, AnalyticField.zeros((3,)), smooth)),
        ("plane, bent background", PerturbedMotion(ref, bent, smooth)),
        ("cylinder, axial pre-strain", cyl.perturbed_motion()),
    )


def random_cylinder_case(rng) -> CylinderCase:
    R = rng.uniform(0.5, 3.0)
    k = 1.0 / R
    comps = []
    for _ in range(3):
        a, b, c = rng.normal(scale=0.3, size=3)
        comps.append(AnalyticField.sine(a, k1=rng.uniform(-1.5, 1.5), k2=k * rng.integers(1, 3))
                     + AnalyticField.cosine(b, k1=rng.uniform(-1.5, 1.5), k2=k * rng.integers(0, 3))
                     + AnalyticField.monomial(c, p1=1))
    mat = MaterialParams(rng.uniform(0.5, 2.0), rng.uniform(0.0, 0.45), rng.uniform(0.05, 0.3), 1.0)
    return CylinderCase(R, rng.uniform(-0.1, 0.2), AnalyticField.stack(comps), mat)


CYLINDER_TABLES = ("detF0", "E0", "Eprime", "H0", "Hprime", "N0", "Nprime", "S0", "Sprime")


def cylinder_table_errors(draws: int = 20, seed: int = SEED + 5) -> dict:
    """Max |closed form - general pipeline| per table over random draws."""
    rng = np.random.default_rng(seed)
    err = {k: 0.0 for k in CYLINDER_TABLES}
    for _ in range(draws):
        case = random_cylinder_case(rng)
        u = np.array([rng.uniform(-1, 1), rng.uniform(-math.pi * case.R, math.pi * case.R) * 0.5])
        cf = cylinder_closed_form(case, u)
        g = cylinder_general(case, u)
        for k in CYLINDER_TABLES:
            err[k] = max(err[k], float(np.max(np.abs(np.asarray(cf[k]) - np.asarray(g[k])))))
    return err


def linearized_suite(grid: int = 2, tol: float | None = None) -> list[Check]:
    rng = np.random.default_rng(SEED + 4)
    out = []
    mat = MaterialParams()
    for label, pm in richardson_pairs():
        pts = sample_points(pm.reference, grid, rng, margin=0.3, box=1.0)
        rep = linearization_consistency(pm, pts, params=mat)
        ratios = rep.ratios()
        for name, ok in rep.verdicts().items():
            worst = max(ratios[name], key=lambda q: abs(q - 4.0))
            value = worst if not max(rep.remainders[name]) <= rep.floor else 4.0
            out.append(Check(f"first-order remainder ~ eps^2: {name} [{label}]", value, RATIO_WINDOW, ok))

    ref = cylinder(2.0)
    pm = richardson_pairs()[0][1]
    pm = PerturbedMotion(ref, AnalyticField.zeros((3,)), pm.Uprime)
    diff = 0.0
    for p in sample_points(ref, grid * grid, rng, margin=0.3):
        pf = perturbed_state(pm, p, mat)
        sd = small_displacement_state(pm.Uprime, ref, p, mat)
        for k in ("E", "e3", "H", "N", "M"):
            diff = max(diff, np.max(np.abs(pf.first[k] - sd[k])))
        diff = max(diff, abs(pf.first["detF"] - sd["detF"]), np.max(np.abs(pf.first["S"][:2] - sd["S"])))
    out.append(below("general expansion reduces to small-displacement form", diff, _tol(tol, 1e-10)))

    sym = 0.0
    for label, pm in richardson_pairs():
        pf = perturb_kinematics(pm, np.array([0.2, 0.3]))
        _, Np = constitutive_eval(pf.first["E"], pf.first["H"], pf.frames[0].metric, mat)
        for A in (pf.first["E"], pf.first["H"], Np):
            sym = max(sym, abs(A[0, 1] - A[1, 0]))
    out.append(below("E', H', N' symmetric", sym, _tol(tol, 1e-12)))

    for name, e in cylinder_table_errors().items():
        out.append(below(f"pre-strained cylinder table {name}: closed form vs general", e, _tol(tol, 1e-8)))
    return out


SUITES = {
    "geometry": geometry_suite,
    "kinematics": kinematics_suite,
    "stress": stress_suite,
    "balance": balance_suite,
    "linearized": linearized_suite,
}


def run_suite(name: str, grid: int | None = None, tol: float | None = None, inject_asymmetry: bool = False):
    """Run one suite (or ``all``) and return (checks, elapsed seconds)."""
    if name != "all" and name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {', '.join([*SUITES, 'all'])}")
    names = list(SUITES) if name == "all" else [name]
    t0 = time.perf_counter()
    checks = []
    for n in names:
        kw = {"tol": tol}
        if grid is not None:
            kw["grid"] = grid
        if n == "balance":
            kw["inject_asymmetry"] = inject_asymmetry
        checks.extend(Check(f"{n}: {c.name}", c.value, c.tolerance, c.passed) for c in SUITES[n](**kw))
    return checks, time.perf_counter() - t0

