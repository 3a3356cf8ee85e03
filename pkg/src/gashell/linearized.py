"""First-order perturbation about a background displacement.

The displacement is U = U0 + eps U'.  Every tensor Q is split as
Q0 + eps Q' with Q' given in closed form.  The deformation gradient is
carried as an ambient 3x3 map extended to the normal by F(E3) = e3, which
makes F^{-1}, det F and the curvature terms consistent at first order.

Body moments in this module are ambient bivectors (e12, e13, e23), split as
c0 + eps c'; body forces are ambient vectors b0 + eps b'.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import ga3
from .balance import divergence_ambient_bivector, divergence_ambient_vector
from .case import ShellCase
from .fields import AnalyticField
from .kinematics import Motion, displacement_motion, frame_displacement, kinematic_state
from .stress import MaterialParams, constitutive_eval, shear_closure
from .surface import Chart, SurfaceFrame, cylinder, field_jet, frame_from_jet

KINEMATIC_FIELDS = ("F", "detF", "Finv", "detFinv", "E", "e3", "H", "shape")
STRESS_FIELDS = ("Stilde", "N", "S", "T", "M", "rho")


@dataclass(frozen=True, eq=False)
class PerturbedMotion:
    """Background displacement ``U0`` and perturbation shape ``Uprime``, both ambient."""

    reference: Chart
    U0: AnalyticField
    Uprime: AnalyticField
    eps: float = 0.0

    @property
    def time_dependent(self) -> bool:
        return not (self.U0.is_time_independent and self.Uprime.is_time_independent)

    def motion(self, eps: float | None = None) -> Motion:
        """The full motion X + U0 + eps U'."""
        e = self.eps if eps is None else eps
        return displacement_motion(self.reference, self.U0 + self.Uprime * e, "perturbed", {"eps": e})

    def background(self) -> Motion:
        return self.motion(0.0)


@dataclass(frozen=True, eq=False)
class PerturbedField:
    """Zeroth- and first-order values of named tensors at one point."""

    motion: PerturbedMotion
    u: np.ndarray
    t: float
    zeroth: dict = field(default_factory=dict)
    first: dict = field(default_factory=dict)
    frames: tuple = ()

    def __getitem__(self, name):
        return self.zeroth[name], self.first[name]

    def __contains__(self, name):
        return name in self.zeroth

    def at(self, name, eps: float):
        """Q0 + eps Q'."""
        return np.asarray(self.zeroth[name]) + eps * np.asarray(self.first[name])

    def extended(self, zeroth: dict, first: dict) -> PerturbedField:
        return PerturbedField(self.motion, self.u, self.t, {**self.zeroth, **zeroth}, {**self.first, **first}, self.frames)


# kinematics ------------------------------------------------------------------


def perturb_kinematics(pm: PerturbedMotion, u, t: float = 0.0) -> PerturbedField:
    """F, det F, F^{-1}, det F^{-1}, E, e3, H and the mixed spatial shape operator.

    ``shape`` holds (F^{-1} b F)^j_i = g^{jk} b_{ki} in convected components.
    """
    u = np.asarray(u, dtype=float)
    ref = pm.reference
    ref.check(u)
    Fr = frame_from_jet(ref.jet(u))
    fs0 = frame_from_jet(field_jet(ref.field + pm.U0, u, t))
    Up = field_jet(pm.Uprime, u, t)
    dU, ddU = Up.dx, Up.ddx

    e0 = fs0.basis
    detF0 = fs0.volume / Fr.volume
    tr = np.einsum("kx,xk->", fs0.reciprocal[:2], dU)  # tr(F0^{-1} F')
    e3p = (np.cross(dU[:, 0], e0[1]) + np.cross(e0[0], dU[:, 1]) - tr * np.cross(e0[0], e0[1])) / (detF0 * Fr.volume)

    F0 = e0.T @ Fr.reciprocal
    Fp = dU @ Fr.reciprocal[:2] + np.outer(e3p, Fr.reciprocal[2])
    Finv0 = np.linalg.inv(F0)

    A = e0[:2] @ dU  # e0_i . d_j U'
    Ep = 0.5 * (A + A.T)
    Hp = np.einsum("x,ijx->ij", e3p, fs0.dbasis[:, :2, :]) + np.einsum("x,xij->ij", e0[2], ddU)

    ginv = fs0.metric_inv
    shape_p = -ginv @ (2.0 * Ep) @ ginv @ fs0.second_form + ginv @ Hp

    zeroth = {
        "F": F0,
        "detF": detF0,
        "Finv": Finv0,
        "detFinv": 1.0 / detF0,
        "E": 0.5 * (fs0.metric - Fr.metric),
        "e3": e0[2].copy(),
        "H": fs0.second_form - Fr.second_form,
        "shape": fs0.shape_operator,
    }
    first = {
        "F": Fp,
        "detF": detF0 * tr,
        "Finv": -Finv0 @ Fp @ Finv0,
        "detFinv": -tr / detF0,
        "E": Ep,
        "e3": e3p,
        "H": Hp,
        "shape": shape_p,
    }
    return PerturbedField(pm, u, t, zeroth, first, (Fr, fs0, Up))


def _couples(pf: PerturbedField, params: MaterialParams):
    Fr, fs0, Up = pf.frames
    _, N0 = constitutive_eval(pf.zeroth["E"], pf.zeroth["H"], Fr.metric, params)
    Ncoef = constitutive_eval(pf.first["E"], pf.first["H"], Fr.metric, params)
    e0, e3p, dU = fs0.basis, pf.first["e3"], Up.dx
    M0 = np.array([sum(N0[k, i] * ga3.wedge_coeffs(e0[k], e0[2]) for k in range(2)) for i in range(2)])
    Np = Ncoef[1]
    Mp = np.array([
        sum(
            N0[k, i] * ga3.wedge_coeffs(dU[:, k], e0[2])
            + Np[k, i] * ga3.wedge_coeffs(e0[k], e0[2])
            + N0[k, i] * ga3.wedge_coeffs(e0[k], e3p)
            for k in range(2)
        )
        for i in range(2)
    ])
    return N0, Np, M0, Mp


def perturb_constitutive(pf: PerturbedField, params: MaterialParams, h: float = 1e-3, order: int = 2,
                         c0=(0.0, 0.0, 0.0), cprime=(0.0, 0.0, 0.0)) -> PerturbedField:
    """Add Stilde, N, S (with transverse shear), T, M and the density pair.

    The transverse shear S^{3i} comes from the angular-momentum balance, as
    in the nonlinear assembly; its first-order part is the linearization of
    that closure, with the couple-stress divergence taken by stencils of
    step ``h``.
    """
    pm, u, t = pf.motion, pf.u, pf.t
    Fr, fs0, Up = pf.frames
    e0, dU = fs0.basis, Up.dx
    Stilde0, _ = constitutive_eval(pf.zeroth["E"], pf.zeroth["H"], Fr.metric, params)
    Stilde_p, _ = constitutive_eval(pf.first["E"], pf.first["H"], Fr.metric, params)
    N0, Np, M0, Mp = _couples(pf, params)

    rho0 = params.rho0
    rho_p = rho0 * pf.first["detF"] / pf.zeroth["detF"]
    c0 = np.asarray(c0, dtype=float)
    cp = np.asarray(cprime, dtype=float)

    def couples_at(p):
        return _couples(perturb_kinematics(pm, p, t), params)

    # zeroth-order closure on the background, exactly as the nonlinear assembly
    lower0, upper0 = fs0.bivector_bases()
    c0_comp = np.array([ga3.bivector_dot(c0, upper0[A]) for A in range(2)])
    S3_0 = shear_closure(lambda p: couples_at(p)[0], u, fs0, Fr, c0_comp, rho0, h, order, pm.reference)

    # first order: S^{3i} = -X^A with X = div M + rho c and A = (i,3)
    divM0 = divergence_ambient_bivector(lambda p: couples_at(p)[2], u, Fr, h, order, pm.reference)
    divMp = divergence_ambient_bivector(lambda p: couples_at(p)[3], u, Fr, h, order, pm.reference)
    X0 = divM0 + rho0 * c0
    Xp = divMp + rho0 * cp + rho_p * c0
    e3p = pf.first["e3"]
    recip_p = -pf.zeroth["Finv"].T @ pf.first["F"].T @ fs0.reciprocal[:2].T  # columns (e^i)'
    S3_p = np.empty(2)
    for i in range(2):
        # e^(i,3) = e^3 ^ e^i
        upper_p = ga3.wedge_coeffs(e3p, fs0.reciprocal[i]) + ga3.wedge_coeffs(e0[2], recip_p[:, i])
        S3_p[i] = -(ga3.bivector_dot(Xp, upper0[i]) + ga3.bivector_dot(X0, upper_p))

    b0 = pf.zeroth["shape"]
    bp = pf.first["shape"]
    S0 = np.vstack([Stilde0 + b0 @ N0, S3_0])
    Sp = np.vstack([Stilde_p + b0 @ Np + bp @ N0, S3_p])
    T0 = e0.T @ S0
    Tp = e0.T @ Sp + dU @ S0[:2] + np.outer(e3p, S0[2])

    zeroth = {"Stilde": Stilde0, "N": N0, "S": S0, "T": T0, "M": M0, "rho": rho0}
    first = {"Stilde": Stilde_p, "N": Np, "S": Sp, "T": Tp, "M": Mp, "rho": rho_p}
    return pf.extended(zeroth, first)


def perturbed_state(pm: PerturbedMotion, u, params: MaterialParams, t: float = 0.0, **kw) -> PerturbedField:
    return perturb_constitutive(perturb_kinematics(pm, u, t), params, **kw)


def linearized_momentum_residual(pm: PerturbedMotion, u, params: MaterialParams, t: float = 0.0,
                                 b0=(0.0, 0.0, 0.0), bprime=(0.0, 0.0, 0.0), h: float = 1e-3, order: int = 2,
                                 **kw) -> np.ndarray:
    """rho0 d^2U'/dt^2 - T'(d) - rho0 b' - rho' b0 at ``u``."""
    pf = perturbed_state(pm, u, params, t, h=h, order=order, **kw)
    Fr = pf.frames[0]
    div = divergence_ambient_vector(
        lambda p: perturbed_state(pm, p, params, t, h=h, order=order, **kw).first["T"], u, Fr, h, order, pm.reference
    )
    acc = pm.Uprime.diff(0, 0, 2)(u[0], u[1], t)
    return params.rho0 * acc - div - params.rho0 * np.asarray(bprime) - pf.first["rho"] * np.asarray(b0)


def linearized_angular_momentum(pm: PerturbedMotion, u, params: MaterialParams, t: float = 0.0,
                                c0=(0.0, 0.0, 0.0), cprime=(0.0, 0.0, 0.0), h: float = 1e-3,
                                order: int = 2) -> np.ndarray:
    """F0(E_i) ^ T'(E^i) + F'(E_i) ^ T0(E^i) + M'(d) + rho0 c' + rho' c0 as an ambient bivector."""
    kw = {"h": h, "order": order, "c0": c0, "cprime": cprime}
    pf = perturbed_state(pm, u, params, t, **kw)
    Fr, fs0, Up = pf.frames
    T0, Tp = pf["T"]
    torque = sum(ga3.wedge_coeffs(fs0.basis[i], Tp[:, i]) + ga3.wedge_coeffs(Up.dx[:, i], T0[:, i]) for i in range(2))
    divMp = divergence_ambient_bivector(
        lambda p: perturbed_state(pm, p, params, t, **kw).first["M"], u, Fr, h, order, pm.reference
    )
    return torque + divMp + params.rho0 * np.asarray(cprime) + pf.first["rho"] * np.asarray(c0)


# small displacements ------------------------------------------------------------


def small_displacement_curvature(Uprime: AnalyticField, ref: Chart, u, t: float = 0.0) -> np.ndarray:
    """H'_ij = E3 . (d_i d_j U' - Gamma^k_ij d_k U') for a perturbation of the reference itself."""
    u = np.asarray(u, dtype=float)
    Fr = frame_from_jet(ref.jet(u))
    Up = field_jet(Uprime, u, t)
    G = Fr.christoffel
    return np.einsum("x,xij->ij", Fr.normal, Up.ddx) - np.einsum("kij,x,xk->ij", G[:2, :, :2], Fr.normal, Up.dx)


def small_displacement_state(Uprime: AnalyticField, ref: Chart, u, params: MaterialParams, t: float = 0.0) -> dict:
    """First-order E', det F', e3', H', N', S' and M' when U0 = 0."""
    u = np.asarray(u, dtype=float)
    Fr = frame_from_jet(ref.jet(u))
    Up = field_jet(Uprime, u, t)
    E = Fr.basis
    A = E[:2] @ Up.dx
    div = np.einsum("kx,xk->", Fr.reciprocal[:2], Up.dx)
    e3p = (np.cross(Up.dx[:, 0], E[1]) + np.cross(E[0], Up.dx[:, 1])) / Fr.volume - div * E[2]
    Ep = 0.5 * (A + A.T)
    Hp = small_displacement_curvature(Uprime, ref, u, t)
    Stilde, Np = constitutive_eval(Ep, Hp, Fr.metric, params)
    Sp = Stilde + Fr.shape_operator @ Np
    Mp = np.array([sum(Np[k, i] * ga3.wedge_coeffs(E[k], E[2]) for k in range(2)) for i in range(2)])
    return {"E": Ep, "detF": div, "e3": e3p, "H": Hp, "N": Np, "S": Sp, "M": Mp}


# nonlinear pipeline and consistency ------------------------------------------------


def nonlinear_values(pm: PerturbedMotion, u, eps: float, params: MaterialParams, t: float = 0.0,
                     h: float = 1e-3, order: int = 2, names=None) -> dict:
    """Each tensor evaluated directly on the motion X + U0 + eps U'.

    The density is rho det F with rho held at its background value, so that
    its eps-derivative is rho' in the sense of the split rho0 + eps rho'.
    """
    names = tuple(names or KINEMATIC_FIELDS + STRESS_FIELDS)
    motion = pm.motion(eps)
    kin = kinematic_state(pm.reference, motion, u, t, rates=False)
    D = kin.deformation
    out = {
        "F": D.F_ambient,
        "detF": D.detF,
        "Finv": np.linalg.inv(D.F_ambient),
        "detFinv": 1.0 / D.detF,
        "E": D.E,
        "e3": kin.spatial.normal,
        "H": kin.H,
        "shape": kin.spatial.shape_operator,
    }
    if set(names) & set(STRESS_FIELDS):
        case = ShellCase(motion, params, grid_h=h, order=order)
        st = case.stress(u, t)
        detF0 = kinematic_state(pm.reference, pm.background(), u, t, rates=False).detF
        out.update({
            "Stilde": st.Stilde,
            "N": st.N,
            "S": st.S,
            "T": st.T,
            "M": st.M_bivectors,
            "rho": params.rho0 / detF0 * D.detF,
        })
    return {k: out[k] for k in names}


def first_order_extraction(pm: PerturbedMotion, u, params: MaterialParams, t: float = 0.0, eps: float = 1e-5,
                           names=None, **kw) -> dict:
    """Q' from the nonlinear pipeline as (Q(eps) - Q(-eps)) / (2 eps)."""
    plus = nonlinear_values(pm, u, eps, params, t, names=names, **kw)
    minus = nonlinear_values(pm, u, -eps, params, t, names=names, **kw)
    return {k: (np.asarray(plus[k]) - np.asarray(minus[k])) / (2.0 * eps) for k in plus}


@dataclass
class ConsistencyReport:
    """Remainders |Q(eps) - Q0 - eps Q'| over points, and their halving ratios."""

    eps: tuple
    remainders: dict
    floor: float = 1e-12

    def ratios(self) -> dict:
        out = {}
        for name, r in self.remainders.items():
            r = np.asarray(r)
            out[name] = [float(r[k] / r[k + 1]) if r[k + 1] > 0 else float("inf") for k in range(len(r) - 1)]
        return out

    def verdicts(self, lo: float = 3.5, hi: float = 4.5) -> dict:
        out = {}
        for name, r in self.remainders.items():
            if max(r) <= self.floor:
                out[name] = True  # linear to round-off
            else:
                out[name] = all(lo <= q <= hi for q in self.ratios()[name])
        return out

    def passed(self, lo: float = 3.5, hi: float = 4.5) -> bool:
        return all(self.verdicts(lo, hi).values())


def linearization_consistency(pm: PerturbedMotion, points, eps_list=(1e-2, 5e-3, 2.5e-3),
                              params: MaterialParams = MaterialParams(), t: float = 0.0, names=None,
                              h: float = 1e-3, order: int = 2) -> ConsistencyReport:
    """Richardson check of every first-order expansion over a set of points."""
    eps_list = tuple(float(e) for e in eps_list)
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise ValueError("eps list must be strictly decreasing")
    names = tuple(names or KINEMATIC_FIELDS + STRESS_FIELDS)
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    rem = {n: np.zeros(len(eps_list)) for n in names}
    for p in pts:
        pf = perturbed_state(pm, p, params, t, h=h, order=order)
        for k, e in enumerate(eps_list):
            vals = nonlinear_values(pm, p, e, params, t, h=h, order=order, names=names)
            for n in names:
                d = np.max(np.abs(np.asarray(vals[n]) - pf.at(n, e)))
                rem[n][k] = max(rem[n][k], d)
    return ConsistencyReport(eps_list, {n: rem[n].tolist() for n in names})


# uni-axially strained cylinder ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CylinderCase:
    """Cylinder of radius R pre-stretched axially by ``eps``, perturbed by U'.

    ``Uprime`` holds the frame components (U'_1, U'_2, U'_3) along
    (E_1, E_2, E_3) as a (3,) field of (X1, X2), with X1 axial and X2 the
    arc length around the circumference.
    """

    R: float
    eps: float
    Uprime: AnalyticField
    material: MaterialParams = MaterialParams()

    @property
    def C(self) -> float:
        return 1.0 / self.R

    @property
    def lam(self) -> float:
        return 1.0 + self.eps

    @property
    def reference(self) -> Chart:
        return cylinder(self.R)

    def perturbed_motion(self) -> PerturbedMotion:
        ref = self.reference
        U0 = AnalyticField.monomial(np.array([self.eps, 0.0, 0.0]), p1=1)
        return PerturbedMotion(ref, U0, frame_displacement(ref, self.Uprime))


def _assert_orthonormal(frame: SurfaceFrame, tol: float = 1e-12):
    if np.max(np.abs(frame.metric - np.eye(2))) > tol:
        raise ValueError("closed-form cylinder components require an orthonormal reference frame")


def cylinder_closed_form(case: CylinderCase, u) -> dict:
    """Component tables of the pre-stretched cylinder from the closed-form expressions."""
    u = np.asarray(u, dtype=float)
    _assert_orthonormal(frame_from_jet(case.reference.jet(u)))
    U = case.Uprime
    x1, x2 = u

    def d(i, j=0, k=0):
        return U.diff(j, k)(x1, x2)[i]

    C, eps, lam = case.C, case.eps, case.lam
    U3 = d(2)
    Ep = np.empty((2, 2))
    Ep[0, 0] = lam * d(0, 1, 0)
    Ep[1, 1] = d(1, 0, 1) - C * U3
    Ep[0, 1] = Ep[1, 0] = 0.5 * (d(1, 1, 0) + d(0, 0, 1)) + 0.5 * eps * d(0, 0, 1)
    Hp = np.empty((2, 2))
    Hp[0, 0] = d(2, 2, 0)
    Hp[1, 1] = d(2, 0, 2) + 2.0 * C * d(1, 0, 1) - C**2 * U3
    Hp[0, 1] = Hp[1, 0] = d(2, 1, 1) + C * d(1, 1, 0)

    p = case.material
    km, kb, nu = p.membrane_stiffness, p.bending_stiffness, p.nu
    E0 = np.zeros((2, 2))
    E0[0, 0] = 0.5 * eps**2 + eps
    Np = np.empty((2, 2))
    Np[0, 0] = kb * (Hp[0, 0] + nu * Hp[1, 1])
    Np[1, 1] = kb * (Hp[1, 1] + nu * Hp[0, 0])
    Np[0, 1] = Np[1, 0] = p.E_y * p.h**3 / (12.0 * (1.0 + nu)) * Hp[0, 1]
    S0 = np.zeros((2, 2))
    S0[0, 0] = km * E0[0, 0]
    S0[1, 1] = km * nu * E0[0, 0]
    Sp = np.empty((2, 2))
    Sp[0, 0] = km * (Ep[0, 0] + nu * Ep[1, 1]) + C * Np[1, 1]
    Sp[1, 1] = km * (Ep[1, 1] + nu * Ep[0, 0])
    Sp[0, 1] = p.E_y * p.h / (1.0 + nu) * Ep[0, 1]
    Sp[1, 0] = p.E_y * p.h / (1.0 + nu) * Ep[1, 0] + C * Np[1, 0]
    return {
        "detF0": lam,
        "E0": E0,
        "Eprime": Ep,
        "H0": np.zeros((2, 2)),
        "Hprime": Hp,
        "N0": np.zeros((2, 2)),
        "Nprime": Np,
        "S0": S0,
        "Sprime": Sp,
    }


def cylinder_general(case: CylinderCase, u, eps: float = 1e-5) -> dict:
    """The same tables from the general nonlinear pipeline.

    Zeroth orders are evaluated on the background; first orders by central
    differences in the perturbation scale.
    """
    pm = case.perturbed_motion()
    base = nonlinear_values(pm, u, 0.0, case.material, names=("detF", "E", "H", "N", "S"))
    prime = first_order_extraction(pm, u, case.material, eps=eps, names=("E", "H", "N", "S"))
    return {
        "detF0": base["detF"],
        "E0": base["E"],
        "Eprime": prime["E"],
        "H0": base["H"],
        "Hprime": prime["H"],
        "N0": base["N"],
        "Nprime": prime["N"],
        "S0": base["S"][:2],
        "Sprime": prime["S"][:2],
    }
