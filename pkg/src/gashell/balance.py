"""Local balance laws evaluated pointwise as residuals.

Divergences of stress fields are taken on the reference configuration with
central stencils of the component fields.  Two routes are provided for each
divergence: the component form with Christoffel corrections, and a direct
route that differences the full ambient vector (or bivector) field and only
corrects for the reference frame.  The second route is used as an oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import ga3
from .stencil import partials


def covariant_divergence_vector(T_field, u, spatial, reference, h: float, order: int = 2, chart=None) -> np.ndarray:
    """T^{ai}_{|i} e_a as an ambient vector.

    ``T_field(u)`` returns the (3, 2) components T^{ai} = e^a . T(E^i) in
    the spatial frame; ``spatial`` and ``reference`` are the frames at ``u``.
    """
    T = np.asarray(T_field(u))
    dT = partials(T_field, u, h, order, chart)  # (2, 3, 2): d_i T^{a j}
    g = spatial.christoffel
    G = reference.christoffel
    comps = (
        np.einsum("iai->a", dT)
        + np.einsum("bi,aib->a", T, g[:, :, :])
        + np.einsum("aj,iij->a", T, G[:2, :, :2])
    )
    return comps @ spatial.basis


def divergence_ambient_vector(T_columns, u, reference, h: float, order: int = 2, chart=None) -> np.ndarray:
    """d_i [T(E^i)] + Gamma^i_{ij} T(E^j) from ambient columns T(E^i), shape (3, 2)."""
    cols = np.asarray(T_columns(u))
    d = partials(T_columns, u, h, order, chart)  # (2, 3, 2)
    G = reference.christoffel
    return np.einsum("ixi->x", d) + np.einsum("iij,xj->x", G[:2, :, :2], cols)


def covariant_divergence_bivector(M_field, u, spatial, reference, h: float, order: int = 2, chart=None) -> np.ndarray:
    """Divergence of a bivector-valued couple-stress field.

    ``M_field(u)`` returns (3, 2) components M^{Ai} with rows ordered
    ((1,3), (2,3), (1,2)); the (1,2) row is ignored since the couple stress
    has no e1^e2 part.  Returns the three coefficients along
    (e_(1,3), e_(2,3), e_(1,2)):

        (d_i M^{Ii} + M^{Ji} gamma^I_{iJ} + M^{Ij} Gamma^i_{ij}) e_I
            + M^{Ji} gamma^(1,2)_{iJ} e_(1,2)
    """
    M = np.asarray(M_field(u))[:2]
    dM = partials(M_field, u, h, order, chart)[:, :2, :]  # (2, 2, 2): d_i M^{I j}
    gb = spatial.bivector_christoffel  # (A, i, B)
    G = reference.christoffel
    out = np.zeros(3)
    out[:2] = (
        np.einsum("iIi->I", dM)
        + np.einsum("Ji,IiJ->I", M, gb[:2, :, :2])
        + np.einsum("Ij,iij->I", M, G[:2, :, :2])
    )
    out[2] = np.einsum("Ji,iJ->", M, gb[2, :, :2])
    return out


def divergence_ambient_bivector(M_columns, u, reference, h: float, order: int = 2, chart=None) -> np.ndarray:
    """Same divergence from ambient bivector columns M(E^i), shape (2, 3) of (e12, e13, e23)."""
    cols = np.asarray(M_columns(u))
    d = partials(M_columns, u, h, order, chart)  # (2, 2, 3)
    G = reference.christoffel
    return np.einsum("iix->x", d) + np.einsum("iij,jx->x", G[:2, :, :2], cols)


def bivector_in_frame(coeffs, frame) -> np.ndarray:
    """Ambient (e12, e13, e23) coefficients of sum_A coeffs[A] e_A."""
    lower, _ = frame.bivector_bases()
    return np.asarray(coeffs) @ lower


def bivector_work(omega: ga3.Multivector, q: ga3.Multivector) -> float:
    """Rate of work -omega . q of a bivector torque q on angular velocity omega."""
    return -ga3.scalar_product(omega.grade(2), q.grade(2))


# residuals ----------------------------------------------------------------


def momentum_residual(case, u, t: float) -> np.ndarray:
    """rho0 dV/dt - T(d) - rho0 b, ambient vector (force per reference area)."""
    st = case.stress(u, t)
    kin = st.kinematics
    div = covariant_divergence_vector(
        lambda p: case.stress(p, t).S, u, kin.spatial, kin.reference, case.grid_h, case.order, case.reference
    )
    rho0 = case.material.rho0
    return rho0 * case.motion.acceleration(u, t, case.policy) - div - rho0 * np.asarray(case.body_force(u, t))


def angular_momentum_residual(case, u, t: float, stress=None) -> np.ndarray:
    """Components of phi ^ T(d) + M(d) + rho0 c along (e_(1,3), e_(2,3), e_(1,2)).

    The first two are S^{3i} + M^{(i,3)j}_{|j} + rho0 c^{(i,3)}; the third is
    S^21 - S^12 + N^{2i} b^1_i - N^{1i} b^2_i.
    """
    st = stress if stress is not None else case.stress(u, t)
    kin = st.kinematics
    div = covariant_divergence_bivector(
        lambda p: case.couple_components(p, t), u, kin.spatial, kin.reference, case.grid_h, case.order, case.reference
    )
    c = np.asarray(case.body_moment(u, t), dtype=float)
    S, N = st.S, st.N
    bm = kin.spatial.shape_operator
    out = np.empty(3)
    out[:2] = S[2] + div[:2] + case.material.rho0 * c
    out[2] = S[1, 0] - S[0, 1] + N[1] @ bm[0] - N[0] @ bm[1]
    return out


def angular_momentum_bivector(case, u, t: float, stress=None) -> np.ndarray:
    """The same balance assembled as one ambient bivector, e_i ^ T(E^i) + M(d) + rho0 c."""
    st = stress if stress is not None else case.stress(u, t)
    kin = st.kinematics
    e = kin.spatial.basis
    torque = sum(ga3.wedge_coeffs(e[i], st.T[:, i]) for i in range(2))
    divM = divergence_ambient_bivector(
        lambda p: case.stress(p, t, closure=False).M_bivectors, u, kin.reference, case.grid_h, case.order, case.reference
    )
    c = np.asarray(case.body_moment(u, t), dtype=float)
    body = bivector_in_frame([c[0], c[1], 0.0], kin.spatial)
    return torque + divM + case.material.rho0 * body


def energy_residual(case, u, t: float, dt: float) -> float:
    """rho0 dE/dt - tr(S~ Edot) - tr(N Hdot), with dE/dt a central time difference."""
    from .stress import energy_density

    def density(tt):
        k = case.kinematics(u, tt, rates=False)
        return energy_density(k.E, k.H, case.material, k.reference.metric_inv)

    rate = (density(t + dt) - density(t - dt)) / (2.0 * dt)
    kin = case.kinematics(u, t, rates=True)
    Stilde, N = case.constitutive_from(kin)
    return rate - np.sum(Stilde * kin.Edot) - np.sum(N * kin.Hdot)


def mass_residual(case, u, t: float, dt: float, density=None) -> float:
    """Central time difference of rho det F.

    ``density(u, t)`` defaults to rho0 sqrt(det G / det g), the spatial area
    density from the metrics, while det F is the ratio of area elements.
    """
    rho0 = case.material.rho0

    def mass(tt):
        kin = case.kinematics(u, tt, rates=False)
        if density is None:
            rho = rho0 * np.sqrt(np.linalg.det(kin.reference.metric) / np.linalg.det(kin.spatial.metric))
        else:
            rho = density(u, tt)
        return rho * kin.detF

    return (mass(t + dt) - mass(t - dt)) / (2.0 * dt)


@dataclass
class ResidualReport:
    """Per-point residuals over a set of coordinate points, with grid norms."""

    points: np.ndarray
    momentum: np.ndarray
    angular: np.ndarray
    energy: np.ndarray
    mass: np.ndarray
    tolerances: dict = field(default_factory=dict)

    def norms(self) -> dict:
        out = {}
        for name in ("momentum", "angular", "energy", "mass"):
            vals = np.abs(np.asarray(getattr(self, name), dtype=float))
            if vals.ndim > 1:
                vals = np.linalg.norm(vals, axis=-1)
            out[name] = {
                "max": float(vals.max()) if vals.size else 0.0,
                "rms": float(np.sqrt(np.mean(vals**2))) if vals.size else 0.0,
            }
        return out

    def passed(self) -> bool:
        n = self.norms()
        return all(n[k]["max"] <= tol for k, tol in self.tolerances.items())


DEFAULT_RESIDUAL_TOLERANCES = {"momentum": 1e-6, "angular": 1e-10, "energy": 1e-6, "mass": 1e-6}


def residual_report(case, points, t: float, dt: float = 1e-4, tolerances=None) -> ResidualReport:
    """Evaluate all local balance residuals at each point, in order."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    mom, ang, en, ms = [], [], [], []
    for p in pts:
        st = case.stress(p, t)
        mom.append(momentum_residual(case, p, t))
        ang.append(angular_momentum_residual(case, p, t, stress=st))
        en.append(energy_residual(case, p, t, dt))
        ms.append(mass_residual(case, p, t, dt))
    return ResidualReport(
        points=pts,
        momentum=np.array(mom).reshape(-1, 3),
        angular=np.array(ang).reshape(-1, 3),
        energy=np.array(en),
        mass=np.array(ms),
        tolerances=dict(tolerances or DEFAULT_RESIDUAL_TOLERANCES),
    )
