"""Deformation and rate measures of a motion of a surface.

A :class:`Motion` maps reference coordinates and time, (X1, X2, t), to
points in E^3.  Because the spatial configuration is described in convected
coordinates, the spatial frame at (X1, X2) is simply the coordinate frame of
the map X -> phi_t(X), and all time derivatives below are taken at fixed
(X1, X2).

Component arrays follow :mod:`gashell.surface`: zero-based, covariant
(lower) indices unless stated, frame index 2 is the normal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import ga3
from .errors import OrientationReversed
from .fields import AnalyticField, cross
from .surface import (
    DEFAULT_POLICY,
    Chart,
    DiffPolicy,
    Jet,
    SurfaceFrame,
    field_jet,
    frame_from_jet,
    numeric_jet,
)


# Second partials of a time-differenced velocity carry round-off of order
# eps / (dt h2^2); this floor on h2 keeps it below the truncation error.
VELOCITY_H2 = 2e-3


@dataclass(frozen=True, eq=False)
class Motion:
    """A time-dependent placement of a reference chart.

    ``position(u, t)`` returns the spatial point of material point ``u`` at
    time ``t``.  ``field`` optionally carries the same map as an
    :class:`AnalyticField`, which makes every derivative exact.
    """

    name: str
    reference: Chart
    position: Callable
    params: dict = field(default_factory=dict)
    field: AnalyticField | None = None

    @classmethod
    def from_field(cls, name: str, reference: Chart, fld: AnalyticField, params=None) -> Motion:
        def position(u, t):
            return fld(u[0], u[1], t)

        return cls(name, reference, position, dict(params or {}), fld)

    def use_exact(self, policy: DiffPolicy) -> bool:
        return policy.exact and self.field is not None

    def configuration(self, t: float) -> Chart:
        """The spatial configuration at time ``t`` as a chart in convected coordinates."""
        fld = None
        if self.field is not None:
            fld = _freeze_time(self.field, t)
        return Chart(
            name=f"{self.name}@t={t:g}",
            position=lambda u: self.position(u, t),
            domain=self.reference.domain,
            params=self.params,
            field=fld,
        )

    def jet(self, u, t: float, policy: DiffPolicy = DEFAULT_POLICY) -> Jet:
        return self.configuration(t).jet(u, policy)

    def velocity_jet(self, u, t: float, policy: DiffPolicy = DEFAULT_POLICY) -> Jet:
        """Velocity V = d phi / dt at fixed (X1, X2) with its coordinate partials."""
        u = np.asarray(u, dtype=float)
        if self.use_exact(policy):
            self.reference.check(u)
            return field_jet(self.field.diff(0, 0, 1), u, t)
        h2 = max(policy.h2, VELOCITY_H2)
        self.reference.check(u, margin=2.0 * max(policy.h, h2))
        dt = policy.dt

        def vel(p):
            return (self.position(p, t + dt) - self.position(p, t - dt)) / (2.0 * dt)

        return numeric_jet(vel, u, policy.h, h2)

    def velocity(self, u, t: float, policy: DiffPolicy = DEFAULT_POLICY) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if self.use_exact(policy):
            return self.field.diff(0, 0, 1)(u[0], u[1], t)
        dt = policy.dt
        return (self.position(u, t + dt) - self.position(u, t - dt)) / (2.0 * dt)

    def acceleration(self, u, t: float, policy: DiffPolicy = DEFAULT_POLICY) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if self.use_exact(policy):
            return self.field.diff(0, 0, 2)(u[0], u[1], t)
        dt = policy.dt
        x0 = self.position(u, t)
        return (self.position(u, t + dt) - 2.0 * x0 + self.position(u, t - dt)) / dt**2


def _freeze_time(fld: AnalyticField, t: float) -> AnalyticField:
    # absorb t into coefficients and phases so the result depends on (X1, X2) only
    terms = []
    for c, p, f, ph in fld.terms():
        terms.append((c * t ** p[2], (p[0], p[1], 0), (f[0], f[1], 0.0), ph + f[2] * t))
    return AnalyticField.from_terms(terms, fld.shape)


# built-in motions -----------------------------------------------------------


def _require_field(ref: Chart) -> AnalyticField:
    if ref.field is None:
        raise ValueError(f"chart {ref.name!r} has no closed form; build the Motion from a callable instead")
    return ref.field


def frame_fields(ref: Chart):
    """E_1, E_2, E_3 of an analytic chart as analytic fields.

    Only charts with constant area element |E1 x E2| are supported, since
    the unit normal is otherwise not a finite poly-trig sum.
    """
    fld = _require_field(ref)
    E1, E2 = fld.diff(1, 0), fld.diff(0, 1)
    N = cross(E1, E2)
    pts = [(0.1, 0.2), (0.7, -0.4), (-0.3, 1.3)]
    norms = [np.linalg.norm(N(a, b)) for a, b in pts if ref.contains((a, b))]
    if not norms or np.ptp(norms) > 1e-12 * max(norms):
        raise ValueError(f"chart {ref.name!r} does not have a constant area element")
    return E1, E2, N * (1.0 / norms[0])


def identity_motion(ref: Chart) -> Motion:
    return Motion.from_field("identity", ref, _require_field(ref))


def displacement_motion(ref: Chart, U: AnalyticField, name: str = "displacement", params=None) -> Motion:
    """phi_t(X) = X + U(X, t) with U in ambient Cartesian components."""
    return Motion.from_field(name, ref, _require_field(ref) + U, params)


def frame_displacement(ref: Chart, components: AnalyticField) -> AnalyticField:
    """Ambient displacement U = U^a E_a from components along the reference frame."""
    E = frame_fields(ref)
    out = AnalyticField.zeros((3,))
    for a in range(3):
        out = out + components[a] * E[a]
    return out


def rotation_field(axis, rate: float, angle0: float = 0.0):
    """Rodrigues rotation R(t) = I + sin(th) K + (1 - cos(th)) K^2, th = rate t + angle0.

    Returned as the pair of scalar fields (sin th, 1 - cos th) and the
    constant matrices (K, K^2).
    """
    k = np.asarray(axis, dtype=float)
    k = k / np.linalg.norm(k)
    K = np.array([[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]])
    s = AnalyticField.sine(1.0, w=rate, phase=angle0)
    one_minus_c = AnalyticField.constant(1.0) - AnalyticField.cosine(1.0, w=rate, phase=angle0)
    return s, one_minus_c, K, K @ K


def rigid_motion(ref: Chart, axis=(0.0, 0.0, 1.0), rate: float = 1.0, angle0: float = 0.0,
                 velocity=(0.0, 0.0, 0.0), center=(0.0, 0.0, 0.0)) -> Motion:
    """Rotation about ``axis`` through ``center`` at angular rate ``rate`` plus uniform drift."""
    x = _require_field(ref) - AnalyticField.constant(np.asarray(center, dtype=float))
    s, omc, K, K2 = rotation_field(axis, rate, angle0)
    fld = (
        x
        + s * x.linear_map(K)
        + omc * x.linear_map(K2)
        + AnalyticField.constant(np.asarray(center, dtype=float))
        + AnalyticField.monomial(np.asarray(velocity, dtype=float), r=1)
    )
    params = {"axis": list(map(float, axis)), "rate": rate, "angle0": angle0,
              "velocity": list(map(float, velocity)), "center": list(map(float, center))}
    return Motion.from_field("rigid", ref, fld, params)


def uniaxial_strain(ref: Chart, eps: float) -> Motion:
    """U = eps X1 E_1, stretching along the first coordinate direction."""
    E1 = _require_field(ref).diff(1, 0)
    U = AnalyticField.monomial(eps, p1=1) * E1
    return displacement_motion(ref, U, "uniaxial", {"eps": eps})


def cylinder_inflation(ref: Chart, delta: float) -> Motion:
    """Radial growth of a cylinder chart about the X-axis, R -> R(1 + delta)."""
    if ref.name != "cylinder":
        raise ValueError("inflation is defined for the cylinder chart")
    radial = _require_field(ref).linear_map(np.diag([0.0, 1.0, 1.0]))
    return displacement_motion(ref, radial * delta, "inflation", {"delta": delta})


# kinematic measures ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Deformation:
    """Deformation gradient and strain at a point.

    ``F`` is (3, 2) with columns e_i = F(E_i).  ``F_ambient`` is the 3x3 map
    sum_a e_a (x) E^a, which extends F to the normal by F(E_3) = e_3.
    """

    F: np.ndarray
    F_ambient: np.ndarray
    C: np.ndarray
    E: np.ndarray
    stretches: np.ndarray
    detF: float


@dataclass(frozen=True, eq=False)
class VelocityTensors:
    """Velocity gradient split at a point.

    ``l``, ``n``, ``w`` are (3, 3) covariant components in the spatial frame,
    e.g. ``l[a, b] = e_a . l(e_b)``.  ``omega`` is the angular-velocity
    bivector and ``omega_vector`` its vector form -I3 omega.
    """

    v: np.ndarray
    l: np.ndarray
    n: np.ndarray
    w: np.ndarray
    omega: ga3.Multivector

    @property
    def omega_vector(self) -> np.ndarray:
        return ga3.dual(self.omega).vector_part


@dataclass(frozen=True, eq=False)
class KinematicState:
    reference: SurfaceFrame
    spatial: SurfaceFrame
    deformation: Deformation
    H: np.ndarray
    velocity: VelocityTensors | None = None
    Edot: np.ndarray | None = None
    Hdot: np.ndarray | None = None

    @property
    def E(self) -> np.ndarray:
        return self.deformation.E

    @property
    def detF(self) -> float:
        return self.deformation.detF


def configurations(ref: Chart, motion: Motion, u, t: float, policy: DiffPolicy = DEFAULT_POLICY):
    """Reference and spatial frames at material point ``u`` and time ``t``."""
    return frame_from_jet(ref.jet(u, policy)), frame_from_jet(motion.jet(u, t, policy))


def deformation_from_frames(Fr: SurfaceFrame, fs: SurfaceFrame) -> Deformation:
    detF = fs.volume / Fr.volume
    if not detF > 0.0:
        raise OrientationReversed(f"det F = {detF:g}")
    C = fs.metric
    E = 0.5 * (fs.metric - Fr.metric)
    mixed = Fr.metric_inv @ C
    # closed-form eigenvalues of the 2x2 mixed Cauchy-Green tensor
    tr = 0.5 * (mixed[0, 0] + mixed[1, 1])
    hd = 0.5 * (mixed[0, 0] - mixed[1, 1])
    disc = np.sqrt(max(hd * hd + mixed[0, 1] * mixed[1, 0], 0.0))
    stretches = np.sqrt(np.array([tr - disc, tr + disc]))
    return Deformation(
        F=fs.tangent.copy(),
        F_ambient=fs.basis.T @ Fr.reciprocal,
        C=C,
        E=E,
        stretches=stretches,
        detF=detF,
    )


def deformation_state(ref: Chart, motion: Motion, u, t: float, policy: DiffPolicy = DEFAULT_POLICY) -> Deformation:
    """F, C, E, principal stretches and det F at (u, t)."""
    return deformation_from_frames(*configurations(ref, motion, u, t, policy))


def curvature_change(ref: Chart, motion: Motion, u, t: float, policy: DiffPolicy = DEFAULT_POLICY) -> np.ndarray:
    """H_ij = b_ij - B_ij in convected components."""
    Fr, fs = configurations(ref, motion, u, t, policy)
    return fs.second_form - Fr.second_form


def _velocity_tensors(fs: SurfaceFrame, vj: Jet) -> VelocityTensors:
    e = fs.basis
    l = np.zeros((3, 3))
    l[:, :2] = e @ vj.dx  # l_aj = e_a . d_j v
    l[:2, 2] = -l[2, :2]  # l_i3 = e_i . d_t e_3 = -v_3|i
    n = 0.5 * (l + l.T)
    w = 0.5 * (l - l.T)
    # omega = 1/2 e^a ^ w(e_a), w(e_a) = w_ba e^b
    r = fs.reciprocal
    omega = np.zeros(3)
    for a in range(3):
        for b in range(3):
            if w[b, a] != 0.0:
                omega += 0.5 * w[b, a] * ga3.wedge_coeffs(r[a], r[b])
    return VelocityTensors(v=vj.x, l=l, n=n, w=w, omega=ga3.Multivector.bivector(*omega))


def velocity_tensors(ref: Chart, motion: Motion, u, t: float, dt: float | None = None,
                     policy: DiffPolicy = DEFAULT_POLICY) -> VelocityTensors:
    """l, n, w and the angular-velocity bivector at (u, t)."""
    policy = _with_dt(policy, dt)
    fs = frame_from_jet(motion.jet(u, t, policy))
    return _velocity_tensors(fs, motion.velocity_jet(u, t, policy))


def _with_dt(policy: DiffPolicy, dt):
    return policy if dt is None else DiffPolicy(policy.exact, policy.h, policy.h2, dt)


def _hdot(fs: SurfaceFrame, vt: VelocityTensors, vj: Jet) -> np.ndarray:
    g = fs.christoffel
    l = vt.l
    # d_i l_3j = d_i e_3 . d_j v + e_3 . d_i d_j v
    dl3 = np.einsum("ix,xj->ij", fs.dbasis[:, 2, :], vj.dx) + np.einsum("x,xij->ij", fs.normal, vj.ddx)
    return dl3 - np.einsum("kij,k->ij", g[:2, :, :2], l[2, :2]) - np.einsum("ai,aj->ij", g[:, :, 2], l[:, :2])


def rate_tensors(ref: Chart, motion: Motion, u, t: float, dt: float | None = None,
                 policy: DiffPolicy = DEFAULT_POLICY):
    """Return (Edot_ij, Hdot_ij), the convected rates of strain and curvature change."""
    state = kinematic_state(ref, motion, u, t, _with_dt(policy, dt))
    return state.Edot, state.Hdot


def kinematic_state(ref: Chart, motion: Motion, u, t: float, policy: DiffPolicy = DEFAULT_POLICY,
                    rates: bool = True) -> KinematicState:
    """Everything kinematic at one material point and time."""
    Fr, fs = configurations(ref, motion, u, t, policy)
    deformation = deformation_from_frames(Fr, fs)
    H = fs.second_form - Fr.second_form
    if not rates:
        return KinematicState(Fr, fs, deformation, H)
    vj = motion.velocity_jet(u, t, policy)
    vt = _velocity_tensors(fs, vj)
    Edot = vt.n[:2, :2].copy()
    Hdot = _hdot(fs, vt, vj)
    return KinematicState(Fr, fs, deformation, H, vt, Edot, Hdot)
