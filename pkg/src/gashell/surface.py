"""Pointwise differential geometry of parametrised surfaces.

Everything here works from a *jet* of the position map at a coordinate point:
the position, its first partials (the frame E_i) and its second partials.
Jets come either from exact derivatives supplied by the chart or from central
differences, chosen by a :class:`DiffPolicy`.

Index conventions: Latin ``i, j, k`` run over the two surface directions and
``a, b`` over the full frame {E_1, E_2, E_3}; arrays are zero based, so
``gamma[a, i, b]`` holds Gamma^{a+1}_{(i+1)(b+1)}.  Bivector indices are
ordered ((1,3), (2,3), (1,2)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import ga3
from .errors import DegenerateFrame, OutOfDomain
from .fields import AnalyticField

DEGENERATE_DET = 1e-12


@dataclass(frozen=True)
class DiffPolicy:
    """How derivatives are obtained.

    ``exact`` prefers chart-supplied partials.  The numeric fallback uses
    central differences with step ``h`` for first derivatives, ``h2`` for
    second derivatives and ``dt`` in time.
    """

    exact: bool = True
    h: float = 1e-5
    h2: float = 1e-4
    dt: float = 1e-5

    def numeric(self) -> DiffPolicy:
        return DiffPolicy(False, self.h, self.h2, self.dt)


DEFAULT_POLICY = DiffPolicy()


@dataclass(frozen=True)
class Jet:
    """Position and coordinate partials at one point: x (3,), dx (3, 2), ddx (3, 2, 2)."""

    x: np.ndarray
    dx: np.ndarray
    ddx: np.ndarray


@dataclass(frozen=True, eq=False)
class Chart:
    """A coordinate patch (X1, X2) -> E^3.

    ``position`` maps a coordinate pair to a 3-vector.  When ``field`` is
    given (an :class:`AnalyticField` of shape (3,)), exact partials are
    available.  ``domain`` is ((lo1, hi1), (lo2, hi2)).
    """

    name: str
    position: Callable[[np.ndarray], np.ndarray]
    domain: tuple = ((-np.inf, np.inf), (-np.inf, np.inf))
    params: dict = field(default_factory=dict)
    field: AnalyticField | None = None

    @classmethod
    def from_field(cls, name: str, fld: AnalyticField, domain=None, params=None) -> Chart:
        if fld.shape != (3,):
            raise ValueError("chart field must be 3-vector valued")

        def position(u):
            return fld(u[0], u[1], 0.0)

        return cls(
            name=name,
            position=position,
            domain=domain if domain is not None else ((-np.inf, np.inf), (-np.inf, np.inf)),
            params=dict(params or {}),
            field=fld,
        )

    @property
    def has_exact_derivatives(self) -> bool:
        return self.field is not None

    def contains(self, u, margin: float = 0.0) -> bool:
        (a1, b1), (a2, b2) = self.domain
        return a1 + margin <= u[0] <= b1 - margin and a2 + margin <= u[1] <= b2 - margin

    def check(self, u, margin: float = 0.0) -> None:
        if not self.contains(u, margin):
            raise OutOfDomain(f"{self.name}: point {tuple(u)} outside {self.domain} (margin {margin})")

    def jet(self, u, policy: DiffPolicy = DEFAULT_POLICY) -> Jet:
        u = np.asarray(u, dtype=float)
        if policy.exact and self.field is not None:
            self.check(u)
            return field_jet(self.field, u, 0.0)
        self.check(u, margin=2.0 * max(policy.h, policy.h2))
        return numeric_jet(self.position, u, policy.h, policy.h2)


def field_jet(fld: AnalyticField, u, t: float) -> Jet:
    x = fld(u[0], u[1], t)
    dx = np.stack([fld.diff(1, 0)(u[0], u[1], t), fld.diff(0, 1)(u[0], u[1], t)], axis=-1)
    ddx = np.empty((3, 2, 2))
    ddx[:, 0, 0] = fld.diff(2, 0)(u[0], u[1], t)
    ddx[:, 1, 1] = fld.diff(0, 2)(u[0], u[1], t)
    ddx[:, 0, 1] = ddx[:, 1, 0] = fld.diff(1, 1)(u[0], u[1], t)
    return Jet(x, dx, ddx)


def numeric_jet(position: Callable, u, h: float, h2: float) -> Jet:
    """Central-difference jet of ``position`` at ``u``."""
    u = np.asarray(u, dtype=float)
    x = np.asarray(position(u), dtype=float)
    steps = np.eye(2)
    dx = np.empty((3, 2))
    for i in range(2):
        dx[:, i] = (position(u + h * steps[i]) - position(u - h * steps[i])) / (2.0 * h)
    ddx = np.empty((3, 2, 2))
    for i in range(2):
        p = position(u + h2 * steps[i])
        m = position(u - h2 * steps[i])
        ddx[:, i, i] = (p - 2.0 * x + m) / h2**2
    s = h2 * (steps[0] + steps[1])
    d = h2 * (steps[0] - steps[1])
    mixed = (position(u + s) - position(u + d) - position(u - d) + position(u - s)) / (4.0 * h2**2)
    ddx[:, 0, 1] = ddx[:, 1, 0] = mixed
    return Jet(x, dx, ddx)


# built-in charts -----------------------------------------------------------


def plane() -> Chart:
    """Cartesian plane (X1, X2, 0)."""
    fld = AnalyticField.monomial([1.0, 0.0, 0.0], p1=1) + AnalyticField.monomial([0.0, 1.0, 0.0], p2=1)
    return Chart.from_field("plane", fld)


def cylinder(R: float) -> Chart:
    """Cylinder of radius R about the X-axis, arc-length chart (X1, R cos(X2/R), R sin(X2/R))."""
    if R <= 0:
        raise ValueError("radius must be positive")
    fld = (
        AnalyticField.monomial([1.0, 0.0, 0.0], p1=1)
        + AnalyticField.cosine([0.0, R, 0.0], k2=1.0 / R)
        + AnalyticField.sine([0.0, 0.0, R], k2=1.0 / R)
    )
    return Chart.from_field("cylinder", fld, params={"R": R})


def sphere(R: float, margin: float = 0.05) -> Chart:
    """Sphere of radius R in colatitude X1 and longitude X2.

    The poles are coordinate singularities; the domain keeps ``margin``
    radians away from them.
    """
    if R <= 0:
        raise ValueError("radius must be positive")
    s = AnalyticField.sine
    c = AnalyticField.cosine
    # sin(a)cos(b) = (sin(a+b) + sin(a-b))/2, sin(a)sin(b) = (cos(a-b) - cos(a+b))/2
    fld = (
        s([0.5 * R, 0, 0], k1=1, k2=1)
        + s([0.5 * R, 0, 0], k1=1, k2=-1)
        + c([0, 0.5 * R, 0], k1=1, k2=-1)
        - c([0, 0.5 * R, 0], k1=1, k2=1)
        + c([0, 0, R], k1=1)
    )
    domain = ((margin, math.pi - margin), (-math.pi, math.pi))
    return Chart.from_field("sphere", fld, domain=domain, params={"R": R})


BUILTIN_CHARTS = {"plane": plane, "cylinder": cylinder, "sphere": sphere}


# frames ---------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SurfaceFrame:
    """All pointwise geometry of one configuration at one coordinate point.

    Attributes
    ----------
    basis : (3, 3)
        Rows E_1, E_2, E_3 in ambient components.
    reciprocal : (3, 3)
        Rows E^1, E^2, E^3 (E^3 = E_3).
    dbasis : (2, 3, 3)
        ``dbasis[i, a]`` is the partial of E_a along X^i.
    pseudoscalar : Multivector
        Unit bivector I = E1^E2 / |E1^E2|.
    volume : float
        Area form V with V I = E1^E2.
    metric, metric_inv, second_form, shape_operator : (2, 2)
        G_ij, G^ij, B_ij and the mixed B^i_j = G^ik B_kj.
    curvatures : (2,)
        Principal curvatures, ascending.
    christoffel : (3, 2, 3)
        Gamma^a_{ib} = E^a . d_i E_b.
    bivector_christoffel : (3, 2, 3)
        Gamma^A_{iB} = E^A . d_i E_B, bivector indices ((1,3), (2,3), (1,2)).
    """

    point: np.ndarray
    basis: np.ndarray
    reciprocal: np.ndarray
    dbasis: np.ndarray
    pseudoscalar: ga3.Multivector
    volume: float
    metric: np.ndarray
    metric_inv: np.ndarray
    second_form: np.ndarray
    shape_operator: np.ndarray
    curvatures: np.ndarray
    christoffel: np.ndarray
    bivector_christoffel: np.ndarray

    @property
    def normal(self) -> np.ndarray:
        return self.basis[2]

    @property
    def tangent(self) -> np.ndarray:
        """(3, 2) array with columns E_1, E_2."""
        return self.basis[:2].T

    def bivector_bases(self):
        """(lower, upper) bivector bases as (3, 3) coefficient arrays."""
        return ga3.bivector_basis(self.basis, self.reciprocal)


def principal_curvatures(shape_operator) -> np.ndarray:
    """Eigenvalues of the 2x2 mixed shape operator by the closed-form formula, ascending."""
    m = np.asarray(shape_operator)
    mean = 0.5 * (m[0, 0] + m[1, 1])
    # ((a - d)/2)^2 + bc avoids the cancellation in mean^2 - det at umbilics
    half_diff = 0.5 * (m[0, 0] - m[1, 1])
    disc = math.sqrt(max(half_diff * half_diff + m[0, 1] * m[1, 0], 0.0))
    return np.array([mean - disc, mean + disc])


def frame_from_jet(jet: Jet) -> SurfaceFrame:
    E1, E2 = jet.dx[:, 0], jet.dx[:, 1]
    G = np.array([[E1 @ E1, E1 @ E2], [E2 @ E1, E2 @ E2]])
    detG = G[0, 0] * G[1, 1] - G[0, 1] * G[1, 0]
    if not detG >= DEGENERATE_DET:
        raise DegenerateFrame(f"det(G_ij) = {detG:.3e} below {DEGENERATE_DET:g}")
    Ginv = np.array([[G[1, 1], -G[0, 1]], [-G[1, 0], G[0, 0]]]) / detG

    N = np.cross(E1, E2)  # = -I3 (E1 ^ E2)
    vol = float(np.linalg.norm(N))
    E3 = N / vol
    basis = np.stack([E1, E2, E3])
    recip = np.vstack([Ginv @ basis[:2], E3])

    # d_i E_j from second partials; d_i E_3 by differentiating N/|N|
    dbasis = np.empty((2, 3, 3))
    for i in range(2):
        dE1, dE2 = jet.ddx[:, 0, i], jet.ddx[:, 1, i]
        dN = np.cross(dE1, E2) + np.cross(E1, dE2)
        dbasis[i, 0] = dE1
        dbasis[i, 1] = dE2
        dbasis[i, 2] = (dN - E3 * (E3 @ dN)) / vol

    gamma = np.einsum("ax,ibx->aib", recip, dbasis)
    B = np.array([[E3 @ jet.ddx[:, i, j] for j in range(2)] for i in range(2)])
    shape_op = Ginv @ B

    lower, upper = ga3.bivector_basis(basis, recip)
    dlower = np.empty((2, 3, 3))
    for i in range(2):
        d = dbasis[i]
        dlower[i, 0] = ga3.wedge_coeffs(d[0], E3) + ga3.wedge_coeffs(E1, d[2])
        dlower[i, 1] = ga3.wedge_coeffs(d[1], E3) + ga3.wedge_coeffs(E2, d[2])
        dlower[i, 2] = ga3.wedge_coeffs(d[0], E2) + ga3.wedge_coeffs(E1, d[1])
    biv_gamma = ga3.bivector_dot(upper[:, None, None, :], dlower[None, :, :, :])

    return SurfaceFrame(
        point=jet.x,
        basis=basis,
        reciprocal=recip,
        dbasis=dbasis,
        pseudoscalar=ga3.Multivector.bivector(*ga3.wedge_coeffs(E1, E2)) / vol,
        volume=vol,
        metric=G,
        metric_inv=Ginv,
        second_form=B,
        shape_operator=shape_op,
        curvatures=principal_curvatures(shape_op),
        christoffel=gamma,
        bivector_christoffel=biv_gamma,
    )


def frames_at(chart: Chart, u, diff: DiffPolicy = DEFAULT_POLICY) -> SurfaceFrame:
    """Frame, reciprocal frame, metric, curvature and Christoffels of ``chart`` at ``u``."""
    return frame_from_jet(chart.jet(u, diff))


def second_fundamental_form(chart: Chart, u, diff: DiffPolicy = DEFAULT_POLICY):
    """Return (B_ij, C1, C2) with C1 <= C2."""
    f = frames_at(chart, u, diff)
    return f.second_form, float(f.curvatures[0]), float(f.curvatures[1])


def christoffels(chart: Chart, u, diff: DiffPolicy = DEFAULT_POLICY):
    """Return (Gamma^a_{ib}, Gamma^A_{iB}) as (3, 2, 3) arrays."""
    f = frames_at(chart, u, diff)
    return f.christoffel, f.bivector_christoffel


def bivector_christoffel_table(frame: SurfaceFrame) -> np.ndarray:
    """Bivector Christoffels predicted from vector Christoffels and curvature.

    Implements the nine closed-form relations, e.g.
    Gamma^(1,2)_{i(1,2)} = Gamma^1_{i1} + Gamma^2_{i2} and
    Gamma^(1,3)_{i(1,2)} = B_{i2}.  Used to cross-check the direct
    evaluation E^A . d_i E_B held in ``frame.bivector_christoffel``.
    """
    g = frame.christoffel
    B = frame.second_form
    Bm = frame.shape_operator  # B^i_j
    out = np.empty((3, 2, 3))
    for i in range(2):
        # column B = (1,2)
        out[2, i, 2] = g[0, i, 0] + g[1, i, 1]
        out[0, i, 2] = B[i, 1]
        out[1, i, 2] = -B[i, 0]
        # column B = (1,3)
        out[2, i, 0] = -Bm[1, i]
        out[0, i, 0] = g[0, i, 0]
        out[1, i, 0] = g[1, i, 0]
        # column B = (2,3)
        out[2, i, 1] = Bm[0, i]
        out[0, i, 1] = g[0, i, 1]
        out[1, i, 1] = g[1, i, 1]
    return out
