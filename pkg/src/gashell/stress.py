"""Koiter constitutive law and the family of shell stress measures.

Component conventions: ``Stilde`` and ``N`` are contravariant (upper) in the
convected frame; ``S`` is (3, 2) with rows a = 1, 2, 3 and columns i, so
``S[2]`` holds the transverse shear S^{3i}.  Couple stresses are carried as
components M^{Ai} along the bivector basis ((1,3), (2,3), (1,2)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ga3
from .balance import covariant_divergence_bivector
from .errors import OrientationReversed


@dataclass(frozen=True)
class MaterialParams:
    """Young's modulus, Poisson's ratio, thickness and reference area density."""

    E_y: float = 1.0
    nu: float = 0.3
    h: float = 0.1
    rho0: float = 1.0

    def __post_init__(self):
        if not self.E_y > 0.0:
            raise ValueError(f"Young's modulus must be positive, got {self.E_y}")
        if not -1.0 < self.nu < 0.5:
            raise ValueError(f"Poisson's ratio must lie in (-1, 0.5), got {self.nu}")
        if not self.h > 0.0:
            raise ValueError(f"thickness must be positive, got {self.h}")
        if not self.rho0 > 0.0:
            raise ValueError(f"area density must be positive, got {self.rho0}")

    @property
    def membrane_stiffness(self) -> float:
        return self.E_y * self.h / (1.0 - self.nu**2)

    @property
    def bending_stiffness(self) -> float:
        return self.E_y * self.h**3 / (12.0 * (1.0 - self.nu**2))


def _quadratic(A, Ginv, nu):
    mixed = Ginv @ A
    return (1.0 - nu) * np.trace(mixed @ mixed) + nu * np.trace(mixed) ** 2


def energy_density(E, H, params: MaterialParams, metric_inv=None) -> float:
    """Stored energy per reference area, rho0 E.

    Traces raise one index with ``metric_inv`` (identity by default).
    """
    Ginv = np.eye(2) if metric_inv is None else np.asarray(metric_inv)
    E = np.asarray(E, dtype=float)
    H = np.asarray(H, dtype=float)
    return 0.5 * params.membrane_stiffness * _quadratic(E, Ginv, params.nu) + 0.5 * params.bending_stiffness * _quadratic(
        H, Ginv, params.nu
    )


def _response(A, Ginv, nu, k):
    return k * ((1.0 - nu) * Ginv @ A @ Ginv + nu * np.trace(Ginv @ A) * Ginv)


def constitutive_eval(E, H, metric=None, params: MaterialParams = MaterialParams()):
    """Contravariant (Stilde^{ij}, N^{ij}) from covariant strain and curvature change.

    ``metric`` is the reference G_ij (identity by default).
    """
    Ginv = np.eye(2) if metric is None else np.linalg.inv(np.asarray(metric, dtype=float))
    E = np.asarray(E, dtype=float)
    H = np.asarray(H, dtype=float)
    Stilde = _response(E, Ginv, params.nu, params.membrane_stiffness)
    N = _response(H, Ginv, params.nu, params.bending_stiffness)
    return Stilde, N


def couple_components(N) -> np.ndarray:
    """M^{Ai} rows ((1,3), (2,3), (1,2)) of the couple stress M(Y) = F N(Y) ^ e3."""
    N = np.asarray(N)
    return np.vstack([N, np.zeros((1, 2))])


def shear_closure(N_field, u, spatial, reference, c=(0.0, 0.0), rho0: float = 1.0, h: float = 1e-3,
                  order: int = 2, chart=None) -> np.ndarray:
    """Transverse shear S^{3i} = -M^{(i,3)j}_{|j} - rho0 c^{(i,3)}.

    ``N_field(u)`` returns N^{ij} near ``u``; ``c`` holds the body-moment
    components (c^(1,3), c^(2,3)).
    """
    div = covariant_divergence_bivector(lambda p: couple_components(N_field(p)), u, spatial, reference, h, order, chart)
    return -div[:2] - rho0 * np.asarray(c, dtype=float)


@dataclass(frozen=True, eq=False)
class StressState:
    """All stress measures at one point.

    ``T`` and ``Mbold`` are ambient columns T(E^i), Mbold(E^i), shape (3, 2);
    ``M_bivectors`` has rows M(E^i) as (e12, e13, e23) coefficients;
    ``sigma`` is the ambient 3x3 Cauchy stress and ``m`` the spatial couple
    stress as a (3, 3) map from ambient vectors to bivector coefficients.
    """

    kinematics: object
    Stilde: np.ndarray
    N: np.ndarray
    S: np.ndarray
    M: np.ndarray
    T: np.ndarray
    M_bivectors: np.ndarray
    Mbold: np.ndarray
    sigma: np.ndarray
    m: np.ndarray
    energy: float


def assemble_stresses(kin, Stilde, N, S3=(0.0, 0.0), params: MaterialParams | None = None) -> StressState:
    """Build S, T, M, Mbold, sigma and m from the constitutive outputs.

    S^{ij} = Stilde^{ij} + b^i_k N^{kj}, with b^i_k the spatial shape operator.
    """
    fs = kin.spatial
    J = kin.detF
    if not J > 0.0:
        raise OrientationReversed(f"det F = {J:g}")
    Stilde = np.asarray(Stilde, dtype=float)
    N = np.asarray(N, dtype=float)
    S = np.empty((3, 2))
    S[:2] = Stilde + fs.shape_operator @ N
    S[2] = S3
    e = fs.basis
    T = e.T @ S
    Mbold = e[:2].T @ N
    M_biv = np.array([sum(N[k, i] * ga3.wedge_coeffs(e[k], e[2]) for k in range(2)) for i in range(2)])
    sigma = T @ e[:2] / J
    m = M_biv.T @ e[:2] / J
    energy = np.nan if params is None else energy_density(kin.E, kin.H, params, kin.reference.metric_inv)
    return StressState(
        kinematics=kin,
        Stilde=Stilde,
        N=N,
        S=S,
        M=couple_components(N),
        T=T,
        M_bivectors=M_biv,
        Mbold=Mbold,
        sigma=sigma,
        m=m,
        energy=energy,
    )


def pull_back(sigma, spatial, detF: float) -> np.ndarray:
    """Ambient columns T(E^i) = det F sigma(e^i) of a spatial Cauchy stress."""
    return detF * np.asarray(sigma) @ spatial.reciprocal[:2].T
