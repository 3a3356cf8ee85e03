"""A shell problem at the level of pointwise evaluation: motion, material and loads."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .balance import covariant_divergence_vector, divergence_ambient_vector
from .kinematics import KinematicState, Motion, kinematic_state
from .stress import (
    MaterialParams,
    StressState,
    assemble_stresses,
    constitutive_eval,
    couple_components,
    shear_closure,
)
from .surface import DEFAULT_POLICY, DiffPolicy


def no_load(u, t):
    return np.zeros(3)


def no_moment(u, t):
    return np.zeros(2)


@dataclass(frozen=True, eq=False)
class ShellCase:
    """Everything needed to evaluate stresses and balance residuals at (u, t).

    ``body_force(u, t)`` returns b (ambient, per unit mass); ``body_moment``
    returns (c^(1,3), c^(2,3)).  ``grid_h`` and ``order`` set the stencils
    used for stress divergences.  ``s12_offset`` adds a fixed amount to S^12
    after assembly, for probing the angular-momentum check.
    """

    motion: Motion
    material: MaterialParams = MaterialParams()
    body_force: Callable = no_load
    body_moment: Callable = no_moment
    policy: DiffPolicy = DEFAULT_POLICY
    grid_h: float = 1e-3
    order: int = 2
    s12_offset: float = 0.0

    @property
    def reference(self):
        return self.motion.reference

    def with_(self, **changes) -> ShellCase:
        return replace(self, **changes)

    def kinematics(self, u, t: float, rates: bool = False) -> KinematicState:
        return kinematic_state(self.reference, self.motion, u, t, self.policy, rates=rates)

    def constitutive_from(self, kin: KinematicState):
        return constitutive_eval(kin.E, kin.H, kin.reference.metric, self.material)

    def couple_stress_field(self, t: float):
        """u -> N^{ij} at time t."""
        return lambda p: self.constitutive_from(self.kinematics(p, t))[1]

    def couple_components(self, u, t: float) -> np.ndarray:
        return couple_components(self.couple_stress_field(t)(u))

    def stress(self, u, t: float, closure: bool = True) -> StressState:
        kin = self.kinematics(u, t)
        Stilde, N = self.constitutive_from(kin)
        S3 = np.zeros(2)
        if closure:
            S3 = shear_closure(
                self.couple_stress_field(t), u, kin.spatial, kin.reference, self.body_moment(u, t),
                self.material.rho0, self.grid_h, self.order, self.reference,
            )
        st = assemble_stresses(kin, Stilde, N, S3, self.material)
        if self.s12_offset:
            S = st.S.copy()
            S[0, 1] += self.s12_offset
            st = replace(st, S=S, T=kin.spatial.basis.T @ S, sigma=kin.spatial.basis.T @ S @ kin.spatial.basis[:2] / kin.detF)
        return st

    def stress_divergence(self, u, t: float, ambient: bool = False) -> np.ndarray:
        """T(d) at (u, t) by the component route, or by the ambient route if ``ambient``."""
        kin = self.kinematics(u, t)
        if ambient:
            return divergence_ambient_vector(lambda p: self.stress(p, t).T, u, kin.reference, self.grid_h, self.order,
                                             self.reference)
        return covariant_divergence_vector(lambda p: self.stress(p, t).S, u, kin.spatial, kin.reference, self.grid_h,
                                           self.order, self.reference)


def manufactured_body_force(case: ShellCase, h: float = 2e-3, order: int = 4) -> Callable:
    """Body force that makes ``case.motion`` an exact solution of the momentum balance.

    Evaluated with an independent, higher-order stencil on the ambient route so
    that the residual of ``case`` measures only its own discretisation error.
    """
    fine = case.with_(grid_h=h, order=order, body_force=no_load)
    rho0 = case.material.rho0

    def b(u, t):
        acc = case.motion.acceleration(u, t, case.policy)
        return acc - fine.stress_divergence(u, t, ambient=True) / rho0

    return b
