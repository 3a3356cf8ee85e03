"""Elastic shells in the language of geometric algebra.

Surface geometry, shell kinematics, stresses and couple stresses, local
balance-law residuals and first-order perturbation about a pre-strained
state, each paired with an independent numerical check.
"""

__version__ = "0.1.0"

from .balance import (
    ResidualReport,
    angular_momentum_residual,
    bivector_work,
    covariant_divergence_bivector,
    covariant_divergence_vector,
    energy_residual,
    mass_residual,
    momentum_residual,
    residual_report,
)
from .case import ShellCase, manufactured_body_force
from .errors import (
    ConfigInvalid,
    DegenerateFrame,
    OrientationReversed,
    OutOfDomain,
    ShellError,
    StencilOutOfDomain,
    UnknownSuite,
)
from .fields import AnalyticField
from .ga3 import Multivector
from .kinematics import Motion, kinematic_state, rate_tensors, velocity_tensors
from .linearized import (
    CylinderCase,
    PerturbedField,
    PerturbedMotion,
    cylinder_closed_form,
    linearization_consistency,
    perturb_constitutive,
    perturb_kinematics,
    small_displacement_curvature,
)
from .stress import MaterialParams, StressState, assemble_stresses, constitutive_eval, energy_density, shear_closure
from .surface import Chart, DiffPolicy, SurfaceFrame, cylinder, frames_at, plane, sphere

__all__ = [name for name in dir() if not name.startswith("_")]
