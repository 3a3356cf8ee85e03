"""Case configuration: JSON schema, validation and object construction."""

from __future__ import annotations

import json
import math
from pathlib import Path

import jsonschema
import numpy as np

from .case import ShellCase
from .errors import ConfigInvalid
from .fields import AnalyticField, from_table
from .kinematics import cylinder_inflation, displacement_motion, identity_motion, rigid_motion, uniaxial_strain
from .linearized import CylinderCase, PerturbedMotion
from .stress import MaterialParams
from .surface import BUILTIN_CHARTS, DiffPolicy

SCHEMA_VERSION = "gashell-case/1"

_NUM = {"type": "number"}
_POS = {"type": "number", "exclusiveMinimum": 0}
_VEC3 = {"type": "array", "items": _NUM, "minItems": 3, "maxItems": 3}
_RANGE = {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2}

TERM = {
    "type": "object",
    "additionalProperties": False,
    "required": ["coef"],
    "properties": {
        "coef": {"oneOf": [_NUM, _VEC3]},
        "powers": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 3, "maxItems": 3},
        "freqs": _VEC3,
        "phase": _NUM,
        "kind": {"enum": ["cos", "sin"]},
    },
}
TERMS = {"type": "array", "items": TERM}

OUTPUTS = ("geometry", "E", "H", "C", "stretches", "detF", "Edot", "Hdot", "omega",
           "Stilde", "N", "S", "T", "sigma", "energy", "residuals")

CASE_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["schema"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "chart": {
            "type": "object",
            "additionalProperties": False,
            "required": ["id"],
            "properties": {"id": {"enum": sorted(BUILTIN_CHARTS)}, "params": {"type": "object"}},
        },
        "motion": {
            "type": "object",
            "additionalProperties": False,
            "required": ["id"],
            "properties": {
                "id": {"enum": ["identity", "rigid", "uniaxial", "inflation", "displacement", "perturbed"]},
                "params": {"type": "object"},
                "U": TERMS,
                "U0": TERMS,
                "Uprime": TERMS,
                "eps": _NUM,
            },
        },
        "material": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"E_y": _POS, "nu": _NUM, "h": _POS, "rho0": _POS},
        },
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "x1": _RANGE,
                "x2": _RANGE,
                "n1": {"type": "integer", "minimum": 2},
                "n2": {"type": "integer", "minimum": 2},
                "t": _NUM,
            },
        },
        "diff": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "exact": {"type": "boolean"},
                "h": _POS,
                "h2": _POS,
                "dt": _POS,
                "stencil_h": _POS,
                "order": {"enum": [2, 4]},
            },
        },
        "tolerances": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"momentum": _POS, "angular": _POS, "energy": _POS, "mass": _POS},
        },
        "loads": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "body_force": _VEC3,
                "body_moment": {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2},
            },
        },
        "cylinder": {
            "type": "object",
            "additionalProperties": False,
            "required": ["R", "eps", "uprime"],
            "properties": {"R": _POS, "eps": {"type": "number", "exclusiveMinimum": -1}, "uprime": TERMS},
        },
        "outputs": {"type": "array", "items": {"enum": list(OUTPUTS)}, "uniqueItems": True},
        "format": {"enum": ["json", "csv"]},
    },
}


def validate_config(cfg: dict) -> dict:
    """Check ``cfg`` against the schema and the cross-field rules; return it."""
    try:
        jsonschema.validate(cfg, CASE_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigInvalid(f"{where}: {exc.message}") from None
    if "cylinder" not in cfg and ("chart" not in cfg or "motion" not in cfg):
        raise ConfigInvalid("a case needs either 'chart' and 'motion', or 'cylinder'")
    for key in ("x1", "x2"):
        rng = cfg.get("grid", {}).get(key)
        if rng is not None and not rng[0] < rng[1]:
            raise ConfigInvalid(f"grid/{key}: lower bound must be below upper bound")
    if "material" in cfg:
        material(cfg)
    return cfg


def load_config(path) -> dict:
    """Read and validate a case file.  I/O errors propagate as ``OSError``."""
    text = Path(path).read_text()
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"not valid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigInvalid("top level must be an object")
    return validate_config(cfg)


def material(cfg: dict) -> MaterialParams:
    try:
        return MaterialParams(**cfg.get("material", {}))
    except ValueError as exc:
        raise ConfigInvalid(f"material: {exc}") from None


def policy(cfg: dict) -> DiffPolicy:
    d = cfg.get("diff", {})
    base = DiffPolicy()
    return DiffPolicy(d.get("exact", base.exact), d.get("h", base.h), d.get("h2", base.h2), d.get("dt", base.dt))


def chart(cfg: dict):
    spec = cfg["chart"]
    try:
        return BUILTIN_CHARTS[spec["id"]](**spec.get("params", {}))
    except (TypeError, ValueError) as exc:
        raise ConfigInvalid(f"chart: {exc}") from None


def _terms(rows, shape=(3,)) -> AnalyticField:
    try:
        return from_table(rows, shape)
    except (ValueError, TypeError) as exc:
        raise ConfigInvalid(f"coefficient table: {exc}") from None


def motion(cfg: dict, ref):
    spec = cfg["motion"]
    kind = spec["id"]
    params = spec.get("params", {})
    try:
        if kind == "identity":
            return identity_motion(ref)
        if kind == "rigid":
            return rigid_motion(ref, **params)
        if kind == "uniaxial":
            return uniaxial_strain(ref, **params)
        if kind == "inflation":
            return cylinder_inflation(ref, **params)
        if kind == "displacement":
            return displacement_motion(ref, _terms(spec.get("U", [])))
        pm = perturbed_motion(cfg, ref)
        return pm.motion()
    except (TypeError, ValueError) as exc:
        raise ConfigInvalid(f"motion: {exc}") from None


def perturbed_motion(cfg: dict, ref) -> PerturbedMotion:
    spec = cfg["motion"]
    return PerturbedMotion(ref, _terms(spec.get("U0", [])), _terms(spec.get("Uprime", [])), float(spec.get("eps", 0.0)))


def cylinder_case(cfg: dict) -> CylinderCase:
    spec = cfg["cylinder"]
    return CylinderCase(spec["R"], spec["eps"], _terms(spec["uprime"]), material(cfg))


def shell_case(cfg: dict) -> ShellCase:
    ref = chart(cfg)
    mo = motion(cfg, ref)
    loads = cfg.get("loads", {})
    b = np.asarray(loads.get("body_force", (0.0, 0.0, 0.0)), dtype=float)
    c = np.asarray(loads.get("body_moment", (0.0, 0.0)), dtype=float)
    d = cfg.get("diff", {})
    return ShellCase(
        mo,
        material(cfg),
        body_force=lambda u, t: b,
        body_moment=lambda u, t: c,
        policy=policy(cfg),
        grid_h=d.get("stencil_h", 1e-3),
        order=d.get("order", 2),
    )


def grid_points(cfg: dict, default_chart=None):
    """Grid indices and coordinates, in row-major order."""
    g = cfg.get("grid", {})
    dom = default_chart.domain if default_chart is not None else ((-1.0, 1.0), (-1.0, 1.0))

    def axis(key, k):
        lo, hi = dom[k]
        lo = -1.0 if not math.isfinite(lo) else lo
        hi = 1.0 if not math.isfinite(hi) else hi
        return g.get(key, [lo, hi])

    x1 = np.linspace(*axis("x1", 0), g.get("n1", 3))
    x2 = np.linspace(*axis("x2", 1), g.get("n2", 3))
    return [((i, j), np.array([a, b])) for i, a in enumerate(x1) for j, b in enumerate(x2)]
