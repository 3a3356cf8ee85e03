"""Command-line front end: ``run``, ``verify`` and ``cylinder``.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration
error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__, balance, config
from .errors import ConfigInvalid, ShellError, UnknownSuite
from .fields import AnalyticField, from_table
from .linearized import CylinderCase, cylinder_closed_form, cylinder_general
from .stress import MaterialParams
from .verification import CYLINDER_TABLES, SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
CYLINDER_TOL = 1e-8
RESULT_SCHEMA = "gashell-result/1"


def flatten(name: str, value) -> dict:
    """``E`` (2, 2) -> {E_11, E_12, E_21, E_22}; scalars keep their name."""
    a = np.asarray(value, dtype=float)
    if a.ndim == 0:
        return {name: float(a)}
    out = {}
    for idx in np.ndindex(a.shape):
        out[f"{name}_{''.join(str(k + 1) for k in idx)}"] = float(a[idx])
    return out


def _point_record(case, outputs, u, t):
    rates = bool({"Edot", "Hdot", "omega"} & set(outputs))
    kin = case.kinematics(u, t, rates=rates)
    vals = {}
    if "geometry" in outputs:
        vals.update(flatten("kappa", kin.spatial.curvatures))
        vals.update(flatten("g", kin.spatial.metric))
        vals.update(flatten("b", kin.spatial.second_form))
    if "E" in outputs:
        vals.update(flatten("E", kin.E))
    if "H" in outputs:
        vals.update(flatten("H", kin.H))
    if "C" in outputs:
        vals.update(flatten("C", kin.deformation.C))
    if "stretches" in outputs:
        vals.update(flatten("stretch", kin.deformation.stretches))
    if "detF" in outputs:
        vals["detF"] = float(kin.detF)
    if "Edot" in outputs:
        vals.update(flatten("Edot", kin.Edot))
    if "Hdot" in outputs:
        vals.update(flatten("Hdot", kin.Hdot))
    if "omega" in outputs:
        vals.update(flatten("omega", kin.velocity.omega_vector))
    if {"Stilde", "N", "S", "T", "sigma", "energy"} & set(outputs):
        st = case.stress(u, t)
        for key, arr in (("Stilde", st.Stilde), ("N", st.N), ("S", st.S), ("T", st.T), ("sigma", st.sigma)):
            if key in outputs:
                vals.update(flatten(key, arr))
        if "energy" in outputs:
            vals["energy"] = float(st.energy)
    residuals = None
    if "residuals" in outputs:
        dt = case.policy.dt * 10
        residuals = {
            "momentum": balance.momentum_residual(case, u, t).tolist(),
            "angular": balance.angular_momentum_residual(case, u, t).tolist(),
            "energy": float(balance.energy_residual(case, u, t, dt)),
            "mass": float(balance.mass_residual(case, u, t, dt)),
        }
    return vals, residuals


def _evaluate(jobs, fn, items):
    if jobs <= 1:
        return list(map(fn, items))
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))  # map preserves input order


def run_case(cfg: dict, jobs: int = 1) -> tuple[dict, bool]:
    """Evaluate a validated configuration; return (result bundle, passed)."""
    if "cylinder" in cfg:
        case = config.cylinder_case(cfg)
        cfg_grid = cfg if "grid" in cfg else {"grid": {"x1": [-1.0, 1.0], "x2": [-0.5 * math.pi * case.R,
                                                                                 0.5 * math.pi * case.R]}}
        result = cylinder_report(case, [p for _, p in config.grid_points(cfg_grid)],
                                 [ij for ij, _ in config.grid_points(cfg_grid)])
        return {"schema": RESULT_SCHEMA, "version": __version__, "config": cfg, **result}, result["passed"]

    case = config.shell_case(cfg)
    outputs = cfg.get("outputs", ["E", "H"])
    t = float(cfg.get("grid", {}).get("t", 0.0))
    tolerances = {**balance.DEFAULT_RESIDUAL_TOLERANCES, **cfg.get("tolerances", {})}
    grid = config.grid_points(cfg, case.reference)

    def one(item):
        ij, u = item
        rec = {"index": list(ij), "X": u.tolist()}
        try:
            vals, res = _point_record(case, outputs, u, t)
            rec["values"] = vals
            if res is not None:
                rec["residuals"] = res
        except ShellError as exc:
            rec["error"] = f"{type(exc).__name__}: {exc}"
        return rec

    records = _evaluate(jobs, one, grid)
    bundle = {"schema": RESULT_SCHEMA, "version": __version__, "config": cfg, "points": records}
    passed = True
    if "residuals" in outputs:
        ok = [r for r in records if "residuals" in r]
        report = balance.ResidualReport(
            points=np.array([r["X"] for r in ok]).reshape(-1, 2),
            momentum=np.array([r["residuals"]["momentum"] for r in ok]).reshape(-1, 3),
            angular=np.array([r["residuals"]["angular"] for r in ok]).reshape(-1, 3),
            energy=np.array([r["residuals"]["energy"] for r in ok]),
            mass=np.array([r["residuals"]["mass"] for r in ok]),
            tolerances=tolerances,
        )
        passed = report.passed()
        bundle["residual_norms"] = report.norms()
        bundle["tolerances"] = tolerances
        bundle["passed"] = passed
    return bundle, passed


def cylinder_report(case: CylinderCase, points, indices=None) -> dict:
    """Closed-form and general tables side by side, with the worst gap per table."""
    indices = indices or [[k] for k in range(len(points))]
    records = []
    worst = {k: 0.0 for k in CYLINDER_TABLES}
    for ij, u in zip(indices, points):
        u = np.asarray(u, dtype=float)
        cf = cylinder_closed_form(case, u)
        g = cylinder_general(case, u)
        vals = {}
        for k in CYLINDER_TABLES:
            vals.update({f"closed_{n}": v for n, v in flatten(k, cf[k]).items()})
            vals.update({f"general_{n}": v for n, v in flatten(k, g[k]).items()})
            worst[k] = max(worst[k], float(np.max(np.abs(np.asarray(cf[k]) - np.asarray(g[k])))))
        records.append({"index": list(ij), "X": u.tolist(), "values": vals})
    verdicts = {k: bool(v <= CYLINDER_TOL) for k, v in worst.items()}
    return {
        "points": records,
        "max_abs_delta": worst,
        "tolerance": CYLINDER_TOL,
        "verdicts": verdicts,
        "passed": all(verdicts.values()),
    }


def to_csv(bundle: dict) -> str:
    """One row per grid point; columns index, X, then tensor components."""
    rows = bundle["points"]
    cols = []
    for r in rows:
        for k in r.get("values", {}):
            if k not in cols:
                cols.append(k)
    extra = ["error"] if any("error" in r for r in rows) else []
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["i", "j", "X1", "X2", *cols, *extra])
    for r in rows:
        idx = (r["index"] + [""])[:2]
        vals = r.get("values", {})
        w.writerow([*idx, repr(r["X"][0]), repr(r["X"][1]), *(repr(vals[c]) if c in vals else "" for c in cols),
                    *([r.get("error", "")] if extra else [])])
    return buf.getvalue()


def _emit(bundle: dict, out: str | None, fmt: str) -> None:
    text = to_csv(bundle) if fmt == "csv" else json.dumps(bundle, indent=2) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _format_for(out: str | None, cfg_format: str | None) -> str:
    if out is not None and out.endswith(".csv"):
        return "csv"
    if out is not None and out.endswith(".json"):
        return "json"
    return cfg_format or "json"


def cmd_run(args) -> int:
    cfg = config.load_config(args.config)
    bundle, passed = run_case(cfg, jobs=args.jobs)
    _emit(bundle, args.output, _format_for(args.output, cfg.get("format")))
    return EXIT_OK if passed else EXIT_FAIL


def cmd_verify(args) -> int:
    checks, elapsed = run_suite(args.suite, grid=args.grid, tol=args.tol, inject_asymmetry=args.inject_asymmetry)
    for c in checks:
        print(c.line())
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks)} checks, {failed} failed")
    print(f"elapsed {elapsed:.2f} s", file=sys.stderr)
    if args.json:
        Path(args.json).write_text(json.dumps({"suite": args.suite, "checks": [c.as_dict() for c in checks]}, indent=2) + "\n")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def read_uprime(path) -> object:
    """Perturbation components from a coefficient file.

    Either a list of term records with 3-vector ``coef`` (frame components
    U'_1, U'_2, U'_3), or an object with keys ``U1``, ``U2``, ``U3`` each
    holding scalar term records.
    """
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"{path}: not valid JSON: {exc}") from None
    try:
        if isinstance(data, dict):
            unknown = set(data) - {"U1", "U2", "U3"}
            if unknown:
                raise ConfigInvalid(f"{path}: unknown keys {sorted(unknown)}")
            return AnalyticField.stack([from_table(data.get(k, []), ()) for k in ("U1", "U2", "U3")])
        config.jsonschema.validate(data, config.TERMS)
        return from_table(data, (3,))
    except config.jsonschema.ValidationError as exc:
        raise ConfigInvalid(f"{path}: {exc.message}") from None
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigInvalid(f"{path}: {exc}") from None


def cmd_cylinder(args) -> int:
    if not args.R > 0 or not args.eps > -1:
        raise ConfigInvalid("need R > 0 and eps > -1")
    try:
        mat = MaterialParams(args.E_y, args.nu, args.h, args.rho0)
    except ValueError as exc:
        raise ConfigInvalid(str(exc)) from None
    case = CylinderCase(args.R, args.eps, read_uprime(args.uprime), mat)
    n = args.points
    x1 = np.linspace(-1.0, 1.0, n)
    x2 = np.linspace(-0.5 * math.pi * args.R, 0.5 * math.pi * args.R, n)
    grid = [((i, j), np.array([a, b])) for i, a in enumerate(x1) for j, b in enumerate(x2)]
    report = cylinder_report(case, [p for _, p in grid], [list(ij) for ij, _ in grid])
    bundle = {
        "schema": RESULT_SCHEMA,
        "version": __version__,
        "config": {"R": args.R, "eps": args.eps, "uprime": str(args.uprime), "material": vars(mat), "points": n},
        **report,
    }
    for k, v in report["max_abs_delta"].items():
        print(f"{'PASS' if report['verdicts'][k] else 'FAIL'}  {k:<8s} max |closed - general| = {v:.3e}", file=sys.stderr)
    _emit(bundle, args.output, _format_for(args.output, None))
    return EXIT_OK if report["passed"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gashell", description="Elastic shell kinematics, stresses and balance checks.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="evaluate a case configuration over its grid")
    r.add_argument("config")
    r.add_argument("-o", "--output", help="output file (.json or .csv); stdout if omitted")
    r.add_argument("--jobs", type=int, default=1, help="worker threads for grid points")
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("verify", help="run an invariant suite")
    v.add_argument("suite", help=f"one of {', '.join([*SUITES, 'all'])}")
    v.add_argument("--tol", type=float, help="override absolute tolerances")
    v.add_argument("--grid", type=int, help="sampling density")
    v.add_argument("--inject-asymmetry", action="store_true", help="add 0.1 to S^12 in the balance suite")
    v.add_argument("--json", help="also write the verdicts as JSON")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("cylinder", help="pre-stretched cylinder: closed form vs general pipeline")
    c.add_argument("--R", type=float, required=True)
    c.add_argument("--eps", type=float, required=True)
    c.add_argument("--uprime", required=True, help="JSON coefficient file for U'")
    c.add_argument("--E-y", dest="E_y", type=float, default=1.0)
    c.add_argument("--nu", type=float, default=0.3)
    c.add_argument("--h", type=float, default=0.1)
    c.add_argument("--rho0", type=float, default=1.0)
    c.add_argument("--points", type=int, default=3, help="grid points per axis")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_cylinder)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ConfigInvalid, UnknownSuite) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
