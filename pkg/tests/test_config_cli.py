"""Case files, the result bundle and the command-line front end."""

import csv
import io
import json
from pathlib import Path

import numpy as np
import pytest

from gashell import cli, config
from gashell.errors import ConfigInvalid

CASES = Path(__file__).resolve().parents[1] / "demos" / "cases"


def write(tmp_path, cfg, name="case.json"):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return p


def base(**extra):
    cfg = {"schema": "gashell-case/1", "chart": {"id": "plane"}, "motion": {"id": "identity"},
           "grid": {"x1": [-1, 1], "x2": [-1, 1], "n1": 2, "n2": 2}}
    cfg.update(extra)
    return cfg


class TestConfig:
    @pytest.mark.parametrize("path", sorted(CASES.glob("*.json")), ids=lambda p: p.stem)
    def test_shipped_cases_validate(self, path):
        config.load_config(path)

    @pytest.mark.parametrize("bad,msg", [
        ({"bogus": 1}, "bogus"),
        ({"grid": {"x1": [1, -1]}}, "lower bound"),
        ({"material": {"nu": 0.7}}, "Poisson"),
        ({"chart": {"id": "torus"}}, "torus"),
        ({"grid": {"n1": 1}}, "minimum"),
        ({"schema": "other/9"}, "schema"),
    ])
    def test_rejections(self, bad, msg):
        with pytest.raises(ConfigInvalid, match=msg):
            config.validate_config(base(**bad))

    def test_needs_a_problem(self):
        with pytest.raises(ConfigInvalid):
            config.validate_config({"schema": "gashell-case/1", "chart": {"id": "plane"}})

    def test_bad_chart_params(self):
        cfg = base(chart={"id": "cylinder", "params": {"R": -2}})
        with pytest.raises(ConfigInvalid):
            config.shell_case(config.validate_config(cfg))

    def test_not_json(self, tmp_path):
        p = tmp_path / "x.json"
        p.write_text("{")
        with pytest.raises(ConfigInvalid):
            config.load_config(p)

    def test_grid_defaults_to_chart_domain(self):
        pts = config.grid_points({"grid": {"n1": 2, "n2": 2}}, config.chart({"chart": {"id": "sphere",
                                                                                         "params": {"R": 1}}}))
        assert pts[0][1][0] == pytest.approx(0.05)
        assert [ij for ij, _ in pts] == [(0, 0), (0, 1), (1, 0), (1, 1)]

    def test_displacement_motion(self):
        cfg = base(motion={"id": "displacement", "U": [{"coef": [0, 0, 0.1], "powers": [2, 0, 0]}]})
        case = config.shell_case(config.validate_config(cfg))
        np.testing.assert_allclose(case.kinematics(np.array([0.0, 0.3]), 0.0).H, [[0.2, 0], [0, 0]], atol=1e-14)
        # off the vertex the normal tilts: b_11 = 0.2 / sqrt(1 + (0.2 X1)^2)
        H = case.kinematics(np.array([0.5, 0.3]), 0.0).H
        assert H[0, 0] == pytest.approx(0.2 / np.sqrt(1.01), abs=1e-14)


class TestRun:
    def test_plane_identity_strain_is_zero(self, tmp_path):
        out = tmp_path / "r.json"
        assert cli.main(["run", str(CASES / "plane_identity.json"), "-o", str(out)]) == 0
        bundle = json.loads(out.read_text())
        assert bundle["schema"] == "gashell-result/1"
        for rec in bundle["points"]:
            assert all(v == 0.0 for k, v in rec["values"].items() if k.startswith("E_"))
            assert rec["values"]["detF"] == pytest.approx(1.0)

    def test_cylinder_geometry_csv(self, capsys):
        assert cli.main(["run", str(CASES / "cylinder_geometry.json")]) == 0
        rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
        assert len(rows) == 12
        assert list(rows[0])[:4] == ["i", "j", "X1", "X2"]
        for r in rows:
            assert float(r["kappa_1"]) == pytest.approx(0.0, abs=1e-12)
            assert float(r["kappa_2"]) == pytest.approx(0.5, abs=1e-12)

    def test_reruns_are_byte_identical(self, tmp_path):
        outs = []
        for k, jobs in enumerate(("1", "1", "4")):
            p = tmp_path / f"out{k}.json"
            cli.main(["run", str(CASES / "bending_residuals.json"), "-o", str(p), "--jobs", jobs])
            outs.append(p.read_bytes())
        assert outs[0] == outs[1] == outs[2]

    def test_residual_failure_exit_code(self, tmp_path):
        # unloaded motion: the momentum balance is not satisfied
        cfg = base(chart={"id": "cylinder", "params": {"R": 2}},
                   motion={"id": "displacement", "U": [{"coef": [0, 0, 0.05], "freqs": [1, 0.5, 1.3]}]},
                   outputs=["residuals"])
        assert cli.main(["run", str(write(tmp_path, cfg)), "-o", str(tmp_path / "o.json")]) == 1
        bundle = json.loads((tmp_path / "o.json").read_text())
        assert bundle["passed"] is False
        assert bundle["residual_norms"]["angular"]["max"] < 1e-10

    def test_balanced_config_passes(self, tmp_path):
        # uniform drift: no stress, no acceleration, no load
        cfg = base(motion={"id": "rigid", "params": {"rate": 0.0, "velocity": [0.3, 0.0, -1.0]}}, outputs=["residuals"])
        assert cli.main(["run", str(write(tmp_path, cfg)), "-o", str(tmp_path / "o.csv")]) == 0

    def test_point_errors_are_recorded(self, tmp_path, capsys):
        cfg = base(chart={"id": "sphere", "params": {"R": 1}}, grid={"x1": [0.0, 1.0], "n1": 2, "n2": 2},
                   outputs=["E"])
        assert cli.main(["run", str(write(tmp_path, cfg))]) == 0
        bundle = json.loads(capsys.readouterr().out)
        assert "OutOfDomain" in bundle["points"][0]["error"]

    def test_exit_codes(self, tmp_path, capsys):
        assert cli.main(["run", str(write(tmp_path, base(bogus=1)))]) == 2
        assert cli.main(["run", str(tmp_path / "missing.json")]) == 3
        assert cli.main(["frobnicate"]) == 2
        assert "error" in capsys.readouterr().err


class TestVerify:
    def test_geometry_suite_passes(self, capsys):
        assert cli.main(["verify", "geometry", "--grid", "3"]) == 0
        out = capsys.readouterr().out
        assert out.strip().endswith("checks, 0 failed")
        assert all(line.startswith("PASS") for line in out.splitlines()[:-1])

    def test_unknown_suite(self, capsys):
        assert cli.main(["verify", "nope"]) == 2
        assert "unknown suite" in capsys.readouterr().err

    def test_injected_asymmetry_is_reported(self, capsys, tmp_path):
        verdicts = tmp_path / "v.json"
        assert cli.main(["verify", "balance", "--inject-asymmetry", "--json", str(verdicts)]) == 1
        checks = {c["name"]: c for c in json.loads(verdicts.read_text())["checks"]}
        third = checks["balance: angular momentum (1,2) component"]
        assert third["passed"] is False
        assert third["value"] == pytest.approx(0.1, abs=1e-10)


class TestCylinder:
    @pytest.mark.parametrize("payload", [
        [{"coef": [0.3, 0.0, 0.0], "freqs": [0.8, 0.4, 0.0], "kind": "sin"},
         {"coef": [0.0, 0.0, 0.5], "freqs": [0.0, 0.5, 0.0], "kind": "sin"}],
        {"U1": [{"coef": 0.3, "freqs": [0.8, 0.4, 0.0], "kind": "sin"}],
         "U3": [{"coef": 0.5, "freqs": [0.0, 0.5, 0.0], "kind": "sin"}]},
    ], ids=["rows", "components"])
    def test_uprime_formats_agree(self, tmp_path, payload):
        p = tmp_path / "u.json"
        p.write_text(json.dumps(payload))
        f = cli.read_uprime(p)
        np.testing.assert_allclose(f(0.3, 0.7), [0.3 * np.sin(0.8 * 0.3 + 0.4 * 0.7), 0.0, 0.5 * np.sin(0.35)])

    def test_bad_uprime(self, tmp_path):
        p = tmp_path / "u.json"
        p.write_text(json.dumps({"U4": []}))
        assert cli.main(["cylinder", "--R", "2", "--eps", "0.1", "--uprime", str(p)]) == 2

    def test_side_by_side_report(self, tmp_path):
        p = tmp_path / "u.json"
        p.write_text(json.dumps({"U2": [{"coef": 0.2, "freqs": [0.5, 0.5, 0.0]}],
                                 "U3": [{"coef": 0.5, "freqs": [0.0, 0.5, 0.0], "kind": "sin"}]}))
        out = tmp_path / "c.json"
        code = cli.main(["cylinder", "--R", "2", "--eps", "0.05", "--uprime", str(p), "--points", "2", "-o", str(out)])
        bundle = json.loads(out.read_text())
        assert code == (0 if bundle["passed"] else 1)
        assert len(bundle["points"]) == 4
        rec = bundle["points"][0]["values"]
        assert "closed_Eprime_22" in rec and "general_Eprime_22" in rec
        for table in ("detF0", "E0", "Eprime", "H0", "Hprime", "N0", "Nprime", "S0"):
            assert bundle["max_abs_delta"][table] < 1e-8
