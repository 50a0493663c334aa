import io
import json
import math

import numpy as np
import pytest

from entharvest import validate as validate_mod
from entharvest.cli import main
from entharvest.quadrature import QuadratureSettings
from entharvest.sweep import (
    SWEEP_COLUMNS,
    GridSpec,
    SweepSpec,
    run_region_scan,
    run_sweep,
    write_region_csv,
    write_sweep_csv,
)


def small_spec(**quad_kwargs) -> SweepSpec:
    return SweepSpec(
        d_over_sigma=GridSpec(0.5, 2.0, 3),
        sigma_omega=GridSpec(0.0, 1.0, 2),
        v=GridSpec(0.0, 0.9, 3),
        quad=QuadratureSettings(**quad_kwargs) if quad_kwargs else QuadratureSettings(),
    )


def sweep_text(spec: SweepSpec, workers: int = 1) -> str:
    buf = io.StringIO()
    write_sweep_csv(run_sweep(spec, workers=workers), buf)
    return buf.getvalue()


class TestGridSpec:
    def test_linear(self):
        assert GridSpec(0.0, 1.0, 5).points().tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]

    def test_log(self):
        pts = GridSpec(0.1, 10.0, 3, "log").points()
        assert pts == pytest.approx([0.1, 1.0, 10.0])

    def test_lightspeed_densifies_toward_one(self):
        pts = GridSpec(0.0, 1.0 - 1e-4, 5, "lightspeed").points()
        assert pts[0] == 0.0
        assert pts[-1] == pytest.approx(1.0 - 1e-4)
        gaps = np.diff(1.0 - pts)
        assert np.all(gaps < 0)  # 1 - v strictly decreasing

    def test_singleton(self):
        assert GridSpec(0.3, 0.3, 1).points().tolist() == [0.3]

    def test_validation(self):
        with pytest.raises(ValueError):
            GridSpec(1.0, 0.5, 3)
        with pytest.raises(ValueError):
            GridSpec(0.0, 1.0, 3, "log")
        with pytest.raises(ValueError):
            GridSpec(0.0, 1.0, 3, "lightspeed")
        with pytest.raises(ValueError):
            GridSpec(0.0, 1.0, 3, "cubic")


class TestSweep:
    def test_row_count_and_order(self):
        spec = small_spec()
        rows = run_sweep(spec)
        assert len(rows) == 3 * 2 * 3
        # row-major (d, omega, v): v varies fastest
        assert [r.v for r in rows[:3]] == pytest.approx([0.0, 0.45, 0.9])
        assert rows[0].sigma_omega == rows[2].sigma_omega
        assert rows[3].sigma_omega != rows[0].sigma_omega

    def test_static_reference_row(self):
        spec = SweepSpec(GridSpec(1.0, 1.0, 1), GridSpec(0.0, 0.0, 1), GridSpec(0.0, 0.0, 1))
        (row,) = run_sweep(spec)
        assert row.negativity == pytest.approx(0.049378, abs=1e-6)
        assert row.m == row.negativity
        assert row.error == ""

    def test_negativity_clamped(self):
        for row in run_sweep(small_spec()):
            assert row.negativity == max(row.m, 0.0)
            assert row.x_abs == pytest.approx(math.hypot(row.x_re, row.x_im), rel=1e-15)

    def test_spacelike_flags(self):
        spec = SweepSpec(GridSpec(5.0, 7.0, 2), GridSpec(0.0, 0.0, 1), GridSpec(0.0, 0.0, 1))
        rows = run_sweep(spec)
        assert [r.spacelike for r in rows] == [False, True]

    def test_failure_is_flagged_not_raised(self):
        spec = SweepSpec(
            d_over_sigma=GridSpec(0.5, 0.5, 1),
            sigma_omega=GridSpec(4.0, 4.0, 1),
            v=GridSpec(0.9, 0.9, 1),
            quad=QuadratureSettings(rel_tol=1e-14, abs_tol=1e-300, max_subdivisions=1),
        )
        (row,) = run_sweep(spec)
        assert row.error != ""
        assert math.isnan(row.negativity)

    def test_from_dict_round_trip(self, tmp_path):
        cfg = {
            "d_over_sigma": {"min": 0.5, "max": 2.0, "count": 3},
            "sigma_omega": {"min": 0.0, "max": 1.0, "count": 2},
            "v": {"min": 0.0, "max": 0.9, "count": 3, "spacing": "lightspeed"},
            "quadrature": {"rel_tol": 1e-8},
        }
        path = tmp_path / "sweep.json"
        path.write_text(json.dumps(cfg))
        spec = SweepSpec.from_json(str(path))
        assert spec.quad.rel_tol == 1e-8
        assert spec.v.spacing == "lightspeed"
        assert len(run_sweep(spec)) == 18

    def test_output_column_subset(self):
        spec = SweepSpec(GridSpec(1.0, 1.0, 1), GridSpec(0.0, 0.0, 1), GridSpec(0.0, 0.0, 1),
                         outputs=("d_over_sigma", "negativity"))
        buf = io.StringIO()
        write_sweep_csv(run_sweep(spec), buf, spec.outputs)
        header, line, tail = buf.getvalue().split("\n")
        assert header == "d_over_sigma,negativity"
        assert len(line.split(",")) == 2
        assert tail == ""

    def test_rejects_unknown_columns(self):
        with pytest.raises(ValueError):
            SweepSpec(GridSpec(1.0, 1.0, 1), GridSpec(0.0, 0.0, 1), GridSpec(0.0, 0.0, 1),
                      outputs=("negativity", "entropy"))


class TestDeterminism:
    def test_repeat_is_byte_identical(self):
        spec = small_spec()
        assert sweep_text(spec) == sweep_text(spec)

    def test_workers_do_not_change_bytes(self):
        spec = small_spec()
        serial = sweep_text(spec, workers=1)
        assert sweep_text(spec, workers=2) == serial

    def test_csv_format(self):
        text = sweep_text(small_spec())
        lines = text.split("\n")
        assert lines[0] == ",".join(SWEEP_COLUMNS)
        assert lines[-1] == ""
        assert "\r" not in text
        sample = lines[1].split(",")
        assert len(sample) == len(SWEEP_COLUMNS)
        assert sample[SWEEP_COLUMNS.index("spacelike")] in ("true", "false")
        # every numeric cell round-trips exactly through float()
        for cell in sample[:-2]:
            assert repr(float(cell)) is not None


class TestRegionScan:
    def test_labels(self):
        rows = run_region_scan(GridSpec(0.5, 0.5, 1), GridSpec(0.5, 2.0, 2))
        assert rows[0].region.value == "monotone-decreasing"
        assert rows[1].region.value == "peaked"
        assert rows[1].v_star is not None and rows[1].n_star > 0.0

    def test_extinct(self):
        rows = run_region_scan(GridSpec(8.0, 8.0, 1), GridSpec(0.5, 0.5, 1))
        assert rows[0].region.value == "no-entanglement"
        assert rows[0].v_star is None

    def test_csv(self):
        buf = io.StringIO()
        write_region_csv(run_region_scan(GridSpec(0.5, 0.5, 1), GridSpec(0.5, 0.5, 1)), buf)
        lines = buf.getvalue().split("\n")
        assert lines[0].startswith("d_over_sigma,sigma_omega,region")
        assert "monotone-decreasing" in lines[1]


class TestCli:
    def test_point(self, capsys):
        rc = main(["point", "--d", "1.0", "--v", "0.0", "--omega", "0.0"])
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["negativity"] == pytest.approx(0.049378, abs=1e-6)
        assert payload["spacelike"] is False
        assert set(payload) >= {"p", "x_re", "x_im", "x_abs", "m", "x_error_estimate"}

    def test_point_quad_flag(self, capsys):
        rc = main(["point", "--d", "1.0", "--v", "0.3", "--omega", "1.0",
                   "--rel-tol", "1e-6"])
        assert rc == 0
        loose = json.loads(capsys.readouterr().out)
        main(["point", "--d", "1.0", "--v", "0.3", "--omega", "1.0"])
        tight = json.loads(capsys.readouterr().out)
        assert loose["x_abs"] == pytest.approx(tight["x_abs"], rel=1e-5)
        assert loose["x_error_estimate"] >= tight["x_error_estimate"]

    def test_sweep(self, tmp_path, capsys):
        cfg = {
            "d_over_sigma": {"min": 1.0, "max": 1.0, "count": 1},
            "sigma_omega": {"min": 0.0, "max": 0.0, "count": 1},
            "v": {"min": 0.0, "max": 0.5, "count": 2},
        }
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps(cfg))
        out = tmp_path / "out.csv"
        rc = main(["sweep", "--config", str(config), "--out", str(out)])
        assert rc == 0
        lines = out.read_text().split("\n")
        assert len(lines) == 4  # header + 2 rows + trailing newline
        assert lines[0] == ",".join(SWEEP_COLUMNS)

    def test_peak(self, capsys):
        rc = main(["peak", "--d", "1.0", "--omega", "1.0"])
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        assert 0.25 < payload["peak"]["v_star"] < 0.35

    def test_peak_absent(self, capsys):
        rc = main(["peak", "--d", "1.0", "--omega", "0.5"])
        assert rc == 0
        assert json.loads(capsys.readouterr().out)["peak"] is None

    def test_region(self, tmp_path, capsys):
        cfg = {
            "d_over_sigma": {"min": 0.5, "max": 0.5, "count": 1},
            "sigma_omega": {"min": 2.0, "max": 2.0, "count": 1},
        }
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps(cfg))
        out = tmp_path / "region.csv"
        rc = main(["region", "--config", str(config), "--out", str(out)])
        assert rc == 0
        assert "peaked" in out.read_text()


class TestValidationBattery:
    def test_coarse_all_pass(self):
        report = validate_mod.run_validation(grid="coarse")
        assert report["all_passed"]
        names = {c["name"] for c in report["checks"]}
        assert len(names) == len(report["checks"])  # unique names

    def test_detects_corrupted_prefactor(self, monkeypatch):
        real = validate_mod.oracle_mod.x_momentum_oracle

        def corrupted(det, geom, settings):
            value, err = real(det, geom, settings)
            return value * 1.001, err

        monkeypatch.setattr(validate_mod.oracle_mod, "x_momentum_oracle", corrupted)
        report = validate_mod.run_validation(grid="coarse")
        assert not report["all_passed"]
        failed = {c["name"] for c in report["checks"] if not c["passed"]}
        assert any("x_oracle" in name for name in failed)

    def test_cli_validate_exit_code(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        rc = main(["validate", "--grid", "coarse", "--out", str(out)])
        captured = capsys.readouterr()
        assert rc == 0
        assert "PASS" in captured.err
        report = json.loads(out.read_text())
        assert report["all_passed"]
