"""Config parsing, CSV persistence, experiment runs, self-checks."""

import json
from dataclasses import replace

import numpy as np
import pytest

import heatbie as hb
from heatbie.harness import OutputPaths
from heatbie.kernels import KernelMode

FULL_DOC = {
    "curve": {"type": "trig", "x_cos": [0.0, 1.0, 0.1],
              "y_sin": [0.0, 1.0, 0.1], "y_cos": [0.0]},
    "N": 8, "Nprime": 6, "T": 4.0,
    "zeta_max": 1.0,
    "kernel_mode": "paper",
    "data": {"type": "point_source", "x0": [2.0, 0.0]},
    "reference": {"type": "point_source_flux", "x0": [2.0, 0.0]},
    "targets": [[0.0, 0.0, 2.0], [0.1, -0.2, 4.0]],
    "outputs": {"flux": "flux.csv", "field": "field.csv"},
}


def _minimal_doc(**extra):
    doc = {"curve": {"type": "circle"}, "N": 4, "Nprime": 2, "T": 10.0,
           "data": {"type": "zero"}}
    doc.update(extra)
    return doc


def _point_source_config(tmp_path, n=8, nprime=8, **extra):
    doc = {"curve": {"type": "circle"}, "N": n, "Nprime": nprime, "T": 10.0,
           "data": {"type": "point_source", "x0": [2.0, 0.0]},
           "reference": {"type": "point_source_flux"}}
    doc.update(extra)
    return hb.config_from_dict(doc)


class TestConfigParsing:
    def test_round_trip(self):
        cfg = hb.config_from_dict(FULL_DOC)
        again = hb.parse_config(hb.serialize_config(cfg))
        assert again == cfg

    def test_defaults(self):
        cfg = hb.config_from_dict(_minimal_doc())
        assert cfg.zeta_max == 1.0
        assert cfg.kernel_mode is KernelMode.CORRECTED
        assert cfg.reference is None and cfg.targets is None
        assert cfg.outputs == OutputPaths()

    def test_mode_parses(self):
        cfg = hb.config_from_dict(_minimal_doc(kernel_mode="paper"))
        assert cfg.kernel_mode is KernelMode.PAPER_LITERAL

    def test_reference_x0_inherited_from_data(self, tmp_path):
        cfg = _point_source_config(tmp_path)
        assert cfg.reference.x0 == (2.0, 0.0)

    @pytest.mark.parametrize("doc", [
        _minimal_doc(surprise=1),
        _minimal_doc(curve={"type": "circle", "radius": 1.0, "color": "red"}),
        _minimal_doc(data={"type": "zero", "x0": [2.0, 0.0]}),
        _minimal_doc(reference={"type": "point_source_flux", "x0": [2.0, 0.0],
                                "weight": 1.0}),
        _minimal_doc(outputs={"flux": "a.csv", "log": "b.txt"}),
    ])
    def test_unknown_keys_rejected(self, doc):
        with pytest.raises(hb.ConfigError):
            hb.config_from_dict(doc)

    @pytest.mark.parametrize("drop", ["curve", "N", "Nprime", "T", "data"])
    def test_missing_required_keys(self, drop):
        doc = _minimal_doc()
        del doc[drop]
        with pytest.raises(hb.ConfigError):
            hb.config_from_dict(doc)

    def test_point_source_needs_x0(self):
        with pytest.raises(hb.ConfigError):
            hb.config_from_dict(_minimal_doc(data={"type": "point_source"}))

    def test_reference_x0_required_without_source_data(self):
        with pytest.raises(hb.ConfigError):
            hb.config_from_dict(
                _minimal_doc(reference={"type": "point_source_flux"}))

    def test_field_output_requires_targets(self):
        with pytest.raises(hb.ConfigError):
            hb.config_from_dict(_minimal_doc(outputs={"field": "f.csv"}))

    def test_bool_is_not_a_number(self):
        with pytest.raises(hb.ConfigError):
            hb.config_from_dict(_minimal_doc(N=True))
        with pytest.raises(hb.ConfigError):
            hb.config_from_dict(_minimal_doc(T=True))

    def test_bad_target_shape(self):
        with pytest.raises(hb.ConfigError):
            hb.config_from_dict(_minimal_doc(targets=[[0.0, 0.0]]))

    def test_invalid_json_text(self):
        with pytest.raises(hb.ConfigError):
            hb.parse_config("{not json")

    def test_unknown_curve_and_data_types(self):
        with pytest.raises(hb.ConfigError):
            hb.config_from_dict(_minimal_doc(curve={"type": "square"}))
        with pytest.raises(hb.ConfigError):
            hb.config_from_dict(_minimal_doc(data={"type": "noise"}))


class TestCsvWriters:
    def test_flux_header_and_order(self, tmp_path, tiny_grid):
        path = tmp_path / "flux.csv"
        vals = np.arange(8.0).reshape(4, 2)
        hb.write_flux_csv(path, tiny_grid, vals)
        lines = path.read_text().splitlines()
        assert lines[0] == "i,j,zeta,t,x1,x2,flux"
        assert len(lines) == 9
        # time-major: rows 1..4 are j=1, i=1..4
        first = lines[1].split(",")
        second = lines[2].split(",")
        assert (first[0], first[1]) == ("1", "1")
        assert (second[0], second[1]) == ("2", "1")

    def test_flux_reference_columns(self, tmp_path, tiny_grid):
        path = tmp_path / "flux.csv"
        vals = np.ones((4, 2))
        ref = np.full((4, 2), 0.25)
        hb.write_flux_csv(path, tiny_grid, vals, ref)
        lines = path.read_text().splitlines()
        assert lines[0] == "i,j,zeta,t,x1,x2,flux,reference,abs_error"
        assert lines[1].split(",")[-1] == "0.75"

    def test_floats_round_trip(self, tmp_path, tiny_grid):
        path = tmp_path / "flux.csv"
        vals = np.full((4, 2), 1.0 / 3.0)
        vals[0, 0] = 1e-300
        vals[1, 0] = 12345.678901234567
        hb.write_flux_csv(path, tiny_grid, vals)
        lines = path.read_text().splitlines()[1:]
        got = np.array([float(ln.split(",")[6]) for ln in lines])
        np.testing.assert_array_equal(got, vals.T.ravel())

    def test_line_endings_are_lf(self, tmp_path, tiny_grid):
        path = tmp_path / "flux.csv"
        hb.write_flux_csv(path, tiny_grid, np.zeros((4, 2)))
        raw = path.read_bytes()
        assert b"\r" not in raw and raw.endswith(b"\n")

    def test_field_header(self, tmp_path, tiny_grid):
        z = hb.BoundaryField.zeros(tiny_grid)
        samples = hb.reconstruct_field(tiny_grid, z, z, [((0.0, 0.0), 5.0)])
        path = tmp_path / "field.csv"
        hb.write_field_csv(path, samples)
        assert path.read_text().splitlines()[0] == "x1,x2,t,u"

    def test_convergence_header(self, tmp_path):
        path = tmp_path / "conv.csv"
        hb.write_convergence_csv(path, [])
        assert path.read_text() == "N,Nprime,l2_error,max_error,relative_l2,wall_seconds\n"


class TestRunExperiment:
    def test_published_example_row_count(self, tmp_path):
        cfg = hb.config_from_dict({
            "curve": {"type": "circle"}, "N": 50, "Nprime": 100, "T": 10.0,
            "data": {"type": "paper_example"},
            "outputs": {"flux": str(tmp_path / "flux.csv")},
        })
        report = hb.run_experiment(cfg)
        assert report.metrics is None
        assert report.wall_seconds >= 0.0
        assert report.manifest == (str(tmp_path / "flux.csv"),)
        lines = (tmp_path / "flux.csv").read_text().splitlines()
        assert len(lines) == 1 + 50 * 100

    def test_point_source_metrics(self, tmp_path):
        report = hb.run_experiment(_point_source_config(tmp_path))
        assert report.metrics is not None
        assert np.isfinite(report.metrics.relative_l2)
        assert report.metrics.relative_l2 > 0.0
        assert report.result.metrics == report.metrics

    def test_zero_data_zero_flux(self, tmp_path):
        path = tmp_path / "flux.csv"
        cfg = hb.config_from_dict(
            _minimal_doc(outputs={"flux": str(path)}))
        report = hb.run_experiment(cfg)
        np.testing.assert_array_equal(report.result.flux.values, 0.0)
        col = [ln.split(",")[6] for ln in path.read_text().splitlines()[1:]]
        assert set(col) == {"0"}

    def test_deterministic_output(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        base = _point_source_config(tmp_path)
        hb.run_experiment(replace(base, outputs=OutputPaths(flux=str(a))))
        hb.run_experiment(replace(base, outputs=OutputPaths(flux=str(b))))
        assert a.read_bytes() == b.read_bytes()

    def test_field_targets_and_reference(self, tmp_path):
        path = tmp_path / "field.csv"
        cfg = _point_source_config(
            tmp_path, targets=[[0.0, 0.0, 5.0], [0.3, 0.2, 10.0]],
            outputs={"field": str(path)})
        report = hb.run_experiment(cfg)
        assert report.field_samples is not None
        assert len(report.field_samples) == 2
        lines = path.read_text().splitlines()
        assert lines[0] == "x1,x2,t,u,reference,abs_error"
        assert len(lines) == 3


class TestConvergenceStudy:
    def test_needs_reference(self):
        cfg = hb.config_from_dict(_minimal_doc())
        with pytest.raises(hb.MissingReferenceError):
            hb.convergence_study(cfg, [(4, 4)])

    def test_empty_levels(self, tmp_path):
        path = tmp_path / "conv.csv"
        rows = hb.convergence_study(_point_source_config(tmp_path), [],
                                    out_path=path)
        assert rows == []
        assert len(path.read_text().splitlines()) == 1

    def test_single_level_matches_run(self, tmp_path):
        base = _point_source_config(tmp_path)
        rows = hb.convergence_study(base, [(8, 8)])
        rep = hb.run_experiment(replace(base, N=8, Nprime=8))
        assert len(rows) == 1
        row = rows[0]
        assert (row.N, row.Nprime) == (8, 8)
        assert row.l2_error == rep.metrics.l2_error
        assert row.max_error == rep.metrics.max_error
        assert row.relative_l2 == rep.metrics.relative_l2

    def test_csv_written(self, tmp_path):
        path = tmp_path / "conv.csv"
        hb.convergence_study(_point_source_config(tmp_path),
                             [(4, 4), (8, 8)], out_path=path)
        lines = path.read_text().splitlines()
        assert len(lines) == 3
        assert lines[1].split(",")[:2] == ["4", "4"]


class TestKernelSelfCheck:
    def test_all_pass(self):
        report = hb.kernel_selfcheck()
        assert report.all_passed

    def test_check_inventory(self):
        report = hb.kernel_selfcheck()
        names = [c.name for c in report.checks]
        assert names == ["gradient_fd", "normal_derivative_fd",
                         "hypersingular_fd", "heat_equation_residual",
                         "causality_zero", "mass_conservation",
                         "hypersingular_symmetry"]

    def test_causality_is_exact(self):
        report = hb.kernel_selfcheck()
        cz = {c.name: c for c in report.checks}["causality_zero"]
        assert cz.worst_error == 0.0 and cz.tolerance == 0.0
        assert cz.count == 1000

    def test_mass_tolerance(self):
        report = hb.kernel_selfcheck()
        mass = {c.name: c for c in report.checks}["mass_conservation"]
        assert mass.worst_error <= 1e-6

    def test_report_lines(self):
        report = hb.kernel_selfcheck()
        lines = report.lines()
        assert len(lines) == 7
        assert all(ln.startswith("pass") for ln in lines)
