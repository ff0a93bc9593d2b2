"""End-to-end command-line checks (subprocess) and exit-code mapping."""

import json
import subprocess
import sys

import pytest

from heatbie import cli
from heatbie.harness import CheckResult, SelfCheckReport


def run_cli(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "heatbie", *args],
                          capture_output=True, text=True, cwd=cwd)


@pytest.fixture
def source_config(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({
        "curve": {"type": "circle"},
        "N": 8, "Nprime": 8, "T": 10.0,
        "data": {"type": "point_source", "x0": [2.0, 0.0]},
        "reference": {"type": "point_source_flux"},
        "targets": [[0.0, 0.0, 5.0], [0.3, -0.1, 10.0]],
    }))
    return path


class TestKernelCheckCommand:
    def test_passes(self):
        proc = run_cli("kernel-check")
        assert proc.returncode == 0
        lines = proc.stdout.strip().splitlines()
        assert len(lines) == 7
        assert all(ln.startswith("pass") for ln in lines)

    def test_failure_maps_to_exit_2(self, monkeypatch, capsys):
        bad = SelfCheckReport(checks=(
            CheckResult("gradient_fd", False, 1.0, 1e-6, 50),))
        monkeypatch.setattr(cli, "kernel_selfcheck", lambda: bad)
        assert cli.main(["kernel-check"]) == 2
        assert "FAIL" in capsys.readouterr().out


class TestInverseCommand:
    def test_happy_path(self, tmp_path, source_config):
        out = tmp_path / "flux.csv"
        proc = run_cli("inverse", "--config", str(source_config),
                       "--out", str(out))
        assert proc.returncode == 0, proc.stderr
        assert "relative_l2" in proc.stdout
        header = out.read_text().splitlines()[0]
        assert header == "i,j,zeta,t,x1,x2,flux,reference,abs_error"
        assert (tmp_path / "flux.png").exists()

    def test_no_figures(self, tmp_path, source_config):
        out = tmp_path / "flux.csv"
        proc = run_cli("inverse", "--config", str(source_config),
                       "--out", str(out), "--no-figures")
        assert proc.returncode == 0, proc.stderr
        assert out.exists() and not (tmp_path / "flux.png").exists()

    def test_mode_override_changes_output(self, tmp_path, source_config):
        a, b, c = (tmp_path / n for n in ("a.csv", "b.csv", "c.csv"))
        for path, extra in [(a, ["--mode", "corrected"]),
                            (b, ["--mode", "paper"])]:
            proc = run_cli("inverse", "--config", str(source_config),
                           "--out", str(path), "--no-figures", *extra)
            assert proc.returncode == 0, proc.stderr
        assert a.read_bytes() != b.read_bytes()
        # global placement before the subcommand means the same thing
        proc = run_cli("--mode", "paper", "inverse", "--config",
                       str(source_config), "--out", str(c), "--no-figures")
        assert proc.returncode == 0, proc.stderr
        assert c.read_bytes() == b.read_bytes()


class TestDirectCommand:
    def test_happy_path(self, tmp_path, source_config):
        out = tmp_path / "data.csv"
        proc = run_cli("direct", "--config", str(source_config),
                       "--out", str(out))
        assert proc.returncode == 0, proc.stderr
        header = out.read_text().splitlines()[0]
        assert header == "i,j,zeta,t,x1,x2,g,flux"
        assert (tmp_path / "data.png").exists()


class TestFieldCommand:
    def test_happy_path(self, tmp_path, source_config):
        out = tmp_path / "field.csv"
        proc = run_cli("field", "--config", str(source_config),
                       "--out", str(out))
        assert proc.returncode == 0, proc.stderr
        lines = out.read_text().splitlines()
        assert lines[0] == "x1,x2,t,u,reference,abs_error"
        assert len(lines) == 3
        assert (tmp_path / "field.png").exists()

    def test_requires_targets(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({
            "curve": {"type": "circle"}, "N": 4, "Nprime": 2, "T": 10.0,
            "data": {"type": "zero"},
        }))
        proc = run_cli("field", "--config", str(cfg),
                       "--out", str(tmp_path / "f.csv"))
        assert proc.returncode == 1
        assert "error:" in proc.stderr


class TestConvergenceCommand:
    def test_happy_path(self, tmp_path, source_config):
        out = tmp_path / "conv.csv"
        proc = run_cli("convergence", "--config", str(source_config),
                       "--out", str(out), "--levels", "4x4,8x8")
        assert proc.returncode == 0, proc.stderr
        assert len(out.read_text().splitlines()) == 3
        assert (tmp_path / "conv.png").exists()

    def test_bad_levels(self, tmp_path, source_config):
        proc = run_cli("convergence", "--config", str(source_config),
                       "--out", str(tmp_path / "c.csv"), "--levels", "4y4")
        assert proc.returncode == 1
        assert "error:" in proc.stderr


class TestErrorPaths:
    def test_unknown_config_key(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({
            "curve": {"type": "circle"}, "N": 4, "Nprime": 2, "T": 10.0,
            "data": {"type": "zero"}, "smoothing": 0.1,
        }))
        proc = run_cli("inverse", "--config", str(cfg),
                       "--out", str(tmp_path / "o.csv"))
        assert proc.returncode == 1
        assert "smoothing" in proc.stderr

    def test_missing_config_file(self, tmp_path):
        proc = run_cli("inverse", "--config", str(tmp_path / "nope.json"),
                       "--out", str(tmp_path / "o.csv"))
        assert proc.returncode == 1
        assert "error:" in proc.stderr
