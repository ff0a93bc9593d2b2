"""Experiment orchestration: JSON configs, CSV persistence, self-checks.

The harness is deliberately thin: it parses a strict JSON config (unknown
keys are rejected so typos in numerical parameters fail fast), builds the
grid, generates boundary data, runs the reconstruction, compares against an
analytic reference when one is configured, and writes CSV files.

CSV conventions: comma separator, LF line endings, floats printed with 17
significant digits so doubles round-trip losslessly.  Flux rows are ordered
time-major (all space nodes of t_1, then t_2, ...).

Config document shape (all-JSON, one object)::

    {
      "curve": {"type": "circle", "radius": 1.0},
      "N": 50, "Nprime": 100, "T": 10.0,
      "zeta_max": 1.0,
      "kernel_mode": "corrected",
      "data": {"type": "point_source", "x0": [2.0, 0.0]},
      "reference": {"type": "point_source_flux"},
      "targets": [[0.0, 0.0, 5.0]],
      "outputs": {"flux": "flux.csv", "field": "field.csv"}
    }

Curves may also be {"type": "trig", "x_cos": [...], "x_sin": [...],
"y_cos": [...], "y_sin": [...]}.  Data generators: "point_source" (needs
x0), "paper_example" (2|x| cos 3t), "zero".  The only reference generator
is "point_source_flux"; its x0 defaults to the data generator's source.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field as dc_field, replace
from typing import NamedTuple

import numpy as np

from . import kernels
from .exceptions import ConfigError, MissingReferenceError
from .geometry import BoundaryCurve, SpaceTimeGrid, make_grid
from .inverse import (
    ErrorMetrics,
    ReconstructionResult,
    error_metrics,
    reconstruct_field,
    reconstruct_flux_full,
    reconstruct_flux_partial,
)
from .kernels import KernelEvalContext, KernelMode
from .potentials import BoundaryField, InteriorSamples
from .synthetic import (
    PointSourceSolution,
    paper_example_dirichlet,
    point_source_flux,
    point_source_trace,
)

SELFCHECK_SEED = 20260819

DATA_TYPES = ("point_source", "paper_example", "zero")
REFERENCE_TYPES = ("point_source_flux",)


# -- configuration ----------------------------------------------------------

@dataclass(frozen=True)
class DataSpec:
    """Boundary data generator selection."""

    type: str
    x0: tuple[float, float] | None = None


@dataclass(frozen=True)
class ReferenceSpec:
    """Analytic reference selection for error metrics."""

    type: str
    x0: tuple[float, float] | None = None


@dataclass(frozen=True)
class OutputPaths:
    flux: str | None = None
    field: str | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment description (see module docstring for JSON)."""

    curve: BoundaryCurve
    N: int
    Nprime: int
    T: float
    data: DataSpec
    zeta_max: float = 1.0
    kernel_mode: KernelMode = KernelMode.CORRECTED
    reference: ReferenceSpec | None = None
    targets: tuple[tuple[float, float, float], ...] | None = None
    outputs: OutputPaths = dc_field(default_factory=OutputPaths)


def _reject_unknown(d: dict, allowed, where: str):
    unknown = sorted(set(d) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) {unknown} in {where}")


def _need(d: dict, key: str, where: str):
    if key not in d:
        raise ConfigError(f"missing key {key!r} in {where}")
    return d[key]


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where} must be a number, got {value!r}")
    return float(value)


def _integer(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where} must be an integer, got {value!r}")
    return value


def _point(value, where: str) -> tuple[float, float]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigError(f"{where} must be a pair [x1, x2]")
    return (_number(value[0], where), _number(value[1], where))


def _parse_curve(d, where="curve") -> BoundaryCurve:
    if not isinstance(d, dict):
        raise ConfigError(f"{where} must be an object")
    kind = _need(d, "type", where)
    if kind == "circle":
        _reject_unknown(d, ("type", "radius"), where)
        return BoundaryCurve.circle(_number(d.get("radius", 1.0), f"{where}.radius"))
    if kind == "trig":
        _reject_unknown(d, ("type", "x_cos", "x_sin", "y_cos", "y_sin"), where)
        return BoundaryCurve.trig_polynomial(
            _need(d, "x_cos", where), d.get("x_sin", [0.0]),
            _need(d, "y_cos", where), d.get("y_sin", [0.0]),
        )
    raise ConfigError(f"unknown curve type {kind!r}")


def _parse_data(d) -> DataSpec:
    if not isinstance(d, dict):
        raise ConfigError("data must be an object")
    kind = _need(d, "type", "data")
    if kind == "point_source":
        _reject_unknown(d, ("type", "x0"), "data")
        return DataSpec(type=kind, x0=_point(_need(d, "x0", "data"), "data.x0"))
    if kind in ("paper_example", "zero"):
        _reject_unknown(d, ("type",), "data")
        return DataSpec(type=kind)
    raise ConfigError(f"unknown data generator {kind!r}")


def _parse_reference(d, data: DataSpec) -> ReferenceSpec:
    if not isinstance(d, dict):
        raise ConfigError("reference must be an object")
    kind = _need(d, "type", "reference")
    if kind not in REFERENCE_TYPES:
        raise ConfigError(f"unknown reference generator {kind!r}")
    _reject_unknown(d, ("type", "x0"), "reference")
    if "x0" in d:
        x0 = _point(d["x0"], "reference.x0")
    elif data.type == "point_source":
        x0 = data.x0
    else:
        raise ConfigError(
            "reference.x0 is required when the data generator has no source"
        )
    return ReferenceSpec(type=kind, x0=x0)


def config_from_dict(doc: dict) -> ExperimentConfig:
    """Build a validated config from a parsed JSON object."""
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a JSON object")
    _reject_unknown(doc, ("curve", "N", "Nprime", "T", "zeta_max", "kernel_mode",
                          "data", "reference", "targets", "outputs"), "config")
    curve = _parse_curve(_need(doc, "curve", "config"))
    n = _integer(_need(doc, "N", "config"), "N")
    nprime = _integer(_need(doc, "Nprime", "config"), "Nprime")
    t_final = _number(_need(doc, "T", "config"), "T")
    zeta_max = _number(doc.get("zeta_max", 1.0), "zeta_max")
    mode = doc.get("kernel_mode", "corrected")
    if not isinstance(mode, str):
        raise ConfigError(f"kernel_mode must be a string, got {mode!r}")
    kernel_mode = KernelMode.parse(mode)
    data = _parse_data(_need(doc, "data", "config"))

    reference = None
    if "reference" in doc and doc["reference"] is not None:
        reference = _parse_reference(doc["reference"], data)

    targets = None
    if "targets" in doc and doc["targets"] is not None:
        raw = doc["targets"]
        if not isinstance(raw, list):
            raise ConfigError("targets must be a list of [x1, x2, t] triples")
        triples = []
        for entry in raw:
            if not isinstance(entry, (list, tuple)) or len(entry) != 3:
                raise ConfigError("each target must be an [x1, x2, t] triple")
            triples.append(tuple(_number(v, "target entry") for v in entry))
        targets = tuple(triples)

    outputs = OutputPaths()
    if "outputs" in doc and doc["outputs"] is not None:
        od = doc["outputs"]
        if not isinstance(od, dict):
            raise ConfigError("outputs must be an object")
        _reject_unknown(od, ("flux", "field"), "outputs")
        for key in od:
            if not isinstance(od[key], str):
                raise ConfigError(f"outputs.{key} must be a path string")
        outputs = OutputPaths(flux=od.get("flux"), field=od.get("field"))
    if outputs.field is not None and targets is None:
        raise ConfigError("outputs.field requires interior targets")

    return ExperimentConfig(curve=curve, N=n, Nprime=nprime, T=t_final,
                            zeta_max=zeta_max, kernel_mode=kernel_mode,
                            data=data, reference=reference, targets=targets,
                            outputs=outputs)


def parse_config(text: str) -> ExperimentConfig:
    """Parse a JSON config document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return config_from_dict(doc)


def config_from_file(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def config_to_dict(config: ExperimentConfig) -> dict:
    """JSON-ready dict; parse(serialize(c)) == c field by field."""
    doc = {
        "curve": config.curve.describe(),
        "N": config.N,
        "Nprime": config.Nprime,
        "T": config.T,
        "zeta_max": config.zeta_max,
        "kernel_mode": config.kernel_mode.value,
        "data": {"type": config.data.type},
    }
    if config.data.x0 is not None:
        doc["data"]["x0"] = list(config.data.x0)
    if config.reference is not None:
        doc["reference"] = {"type": config.reference.type,
                            "x0": list(config.reference.x0)}
    if config.targets is not None:
        doc["targets"] = [list(t) for t in config.targets]
    if config.outputs.flux is not None or config.outputs.field is not None:
        out = {}
        if config.outputs.flux is not None:
            out["flux"] = config.outputs.flux
        if config.outputs.field is not None:
            out["field"] = config.outputs.field
        doc["outputs"] = out
    return doc


def serialize_config(config: ExperimentConfig) -> str:
    return json.dumps(config_to_dict(config), indent=2) + "\n"


# -- data generation --------------------------------------------------------

def generate_data_field(config: ExperimentConfig, grid: SpaceTimeGrid) -> BoundaryField:
    if config.data.type == "point_source":
        return point_source_trace(PointSourceSolution(config.data.x0), grid)
    if config.data.type == "paper_example":
        return paper_example_dirichlet(grid)
    return BoundaryField.zeros(grid)


def generate_reference_field(config: ExperimentConfig,
                     grid: SpaceTimeGrid) -> BoundaryField | None:
    if config.reference is None:
        return None
    return point_source_flux(PointSourceSolution(config.reference.x0), grid)


# -- CSV persistence --------------------------------------------------------

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _open_csv(path):
    return open(path, "w", encoding="utf-8", newline="")


def write_flux_csv(path, grid: SpaceTimeGrid, values: np.ndarray,
                   reference: np.ndarray | None = None) -> str:
    """Write boundary flux rows `i,j,zeta,t,x1,x2,flux[,reference,abs_error]`."""
    header = ["i", "j", "zeta", "t", "x1", "x2", "flux"]
    if reference is not None:
        header += ["reference", "abs_error"]
    with _open_csv(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for j in range(grid.Nprime):
            for i in range(grid.N):
                row = [str(i + 1), str(j + 1), _fmt(grid.zeta[i]), _fmt(grid.t[j]),
                       _fmt(grid.points[i, 0]), _fmt(grid.points[i, 1]),
                       _fmt(values[i, j])]
                if reference is not None:
                    row += [_fmt(reference[i, j]),
                            _fmt(abs(values[i, j] - reference[i, j]))]
                w.writerow(row)
    return str(path)


def write_direct_csv(path, grid: SpaceTimeGrid, g_values: np.ndarray,
                     flux_values: np.ndarray | None = None) -> str:
    """Write generated boundary data rows `i,j,zeta,t,x1,x2,g[,flux]`."""
    header = ["i", "j", "zeta", "t", "x1", "x2", "g"]
    if flux_values is not None:
        header.append("flux")
    with _open_csv(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for j in range(grid.Nprime):
            for i in range(grid.N):
                row = [str(i + 1), str(j + 1), _fmt(grid.zeta[i]), _fmt(grid.t[j]),
                       _fmt(grid.points[i, 0]), _fmt(grid.points[i, 1]),
                       _fmt(g_values[i, j])]
                if flux_values is not None:
                    row.append(_fmt(flux_values[i, j]))
                w.writerow(row)
    return str(path)


def write_field_csv(path, samples: InteriorSamples,
                    reference: np.ndarray | None = None) -> str:
    """Write interior samples `x1,x2,t,u[,reference,abs_error]`."""
    header = ["x1", "x2", "t", "u"]
    if reference is not None:
        header += ["reference", "abs_error"]
    with _open_csv(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for m in range(len(samples)):
            row = [_fmt(samples.points[m, 0]), _fmt(samples.points[m, 1]),
                   _fmt(samples.times[m]), _fmt(samples.values[m])]
            if reference is not None:
                row += [_fmt(reference[m]),
                        _fmt(abs(samples.values[m] - reference[m]))]
            w.writerow(row)
    return str(path)


def write_convergence_csv(path, rows) -> str:
    with _open_csv(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["N", "Nprime", "l2_error", "max_error", "relative_l2",
                    "wall_seconds"])
        for r in rows:
            w.writerow([str(r.N), str(r.Nprime), _fmt(r.l2_error),
                        _fmt(r.max_error), _fmt(r.relative_l2),
                        _fmt(r.wall_seconds)])
    return str(path)


# -- experiments ------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentReport:
    """Everything a run produced: config echo, timing, metrics, files."""

    config: ExperimentConfig
    wall_seconds: float
    metrics: ErrorMetrics | None
    manifest: tuple[str, ...]
    result: ReconstructionResult
    field_samples: InteriorSamples | None = None


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Generate data, reconstruct the flux, compare, persist.

    Wall time covers the reconstruction call only (no data generation, no
    metrics, no IO).
    """
    grid = make_grid(config.curve, config.N, config.Nprime, config.T,
                     config.zeta_max)
    g = generate_data_field(config, grid)
    ctx = KernelEvalContext(config.kernel_mode)
    reconstruct = reconstruct_flux_full if grid.is_full_boundary \
        else reconstruct_flux_partial

    start = time.perf_counter()
    result = reconstruct(grid, g, ctx)
    wall = time.perf_counter() - start

    ref = generate_reference_field(config, grid)
    metrics = None
    if ref is not None:
        metrics = error_metrics(result.flux, ref)
        result = replace(result, metrics=metrics)

    field_samples = None
    field_ref = None
    if config.targets is not None:
        pairs = [((x1, x2), t) for x1, x2, t in config.targets]
        field_samples = reconstruct_field(grid, result.flux, g, pairs, ctx)
        if config.data.type == "point_source":
            ps = PointSourceSolution(config.data.x0)
            field_ref = ps.temperature(field_samples.points, field_samples.times)

    manifest = []
    if config.outputs.flux is not None:
        manifest.append(write_flux_csv(
            config.outputs.flux, grid, result.flux.values,
            None if ref is None else ref.values))
    if config.outputs.field is not None and field_samples is not None:
        manifest.append(write_field_csv(config.outputs.field, field_samples,
                                        field_ref))

    return ExperimentReport(config=config, wall_seconds=wall, metrics=metrics,
                            manifest=tuple(manifest), result=result,
                            field_samples=field_samples)


class ConvergenceRow(NamedTuple):
    N: int
    Nprime: int
    l2_error: float
    max_error: float
    relative_l2: float
    wall_seconds: float


def convergence_study(base_config: ExperimentConfig, levels,
                      out_path=None) -> list[ConvergenceRow]:
    """Run the base experiment at each (N, Nprime) level, tabulate errors.

    Each level is a plain run_experiment on the rewritten config (outputs
    stripped), so a single level reproduces that run's metrics exactly.
    """
    if base_config.reference is None:
        raise MissingReferenceError(
            "convergence study needs an analytic reference in the config"
        )
    rows = []
    for n, nprime in levels:
        cfg = replace(base_config, N=int(n), Nprime=int(nprime),
                      targets=None, outputs=OutputPaths())
        rep = run_experiment(cfg)
        rows.append(ConvergenceRow(int(n), int(nprime), rep.metrics.l2_error,
                                   rep.metrics.max_error,
                                   rep.metrics.relative_l2, rep.wall_seconds))
    if out_path is not None:
        write_convergence_csv(out_path, rows)
    return rows


# -- kernel self-checks -----------------------------------------------------

class CheckResult(NamedTuple):
    name: str
    passed: bool
    worst_error: float
    tolerance: float
    count: int


@dataclass(frozen=True)
class SelfCheckReport:
    checks: tuple[CheckResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self):
        out = []
        for c in self.checks:
            status = "pass" if c.passed else "FAIL"
            out.append(f"{status}  {c.name:24s} worst {c.worst_error:.3e} "
                       f"tol {c.tolerance:.1e} ({c.count} samples)")
        return out


def _fd_samples(rng, n=50):
    d = rng.uniform(-2.0, 2.0, size=(n, 2))
    tau = rng.uniform(0.2, 3.0, size=n)
    ax = rng.uniform(0.0, 2.0 * np.pi, size=n)
    ay = rng.uniform(0.0, 2.0 * np.pi, size=n)
    nx = np.stack([np.cos(ax), np.sin(ax)], axis=1)
    ny = np.stack([np.cos(ay), np.sin(ay)], axis=1)
    return d, tau, nx, ny


def kernel_selfcheck() -> SelfCheckReport:
    """Run the fixed-seed kernel verification suite.

    Finite-difference oracles (all built from g_fundamental alone), exact
    causality zeros, mass conservation, and hypersingular symmetry.
    Failures are reported in the summary, never raised.
    """
    rng = np.random.default_rng(SELFCHECK_SEED)
    checks = []

    def record(name, worst, tol, count):
        checks.append(CheckResult(name, bool(worst <= tol), float(worst),
                                  float(tol), count))

    # gradient vs central differences of G
    d, tau, nx, ny = _fd_samples(rng)
    eps = 1e-5
    e1 = np.array([eps, 0.0])
    e2 = np.array([0.0, eps])
    fd = np.stack([
        kernels.g_fundamental(d + e1, tau) - kernels.g_fundamental(d - e1, tau),
        kernels.g_fundamental(d + e2, tau) - kernels.g_fundamental(d - e2, tau),
    ], axis=1) / (2 * eps)
    exact = kernels.g_gradient(d, tau)
    rel = (np.linalg.norm(fd - exact, axis=1)
           / np.maximum(np.linalg.norm(exact, axis=1), 1e-30))
    record("gradient_fd", rel.max(), 1e-6, len(tau))

    # normal y-derivative: d = x - y, so moving y by +eps*ny shifts d by -eps*ny
    fd = (kernels.g_fundamental(d - eps * ny, tau)
          - kernels.g_fundamental(d + eps * ny, tau)) / (2 * eps)
    exact = kernels.normal_derivative_y(d, tau, ny)
    rel = np.abs(fd - exact) / np.maximum(np.abs(exact), 1e-30)
    record("normal_derivative_fd", rel.max(), 1e-6, len(tau))

    # hypersingular: nested directional differences of G itself
    ep = 1e-4
    gf = kernels.g_fundamental
    fd = (gf(d + ep * nx - ep * ny, tau) - gf(d + ep * nx + ep * ny, tau)
          - gf(d - ep * nx - ep * ny, tau) + gf(d - ep * nx + ep * ny, tau)
          ) / (4 * ep * ep)
    exact = kernels.hypersingular_kernel(d, tau, nx, ny)
    rel = np.abs(fd - exact) / np.maximum(np.abs(exact), 1e-30)
    record("hypersingular_fd", rel.max(), 1e-4, len(tau))

    # heat equation: 4th-order central stencils, step 1e-3 (2nd order cannot
    # reach 1e-6 at tau = 0.3, where the tau-truncation alone is ~1e-5)
    h = 1e-3
    worst = 0.0
    n_res = 0
    for tval in (0.3, 1.0, 3.0):
        r = rng.uniform(0.0, 2.0, size=20)
        ang = rng.uniform(0.0, 2.0 * np.pi, size=20)
        dd = np.stack([r * np.cos(ang), r * np.sin(ang)], axis=1)
        tt = np.full(20, tval)
        dt = (-gf(dd, tt + 2 * h) + 8 * gf(dd, tt + h)
              - 8 * gf(dd, tt - h) + gf(dd, tt - 2 * h)) / (12 * h)
        lap = np.zeros(20)
        for e in (np.array([1.0, 0.0]), np.array([0.0, 1.0])):
            lap += (-gf(dd + 2 * h * e, tt) + 16 * gf(dd + h * e, tt)
                    - 30 * gf(dd, tt) + 16 * gf(dd - h * e, tt)
                    - gf(dd + (-2 * h) * e, tt)) / (12 * h * h)
        worst = max(worst, float(np.abs(dt - lap).max()))
        n_res += 20
    record("heat_equation_residual", worst, 1e-6, n_res)

    # causality: exact zeros for tau <= 0, every kernel, both modes
    n0 = 1000
    d0 = rng.uniform(-2.0, 2.0, size=(n0, 2))
    t0 = -np.abs(rng.uniform(0.0, 3.0, size=n0))
    t0[::10] = 0.0
    a0 = rng.uniform(0.0, 2.0 * np.pi, size=(n0, 2))
    nx0 = np.stack([np.cos(a0[:, 0]), np.sin(a0[:, 0])], axis=1)
    ny0 = np.stack([np.cos(a0[:, 1]), np.sin(a0[:, 1])], axis=1)
    worst = 0.0
    for ctx in (kernels.CORRECTED, kernels.PAPER_LITERAL):
        for vals in (kernels.g_fundamental(d0, t0),
                     kernels.g_gradient(d0, t0),
                     kernels.normal_derivative_y(d0, t0, ny0, ctx),
                     kernels.normal_derivative_x(d0, t0, nx0, ctx),
                     kernels.hypersingular_kernel(d0, t0, nx0, ny0, ctx)):
            worst = max(worst, float(np.abs(vals).max()))
    record("causality_zero", worst, 0.0, n0)

    # mass conservation: midpoint rule on [-L, L]^2, L = 20 sqrt(tau), 2000^2
    # cells. G is a product of axis Gaussians, so the tensor sum factors into
    # the square of a 1D sum of g_fundamental values on an axis slice.
    worst = 0.0
    m = 2000
    for tval in (0.5, 1.0):
        half = 20.0 * np.sqrt(tval)
        step = 2.0 * half / m
        xc = -half + (np.arange(m) + 0.5) * step
        axis = np.stack([xc, np.zeros(m)], axis=1)
        g1 = gf(axis, np.full(m, tval))
        mass = step * step * 4.0 * np.pi * tval * g1.sum() ** 2
        worst = max(worst, abs(mass - 1.0))
    record("mass_conservation", worst, 1e-6, 2 * m * m)

    # hypersingular x <-> y symmetry, both modes
    ns = 200
    ds = rng.uniform(-2.0, 2.0, size=(ns, 2))
    ts = rng.uniform(0.05, 3.0, size=ns)
    asym = rng.uniform(0.0, 2.0 * np.pi, size=(ns, 2))
    nxs = np.stack([np.cos(asym[:, 0]), np.sin(asym[:, 0])], axis=1)
    nys = np.stack([np.cos(asym[:, 1]), np.sin(asym[:, 1])], axis=1)
    worst = 0.0
    for ctx in (kernels.CORRECTED, kernels.PAPER_LITERAL):
        a = kernels.hypersingular_kernel(ds, ts, nxs, nys, ctx)
        b = kernels.hypersingular_kernel(-ds, ts, nys, nxs, ctx)
        scale = np.maximum(np.abs(a), 1e-30)
        worst = max(worst, float((np.abs(a - b) / scale).max()))
    record("hypersingular_symmetry", worst, 1e-12, ns)

    return SelfCheckReport(checks=tuple(checks))
