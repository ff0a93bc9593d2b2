"""Command-line front end.

Subcommands
-----------
kernel-check
    Run the fixed-seed kernel verification suite.  Exit code 2 when any
    numerical check fails.
direct --config c.json --out data.csv
    Generate boundary data (and the analytic flux when the data generator
    is a point source) and write it as CSV.
inverse --config c.json --out flux.csv
    Reconstruct the flux from generated data; full or partial boundary is
    chosen by zeta_max in the config.
field --config c.json --out field.csv
    Reconstruct interior temperatures at the config's targets.
convergence --config c.json --levels 16x32,32x64 --out table.csv
    Error table across grid levels (config must carry a reference).

`--mode corrected|paper` (before or after the subcommand) overrides the
config's kernel mode.  Figures are rendered next to each CSV by default;
disable with --no-figures.  Exit codes: 0 success, 1 validation or IO
error, 2 numerical self-check failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .exceptions import ConfigError, ToolkitError
from .geometry import make_grid
from .harness import (
    OutputPaths,
    config_from_file,
    convergence_study,
    kernel_selfcheck,
    run_experiment,
    write_direct_csv,
)
from .kernels import KernelMode
from .synthetic import PointSourceSolution, point_source_flux


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heatbie",
        description="Boundary-integral heat flux reconstruction toolkit.",
    )
    parser.add_argument("--mode", choices=["corrected", "paper"],
                        dest="mode_global", default=None,
                        help="override the config's kernel mode")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=["corrected", "paper"],
                        dest="mode_sub", default=None,
                        help="override the config's kernel mode")
    common.add_argument("--config", required=True, help="JSON config path")
    common.add_argument("--out", required=True, help="output CSV path")
    common.add_argument("--figures", action=argparse.BooleanOptionalAction,
                        default=True,
                        help="render figures next to the CSV (default on)")

    sub.add_parser("kernel-check", help="run the kernel verification suite")
    sub.add_parser("direct", parents=[common],
                   help="generate boundary data CSV")
    sub.add_parser("inverse", parents=[common],
                   help="reconstruct boundary flux CSV")
    sub.add_parser("field", parents=[common],
                   help="reconstruct interior temperatures CSV")
    conv = sub.add_parser("convergence", parents=[common],
                          help="error table across grid levels")
    conv.add_argument("--levels", required=True,
                      help="comma-separated NxM grid levels, e.g. 16x32,32x64")
    return parser


def _parse_levels(text: str):
    levels = []
    for chunk in text.split(","):
        parts = chunk.strip().lower().split("x")
        if len(parts) != 2:
            raise ConfigError(f"bad level {chunk!r}; expected NxM")
        try:
            levels.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            raise ConfigError(f"bad level {chunk!r}; expected NxM") from exc
    return levels


def _load_config(args):
    cfg = config_from_file(args.config)
    mode = args.mode_sub or args.mode_global
    if mode is not None:
        cfg = replace(cfg, kernel_mode=KernelMode.parse(mode))
    return cfg


def _figure_path(out: str) -> str:
    return str(Path(out).with_suffix(".png"))


def _cmd_kernel_check(args) -> int:
    report = kernel_selfcheck()
    for line in report.lines():
        print(line)
    return 0 if report.all_passed else 2


def _cmd_direct(args) -> int:
    cfg = _load_config(args)
    grid = make_grid(cfg.curve, cfg.N, cfg.Nprime, cfg.T, cfg.zeta_max)
    from .harness import generate_data_field

    g = generate_data_field(cfg, grid)
    flux = None
    if cfg.data.type == "point_source":
        flux = point_source_flux(PointSourceSolution(cfg.data.x0), grid)
    path = write_direct_csv(args.out, grid, g.values,
                            None if flux is None else flux.values)
    print(f"wrote {path} ({grid.N * grid.Nprime} rows)")
    if args.figures:
        from . import plots

        print("figure", plots.boundary_heatmap(_figure_path(args.out), grid,
                                               g.values, "boundary data g"))
    return 0


def _cmd_inverse(args) -> int:
    cfg = _load_config(args)
    cfg = replace(cfg, outputs=OutputPaths(flux=args.out))
    report = run_experiment(cfg)
    print(f"reconstruction ({cfg.kernel_mode.value} mode) took "
          f"{report.wall_seconds:.3f} s")
    if report.metrics is not None:
        m = report.metrics
        print(f"l2_error {m.l2_error:.6e}  max_error {m.max_error:.6e}  "
              f"relative_l2 {m.relative_l2:.6e}")
    for path in report.manifest:
        print(f"wrote {path}")
    if args.figures:
        from . import plots
        from .harness import generate_reference_field

        grid = report.result.grid
        ref = generate_reference_field(cfg, grid)
        print("figure", plots.boundary_heatmap(
            _figure_path(args.out), grid, report.result.flux.values,
            "reconstructed flux", None if ref is None else ref.values))
    return 0


def _cmd_field(args) -> int:
    cfg = _load_config(args)
    if cfg.targets is None:
        raise ConfigError("field subcommand requires interior targets "
                          "in the config")
    cfg = replace(cfg, outputs=OutputPaths(field=args.out))
    report = run_experiment(cfg)
    for path in report.manifest:
        print(f"wrote {path}")
    if args.figures:
        from . import plots

        samples = report.field_samples
        ref = None
        if cfg.data.type == "point_source":
            ps = PointSourceSolution(cfg.data.x0)
            ref = ps.temperature(samples.points, samples.times)
        print("figure", plots.field_plot(_figure_path(args.out), samples, ref))
    return 0


def _cmd_convergence(args) -> int:
    cfg = _load_config(args)
    levels = _parse_levels(args.levels)
    rows = convergence_study(cfg, levels, out_path=args.out)
    print("N      Nprime l2_error      max_error     relative_l2   seconds")
    for r in rows:
        print(f"{r.N:<6d} {r.Nprime:<6d} {r.l2_error:<13.6e} "
              f"{r.max_error:<13.6e} {r.relative_l2:<13.6e} "
              f"{r.wall_seconds:.3f}")
    print(f"wrote {args.out}")
    if args.figures and rows:
        from . import plots

        print("figure", plots.convergence_plot(_figure_path(args.out), rows))
    return 0


_COMMANDS = {
    "kernel-check": _cmd_kernel_check,
    "direct": _cmd_direct,
    "inverse": _cmd_inverse,
    "field": _cmd_field,
    "convergence": _cmd_convergence,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
