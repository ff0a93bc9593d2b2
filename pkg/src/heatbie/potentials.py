"""Discrete boundary heat operators and interior field evaluation.

Formulation
-----------
For a density f on the space-time boundary grid, every operator here is the
rectangle-rule Nystrom sum

    out(i, j) = sum_{k=1..N} sum_{l=1..N'} h h' kernel(gamma_i - gamma_k,
                  t_j - t_l, ...) f(k, l) |gamma'(zeta_k)|

with kernels from :mod:`heatbie.kernels`:

    single layer  S   : G
    double layer  D   : d G / d nu(y)                (nu at source node k)
    adjoint       D'  : d G / d nu(x)                (nu at target node i)
    hypersingular H   : -  d^2 G / (d nu(x) d nu(y)) (leading minus from the
                                                      operator definition)

Causality (kernel = 0 for t_j - t_l <= 0) makes the time structure strictly
lower triangular, so in time the sum is a causal convolution: with lag
matrices K_m[i, k] = kernel(gamma_i - gamma_k, m h'), the j-th time column
is sum_{m >= 1} K_m @ column_{j - m}.  No singularity subtraction or product
integration is applied anywhere; dropping the zero-lag term is the entire
treatment of the diagonal.

Operators are exposed two ways: matrix-free applies (streaming over time
lags, never materializing more than one N x N block) and assembled weighted
time blocks / full matrices for the causal solve and brute-force tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import kernels
from .exceptions import (
    DimensionMismatchError,
    GridMismatchError,
    InvalidParameterError,
    PointOutsideDomainError,
)
from .geometry import SpaceTimeGrid, distance_to_curve, point_in_curve
from .kernels import CORRECTED, KernelEvalContext

BOUNDARY_TOL = 1e-9

OPERATOR_KINDS = ("single", "double", "adjoint", "hypersingular")

_OPERATOR_SIGN = {"single": 1.0, "double": 1.0, "adjoint": 1.0, "hypersingular": -1.0}


@dataclass(eq=False)
class BoundaryField:
    """Real values attached to the (space node, time node) grid.

    ``values[i - 1, j - 1]`` is the sample at (zeta_i, t_j).  Entries must be
    finite and the shape must match the grid exactly.
    """

    grid: SpaceTimeGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.grid.N, self.grid.Nprime):
            raise DimensionMismatchError(
                f"field shape {vals.shape} does not match grid "
                f"({self.grid.N}, {self.grid.Nprime})"
            )
        if not np.all(np.isfinite(vals)):
            raise InvalidParameterError("field contains non-finite entries")
        self.values = vals

    @classmethod
    def zeros(cls, grid: SpaceTimeGrid) -> "BoundaryField":
        return cls(grid, np.zeros((grid.N, grid.Nprime)))

    @classmethod
    def impulse(cls, grid: SpaceTimeGrid, k: int, l: int) -> "BoundaryField":
        """Unit impulse at space node k, time node l (1-based)."""
        vals = np.zeros((grid.N, grid.Nprime))
        vals[k - 1, l - 1] = 1.0
        return cls(grid, vals)


@dataclass(eq=False)
class InteriorSamples:
    """Temperature samples at interior space-time targets."""

    points: np.ndarray
    times: np.ndarray
    values: np.ndarray
    on_boundary: np.ndarray = dc_field(default=None)

    def __post_init__(self):
        self.points = np.atleast_2d(np.asarray(self.points, dtype=float))
        self.times = np.atleast_1d(np.asarray(self.times, dtype=float))
        self.values = np.atleast_1d(np.asarray(self.values, dtype=float))
        if self.on_boundary is None:
            self.on_boundary = np.zeros(len(self.times), dtype=bool)
        self.on_boundary = np.atleast_1d(np.asarray(self.on_boundary, dtype=bool))
        n = len(self.times)
        if self.points.shape != (n, 2) or self.values.shape != (n,) \
                or self.on_boundary.shape != (n,):
            raise DimensionMismatchError("inconsistent sample array lengths")

    def __len__(self):
        return len(self.times)


def _check_field(grid: SpaceTimeGrid, field: BoundaryField, name: str):
    if field.grid is not grid and not grid.same_discretization(field.grid):
        raise GridMismatchError(f"{name} lives on a different grid")


def lag_matrix(grid: SpaceTimeGrid, kind: str, m: int,
               ctx: KernelEvalContext = CORRECTED) -> np.ndarray:
    """Raw kernel matrix K_m[i, k] at time lag tau = m * hprime.

    No quadrature weights, no operator sign; identically zero for m <= 0.
    """
    if kind not in OPERATOR_KINDS:
        raise InvalidParameterError(f"unknown operator kind {kind!r}")
    n = grid.N
    if m <= 0:
        return np.zeros((n, n))
    tau = m * grid.hprime
    d = grid.points[:, None, :] - grid.points[None, :, :]
    if kind == "single":
        return kernels.g_fundamental(d, tau)
    if kind == "double":
        return kernels.normal_derivative_y(d, tau, grid.normals[None, :, :], ctx)
    if kind == "adjoint":
        return kernels.normal_derivative_x(d, tau, grid.normals[:, None, :], ctx)
    return kernels.hypersingular_kernel(
        d, tau, grid.normals[:, None, :], grid.normals[None, :, :], ctx
    )


def operator_time_blocks(grid: SpaceTimeGrid, kind: str,
                         ctx: KernelEvalContext = CORRECTED) -> np.ndarray:
    """Weighted causal time blocks B, shape (Nprime, N, N).

    B[m] includes the quadrature weight h h' |gamma'(zeta_k)| and the
    operator sign, so the block-Toeplitz operator action is
    out_col(j) = sum_m B[m] @ density_col(j - m).  B[0] is zero.
    """
    if kind not in OPERATOR_KINDS:
        raise InvalidParameterError(f"unknown operator kind {kind!r}")
    w = _OPERATOR_SIGN[kind] * grid.h * grid.hprime * grid.speeds[None, :]
    out = np.zeros((grid.Nprime, grid.N, grid.N))
    for m in range(1, grid.Nprime):
        out[m] = lag_matrix(grid, kind, m, ctx) * w
    return out


def assemble_operator_matrix(grid: SpaceTimeGrid, kind: str,
                             ctx: KernelEvalContext = CORRECTED) -> np.ndarray:
    """Full dense (N Nprime) x (N Nprime) operator matrix.

    Flat index (j - 1) * N + (i - 1): time-major blocks.  Intended for small
    grids (brute-force tests, residual checks); the applies never build it.
    """
    blocks = operator_time_blocks(grid, kind, ctx)
    n, np_ = grid.N, grid.Nprime
    out = np.zeros((n * np_, n * np_))
    for j in range(np_):
        for l in range(j):
            out[j * n:(j + 1) * n, l * n:(l + 1) * n] = blocks[j - l]
    return out


def _apply(grid: SpaceTimeGrid, kind: str, density: BoundaryField,
           ctx: KernelEvalContext) -> BoundaryField:
    _check_field(grid, density, "density")
    w = (_OPERATOR_SIGN[kind] * grid.h * grid.hprime
         * grid.speeds[:, None] * density.values)
    out = np.zeros_like(w)
    np_ = grid.Nprime
    for m in range(1, np_):
        out[:, m:] += lag_matrix(grid, kind, m, ctx) @ w[:, :np_ - m]
    return BoundaryField(grid, out)


def single_layer_apply(grid: SpaceTimeGrid, q: BoundaryField,
                       ctx: KernelEvalContext = CORRECTED) -> BoundaryField:
    """Discrete single-layer potential S q on the boundary grid."""
    return _apply(grid, "single", q, ctx)


def double_layer_apply(grid: SpaceTimeGrid, phi_density: BoundaryField,
                       ctx: KernelEvalContext = CORRECTED) -> BoundaryField:
    """Discrete double-layer potential D phi (normal at the source node)."""
    return _apply(grid, "double", phi_density, ctx)


def adjoint_double_layer_apply(grid: SpaceTimeGrid, q: BoundaryField,
                               ctx: KernelEvalContext = CORRECTED) -> BoundaryField:
    """Discrete spatial-adjoint double layer D' q (normal at the target node)."""
    return _apply(grid, "adjoint", q, ctx)


def hypersingular_apply(grid: SpaceTimeGrid, phi_density: BoundaryField,
                        ctx: KernelEvalContext = CORRECTED) -> BoundaryField:
    """Discrete hypersingular operator H phi, leading minus included."""
    return _apply(grid, "hypersingular", phi_density, ctx)


def representation_values(grid: SpaceTimeGrid, q_values: np.ndarray,
                          phi_values: np.ndarray, points: np.ndarray,
                          times: np.ndarray,
                          ctx: KernelEvalContext = CORRECTED) -> np.ndarray:
    """Evaluate the single-minus-double layer representation off the boundary.

    u(x, t) = sum_{k,l} h h' |gamma'_k| [ G(x - gamma_k, t - t_l) q(k, l)
              - dG/dnu(y) (x - gamma_k, t - t_l) phi(k, l) ]

    ``points`` has shape (M, 2), ``times`` (M,).  Causality zeroes t <= t_l
    terms through the kernels, so any time in (0, T] is valid.
    """
    d = points[:, None, :] - grid.points[None, :, :]        # (M, N, 2)
    tau = times[:, None, None] - grid.t[None, :, None]      # (M, N', 1)
    gv = kernels.g_fundamental(d[:, None, :, :], tau)       # (M, N', N)
    dv = kernels.normal_derivative_y(
        d[:, None, :, :], tau, grid.normals[None, None, :, :], ctx
    )
    w = grid.h * grid.hprime * grid.speeds[None, :]
    integrand = gv * q_values.T[None, :, :] - dv * phi_values.T[None, :, :]
    return (integrand * w[None, :, :]).sum(axis=(1, 2))


def _classify_target(grid: SpaceTimeGrid, point, time):
    if not 0.0 < time <= grid.T:
        raise InvalidParameterError(
            f"target time {time} outside (0, {grid.T}]"
        )
    dist = distance_to_curve(grid.curve, point)
    if dist < BOUNDARY_TOL:
        return "boundary"
    if point_in_curve(grid.curve, point):
        return "inside"
    return "outside"


def evaluate_interior(grid: SpaceTimeGrid, q: BoundaryField,
                      phi_density: BoundaryField, targets,
                      ctx: KernelEvalContext = CORRECTED) -> InteriorSamples:
    """Evaluate the representation at targets strictly inside the domain.

    ``targets`` is a sequence of ((x1, x2), t) pairs.  Boundary or exterior
    points raise :class:`PointOutsideDomainError`; use the inverse module's
    field reconstruction to evaluate at (flagged) boundary nodes.
    """
    _check_field(grid, q, "q")
    _check_field(grid, phi_density, "phi_density")
    pts, ts = _split_targets(targets)
    for p, t in zip(pts, ts):
        if _classify_target(grid, p, t) != "inside":
            raise PointOutsideDomainError(
                f"target {tuple(p)} is not strictly inside the boundary curve"
            )
    vals = representation_values(grid, q.values, phi_density.values, pts, ts, ctx)
    return InteriorSamples(points=pts, times=ts, values=vals,
                           on_boundary=np.zeros(len(ts), dtype=bool))


def _split_targets(targets):
    pts = []
    ts = []
    for entry in targets:
        point, time = entry
        pts.append(np.asarray(point, dtype=float))
        ts.append(float(time))
    if not pts:
        return np.zeros((0, 2)), np.zeros(0)
    return np.stack(pts), np.asarray(ts)


def cauchy_residuals(grid: SpaceTimeGrid, q: BoundaryField,
                     phi_density: BoundaryField, g: BoundaryField,
                     phi: BoundaryField,
                     ctx: KernelEvalContext = CORRECTED) -> tuple[float, float]:
    """Max-norm defects of the two boundary identities linking Cauchy data.

    r1 = S q + (1/2 I - D) phi_density - g      (Dirichlet trace identity)
    r2 = (1/2 I + D') q + H phi_density - phi   (Neumann trace identity)

    For consistent continuous data both vanish; the returned values measure
    the discrete quadrature defect.
    """
    for name, f in [("q", q), ("phi_density", phi_density), ("g", g), ("phi", phi)]:
        _check_field(grid, f, name)
    r1 = (single_layer_apply(grid, q, ctx).values
          + 0.5 * phi_density.values
          - double_layer_apply(grid, phi_density, ctx).values
          - g.values)
    r2 = (0.5 * q.values
          + adjoint_double_layer_apply(grid, q, ctx).values
          + hypersingular_apply(grid, phi_density, ctx).values
          - phi.values)
    return float(np.max(np.abs(r1))), float(np.max(np.abs(r2)))
