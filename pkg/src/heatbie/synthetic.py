"""Manufactured solutions, published example data, and the causal solve.

An exterior point source provides the exact-solution oracle: for a source
location x0 strictly outside the closed curve,

    u(x, t) = G(x - x0, t)

solves the heat equation inside the domain with identically zero initial
data (the initial delta sits outside), so its boundary trace and outward
normal derivative form a consistent Cauchy pair

    g(i, j)   = G(gamma_i - x0, t_j)
    phi(i, j) = nu_i . grad G(gamma_i - x0, t_j).

A margin dist(x0, boundary) >= 0.5 is enforced so the data stays resolvable
on coarse grids.

The module also provides the closed 2|x| cos(3t) Dirichlet example used by
the published test case, and a forward-substitution solver for the discrete
second-kind equation (1/2 I + D) phi_trace = S phi: causality zeroes the
diagonal time block of D, so the system is block lower triangular with an
invertible (scalar 1/2) diagonal and marches explicitly in time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .exceptions import SourceInsideDomainError
from .geometry import BoundaryCurve, SpaceTimeGrid, distance_to_curve, point_in_curve
from .kernels import CORRECTED, KernelEvalContext
from .potentials import BoundaryField, operator_time_blocks, single_layer_apply

SOURCE_MARGIN = 0.5


@dataclass(frozen=True)
class PointSourceSolution:
    """Exterior point source x0 generating u(x, t) = G(x - x0, t)."""

    x0: tuple[float, float]

    def __post_init__(self):
        object.__setattr__(self, "x0", (float(self.x0[0]), float(self.x0[1])))

    def validate_for_curve(self, curve: BoundaryCurve):
        """Check x0 lies outside the curve with the required margin."""
        if point_in_curve(curve, self.x0):
            raise SourceInsideDomainError(
                f"point source {self.x0} lies inside the boundary curve"
            )
        dist = distance_to_curve(curve, self.x0)
        if dist < SOURCE_MARGIN:
            raise SourceInsideDomainError(
                f"point source {self.x0} is {dist:.3f} from the boundary; "
                f"margin {SOURCE_MARGIN} required"
            )

    def temperature(self, points, times):
        """Exact field G(x - x0, t) at arbitrary points and times."""
        d = np.asarray(points, dtype=float) - np.asarray(self.x0)
        return kernels.g_fundamental(d, np.asarray(times, dtype=float))


def point_source_trace(ps: PointSourceSolution, grid: SpaceTimeGrid) -> BoundaryField:
    """Dirichlet trace g(i, j) = G(gamma_i - x0, t_j) of the source field."""
    ps.validate_for_curve(grid.curve)
    d = grid.points - np.asarray(ps.x0)                     # (N, 2)
    vals = kernels.g_fundamental(d[:, None, :], grid.t[None, :])
    return BoundaryField(grid, vals)


def point_source_flux(ps: PointSourceSolution, grid: SpaceTimeGrid) -> BoundaryField:
    """Outward flux phi(i, j) = nu_i . grad G(gamma_i - x0, t_j)."""
    ps.validate_for_curve(grid.curve)
    d = grid.points - np.asarray(ps.x0)
    grad = kernels.g_gradient(d[:, None, :], grid.t[None, :])  # (N, N', 2)
    vals = np.einsum("ij...d,id->ij...", grad, grid.normals)
    return BoundaryField(grid, vals)


def paper_example_dirichlet(grid: SpaceTimeGrid) -> BoundaryField:
    """Published example data g(i, j) = 2 |gamma_i| cos(3 t_j)."""
    r = np.linalg.norm(grid.points, axis=1)
    vals = 2.0 * r[:, None] * np.cos(3.0 * grid.t[None, :])
    return BoundaryField(grid, vals)


def solve_second_kind(grid: SpaceTimeGrid, phi: BoundaryField,
                      ctx: KernelEvalContext = CORRECTED) -> BoundaryField:
    """Solve (1/2 I + D) phi_trace = S phi by causal forward substitution.

    The diagonal time block of D vanishes (zero-lag kernels are zero), so
    time block j is phi_trace_j = 2 [ (S phi)_j - sum_{m>=1} D_m phi_trace_{j-m} ].
    The computed solution satisfies the assembled system to rounding.
    """
    rhs = single_layer_apply(grid, phi, ctx).values
    blocks = operator_time_blocks(grid, "double", ctx)
    vals = np.zeros_like(rhs)
    for j in range(grid.Nprime):
        acc = rhs[:, j].copy()
        for m in range(1, j + 1):
            acc -= blocks[m] @ vals[:, j - m]
        vals[:, j] = 2.0 * acc
    return BoundaryField(grid, vals)
