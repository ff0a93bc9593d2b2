"""Figure rendering for the CLI report paths.

CSV files remain the canonical output; these figures are a convenience
rendered next to them.  Everything uses the Agg backend so the CLI works
headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .geometry import SpaceTimeGrid
from .potentials import InteriorSamples


def _edges(centers, step):
    return np.concatenate([centers - 0.5 * step, [centers[-1] + 0.5 * step]])


def boundary_heatmap(path, grid: SpaceTimeGrid, values: np.ndarray,
                     label: str, reference: np.ndarray | None = None) -> str:
    """Space-time heatmap of a boundary field; adds an error panel if a
    reference is supplied."""
    te = _edges(grid.t, grid.hprime)
    ze = _edges(grid.zeta, grid.h)
    ncols = 2 if reference is not None else 1
    fig, axes = plt.subplots(1, ncols, figsize=(5.2 * ncols, 4.0), squeeze=False)
    ax = axes[0, 0]
    pc = ax.pcolormesh(te, ze, values, shading="flat")
    fig.colorbar(pc, ax=ax)
    ax.set_xlabel("t")
    ax.set_ylabel("zeta")
    ax.set_title(label)
    if reference is not None:
        ax2 = axes[0, 1]
        pc2 = ax2.pcolormesh(te, ze, np.abs(values - reference), shading="flat")
        fig.colorbar(pc2, ax=ax2)
        ax2.set_xlabel("t")
        ax2.set_ylabel("zeta")
        ax2.set_title("abs error")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def convergence_plot(path, rows) -> str:
    """Log-log error-vs-resolution plot for a convergence table."""
    n = np.array([r.N for r in rows], dtype=float)
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    for attr, marker in (("l2_error", "o"), ("max_error", "s"),
                         ("relative_l2", "^")):
        ax.loglog(n, [getattr(r, attr) for r in rows], marker=marker,
                  label=attr)
    ax.set_xlabel("N (space nodes)")
    ax.set_ylabel("error")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def field_plot(path, samples: InteriorSamples,
               reference: np.ndarray | None = None) -> str:
    """Reconstructed interior values against sample time."""
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    ax.plot(samples.times, samples.values, "o", label="reconstructed")
    if reference is not None:
        ax.plot(samples.times, reference, "x", label="reference")
    for m in np.flatnonzero(samples.on_boundary):
        ax.annotate("boundary", (samples.times[m], samples.values[m]),
                    fontsize=8)
    ax.set_xlabel("t")
    ax.set_ylabel("u")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)
