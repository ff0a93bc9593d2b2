"""Shared fixtures and the acceptance-summary terminal section."""

from __future__ import annotations

import numpy as np
import pytest

import heatbie as hb

ACCEPTANCE_LINES = []


def record_acceptance(num: int, title: str, passed: bool, detail: str = ""):
    status = "PASS" if passed else "FAIL"
    line = f"[criterion {num}] {status}  {title}"
    if detail:
        line += f"  ({detail})"
    ACCEPTANCE_LINES.append((num, line))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)


@pytest.fixture
def unit_circle():
    return hb.BoundaryCurve.circle()


@pytest.fixture
def tiny_grid(unit_circle):
    """Unit circle, N=4, N'=2, T=10: every node is hand-checkable."""
    return hb.make_grid(unit_circle, 4, 2, 10.0)


@pytest.fixture
def small_grid(unit_circle):
    return hb.make_grid(unit_circle, 8, 8, 10.0)


@pytest.fixture
def source():
    return hb.PointSourceSolution((2.0, 0.0))


@pytest.fixture
def rng():
    return np.random.default_rng(42)


def random_field(grid, rng) -> "hb.BoundaryField":
    return hb.BoundaryField(grid, rng.standard_normal((grid.N, grid.Nprime)))
