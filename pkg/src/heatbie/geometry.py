"""Closed boundary curves and their space-time discretization.

The boundary is a smooth closed curve gamma : [0, 1] -> R^2, 1-periodic,
traversed counterclockwise, with nowhere-vanishing tangent.  Curves are
either circles centered at the origin or trigonometric polynomials

    gamma_c(zeta) = a_c0 + sum_n [ a_cn cos(2 pi n zeta) + b_cn sin(2 pi n zeta) ]

per coordinate c, so derivatives are available in closed form.

A :class:`SpaceTimeGrid` is the tensor product of the uniform subdivisions

    zeta_i = i * h,  h  = zeta_max / N,   i = 1..N
    t_j    = j * h', h' = T / Nprime,     j = 1..Nprime

with zeta_max = 1 for the full boundary or zeta_max < 1 for a partial
measurement arc starting at the parameter origin.  Node geometry (points,
tangents, speeds, outward normals) is cached at construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import (
    DegenerateTangentError,
    InvalidParameterError,
    OrientationError,
)

TANGENT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class BoundaryCurve:
    """Closed analytic curve given by trigonometric polynomials.

    Attributes
    ----------
    kind : str
        "circle" or "trig"; circles keep their radius for config round-trips.
    cos_coef, sin_coef : ndarray, shape (2, P+1)
        cos_coef[c, n] multiplies cos(2 pi n zeta) in coordinate c, and
        sin_coef[c, n] multiplies sin(2 pi n zeta).  Index n = 0 is the
        constant term (sin_coef[:, 0] is ignored).
    radius : float or None
        Set for kind "circle" only.
    """

    kind: str
    cos_coef: np.ndarray
    sin_coef: np.ndarray
    radius: float | None = None

    def __post_init__(self):
        cos_c = np.atleast_2d(np.asarray(self.cos_coef, dtype=float))
        sin_c = np.atleast_2d(np.asarray(self.sin_coef, dtype=float))
        if cos_c.shape != sin_c.shape or cos_c.shape[0] != 2:
            raise InvalidParameterError(
                "coefficient arrays must both have shape (2, P+1), got "
                f"{cos_c.shape} and {sin_c.shape}"
            )
        object.__setattr__(self, "cos_coef", cos_c)
        object.__setattr__(self, "sin_coef", sin_c)

    @classmethod
    def circle(cls, radius: float = 1.0) -> "BoundaryCurve":
        """Circle of given radius centered at the origin, gamma(0) = (r, 0)."""
        if not radius > 0:
            raise InvalidParameterError(f"circle radius must be positive, got {radius}")
        cos_c = np.array([[0.0, radius], [0.0, 0.0]])
        sin_c = np.array([[0.0, 0.0], [0.0, radius]])
        return cls(kind="circle", cos_coef=cos_c, sin_coef=sin_c, radius=float(radius))

    @classmethod
    def trig_polynomial(cls, x_cos, x_sin, y_cos, y_sin) -> "BoundaryCurve":
        """Curve from per-coordinate cosine/sine coefficient lists.

        Lists may have different lengths; they are zero-padded to a common
        degree.  x_sin[0] and y_sin[0] are meaningless and must be zero.
        """
        arrs = [np.asarray(a, dtype=float).ravel() for a in (x_cos, x_sin, y_cos, y_sin)]
        if any(a.size == 0 for a in arrs[::2]):
            raise InvalidParameterError("cosine coefficient lists must be non-empty")
        p = max(a.size for a in arrs)
        pad = [np.pad(a, (0, p - a.size)) for a in arrs]
        if pad[1][0] != 0.0 or pad[3][0] != 0.0:
            raise InvalidParameterError("sin coefficient of order 0 must be 0")
        cos_c = np.stack([pad[0], pad[2]])
        sin_c = np.stack([pad[1], pad[3]])
        return cls(kind="trig", cos_coef=cos_c, sin_coef=sin_c)

    # -- evaluation ---------------------------------------------------------

    def _harmonics(self, zeta):
        zeta = np.asarray(zeta, dtype=float)
        n = np.arange(self.cos_coef.shape[1])
        ang = 2.0 * np.pi * np.multiply.outer(zeta, n)  # (..., P+1)
        return zeta, ang

    def point(self, zeta):
        """gamma(zeta), vectorized; shape (..., 2)."""
        _, ang = self._harmonics(zeta)
        x = np.cos(ang) @ self.cos_coef.T + np.sin(ang) @ self.sin_coef.T
        return x

    def tangent(self, zeta):
        """gamma'(zeta), vectorized; shape (..., 2)."""
        _, ang = self._harmonics(zeta)
        n = np.arange(self.cos_coef.shape[1])
        w = 2.0 * np.pi * n
        dx = -np.sin(ang) @ (w * self.cos_coef).T + np.cos(ang) @ (w * self.sin_coef).T
        return dx

    def __eq__(self, other):
        if not isinstance(other, BoundaryCurve):
            return NotImplemented
        return (self.kind == other.kind and self.radius == other.radius
                and np.array_equal(self.cos_coef, other.cos_coef)
                and np.array_equal(self.sin_coef, other.sin_coef))

    def describe(self) -> dict:
        """JSON-ready description (inverse of the harness curve parser)."""
        if self.kind == "circle":
            return {"type": "circle", "radius": self.radius}
        return {
            "type": "trig",
            "x_cos": self.cos_coef[0].tolist(),
            "x_sin": self.sin_coef[0].tolist(),
            "y_cos": self.cos_coef[1].tolist(),
            "y_sin": self.sin_coef[1].tolist(),
        }


def curve_point(curve: BoundaryCurve, zeta):
    """Evaluate gamma(zeta).  zeta may be a scalar or array (reduced mod 1)."""
    return curve.point(zeta)


def curve_tangent(curve: BoundaryCurve, zeta):
    """Evaluate gamma'(zeta)."""
    return curve.tangent(zeta)


def outward_normal(curve: BoundaryCurve, zeta):
    """Outward unit normal nu(zeta) = (gamma_2', -gamma_1') / |gamma'|.

    Outward for a counterclockwise parameterization, which make_grid asserts.

    Raises
    ------
    DegenerateTangentError
        If |gamma'(zeta)| < 1e-12 at any requested zeta.
    """
    tan = curve.tangent(zeta)
    speed = np.linalg.norm(tan, axis=-1)
    if np.any(speed < TANGENT_TOL):
        raise DegenerateTangentError(
            f"tangent length below {TANGENT_TOL:g}; curve is not regular"
        )
    nrm = np.stack([tan[..., 1], -tan[..., 0]], axis=-1)
    return nrm / speed[..., None]


def signed_area(curve: BoundaryCurve, samples: int = 256) -> float:
    """Discrete signed area (1/2) integral of (x y' - y x') d zeta.

    Positive for counterclockwise curves.  Sampled with the rectangle rule
    over one full period.
    """
    zeta = (np.arange(samples) + 0.5) / samples
    p = curve.point(zeta)
    d = curve.tangent(zeta)
    return float(0.5 * np.mean(p[:, 0] * d[:, 1] - p[:, 1] * d[:, 0]))


def point_in_curve(curve: BoundaryCurve, point, samples: int = 720) -> bool:
    """Winding-number test of a point against the sampled closed curve."""
    p = np.asarray(point, dtype=float)
    zeta = np.arange(samples) / samples
    v = curve.point(zeta) - p
    ang = np.arctan2(v[:, 1], v[:, 0])
    dang = np.diff(np.concatenate([ang, ang[:1]]))
    dang = (dang + np.pi) % (2.0 * np.pi) - np.pi
    winding = dang.sum() / (2.0 * np.pi)
    return abs(winding) > 0.5


def distance_to_curve(curve: BoundaryCurve, point, samples: int = 2048) -> float:
    """Minimum distance from a point to the sampled curve."""
    p = np.asarray(point, dtype=float)
    zeta = np.arange(samples) / samples
    return float(np.min(np.linalg.norm(curve.point(zeta) - p, axis=1)))


@dataclass(frozen=True, eq=False)
class SpaceTimeGrid:
    """Uniform tensor grid over the boundary parameter and time.

    Node arrays are 1-based in the math (zeta_i = i h, t_j = j h') and
    0-based in storage: ``zeta[0]`` is zeta_1.  Cached geometry rows follow
    the same order.
    """

    curve: BoundaryCurve
    N: int
    Nprime: int
    T: float
    zeta_max: float
    h: float = field(init=False)
    hprime: float = field(init=False)
    zeta: np.ndarray = field(init=False)
    t: np.ndarray = field(init=False)
    points: np.ndarray = field(init=False)
    tangents: np.ndarray = field(init=False)
    speeds: np.ndarray = field(init=False)
    normals: np.ndarray = field(init=False)

    def __post_init__(self):
        h = self.zeta_max / self.N
        hp = self.T / self.Nprime
        zeta = np.arange(1, self.N + 1) * h
        t = np.arange(1, self.Nprime + 1) * hp
        pts = self.curve.point(zeta)
        tan = self.curve.tangent(zeta)
        speeds = np.linalg.norm(tan, axis=1)
        if np.any(speeds < TANGENT_TOL):
            raise DegenerateTangentError("grid node with degenerate tangent")
        nrm = np.stack([tan[:, 1], -tan[:, 0]], axis=1) / speeds[:, None]
        for name, val in [
            ("h", h), ("hprime", hp), ("zeta", zeta), ("t", t),
            ("points", pts), ("tangents", tan), ("speeds", speeds), ("normals", nrm),
        ]:
            object.__setattr__(self, name, val)

    @property
    def is_full_boundary(self) -> bool:
        return self.zeta_max == 1.0

    def same_discretization(self, other: "SpaceTimeGrid") -> bool:
        """True when the two grids carry identical nodes and curve."""
        return (
            self.N == other.N
            and self.Nprime == other.Nprime
            and self.T == other.T
            and self.zeta_max == other.zeta_max
            and self.curve.kind == other.curve.kind
            and self.curve.cos_coef.shape == other.curve.cos_coef.shape
            and np.array_equal(self.curve.cos_coef, other.curve.cos_coef)
            and np.array_equal(self.curve.sin_coef, other.curve.sin_coef)
        )


def make_grid(
    curve: BoundaryCurve,
    N: int,
    Nprime: int,
    T: float,
    zeta_max: float = 1.0,
) -> SpaceTimeGrid:
    """Build the space-time grid, validating parameters and orientation.

    Parameters
    ----------
    curve : BoundaryCurve
        Closed counterclockwise boundary.
    N, Nprime : int
        Space and time node counts, both >= 1.
    T : float
        Final time, > 0.
    zeta_max : float
        1 for the full boundary, or the arc end 0 < zeta_max < 1 for a
        partial measurement grid.

    Raises
    ------
    InvalidParameterError
        On violated numeric preconditions.
    OrientationError
        If the curve's signed area is not positive (clockwise or degenerate).
    """
    if not (isinstance(N, (int, np.integer)) and N >= 1):
        raise InvalidParameterError(f"N must be an integer >= 1, got {N!r}")
    if not (isinstance(Nprime, (int, np.integer)) and Nprime >= 1):
        raise InvalidParameterError(f"Nprime must be an integer >= 1, got {Nprime!r}")
    if not T > 0:
        raise InvalidParameterError(f"T must be positive, got {T!r}")
    if not 0.0 < zeta_max <= 1.0:
        raise InvalidParameterError(f"zeta_max must lie in (0, 1], got {zeta_max!r}")
    if signed_area(curve, samples=max(256, int(N))) <= 0.0:
        raise OrientationError(
            "curve must be parameterized counterclockwise (positive signed area)"
        )
    return SpaceTimeGrid(curve=curve, N=int(N), Nprime=int(Nprime),
                         T=float(T), zeta_max=float(zeta_max))
