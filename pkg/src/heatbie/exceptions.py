"""Exception types shared across the toolkit.

Everything derives from :class:`ToolkitError` (itself a ``ValueError``) so
callers can trap the whole family with one except clause while tests can
assert on the specific failure.
"""


class ToolkitError(ValueError):
    """Base class for all toolkit errors."""


class InvalidParameterError(ToolkitError):
    """A numeric or structural parameter violates its precondition."""


class DegenerateTangentError(ToolkitError):
    """The curve tangent is shorter than the degeneracy tolerance."""


class OrientationError(ToolkitError):
    """The boundary curve is not parameterized counterclockwise."""


class GridMismatchError(ToolkitError):
    """A field or operand belongs to a different space-time grid."""


class PointOutsideDomainError(ToolkitError):
    """An evaluation target lies outside the closed boundary curve."""


class SourceInsideDomainError(ToolkitError):
    """A manufactured point source lies inside or too close to the boundary."""


class PartialGridError(ToolkitError):
    """A full-boundary operation received a partial grid, or vice versa."""


class DimensionMismatchError(ToolkitError):
    """Two fields that must share a shape do not."""


class ZeroReferenceError(ToolkitError):
    """A relative metric was requested against an identically zero reference."""


class MissingReferenceError(ToolkitError):
    """An operation that needs a reference spec was configured without one."""


class ConfigError(ToolkitError):
    """The experiment configuration is malformed or contains unknown keys."""
