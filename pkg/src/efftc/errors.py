"""Shared exception types."""


class DegreeError(ValueError):
    """Cochain degree outside the valid range for a complex."""


class GeodesicDegeneracyError(ValueError):
    """No unique shortest path between the given points (e.g. antipodal pair)."""


class PathJoinError(ValueError):
    """Concatenation endpoints do not match within tolerance."""


class LiftError(RuntimeError):
    """Path lift through a covering diverged from the base path."""


class RegularityError(RuntimeError):
    """Simplicial action stayed irregular after the allowed subdivisions."""


class GroupClosureError(ValueError):
    """Generator closure exceeded the supported group size."""


class ContradictionError(RuntimeError):
    """A reconciled lower bound exceeded an upper bound; the scenario must abort."""
