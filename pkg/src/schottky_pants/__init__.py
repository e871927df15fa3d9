"""Constructive pants decompositions with Schottky holonomy and the mod-2
lifting obstruction for surface-group representations into PSL(2, C)."""

__version__ = "0.1.0"

from .moebius import (  # noqa: F401
    Circle,
    ElementClass,
    MoebiusMap,
    SpherePoint,
    apply_circle,
    chordal_distance,
    classify,
    conjugate_to_standard,
    fixed_points,
    normalize,
)
