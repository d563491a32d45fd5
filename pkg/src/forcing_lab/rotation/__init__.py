"""Lifts of torus homeomorphisms to the plane and rotation-set experiments."""

from .backend import NAME as BACKEND
from .degree import Box, DegreeCertificate, PeriodicSearchResult, degree_on_box, find_periodic
from .estimate import (
    DisplacementSample,
    EmpiricalMeasure,
    FlaggedEdge,
    boundary_diagnostic,
    check_homogeneity,
    deviation_profile,
    displacement,
    displacement_sample,
    grid_points,
    measure_rotation,
    rotation_set_estimate,
)
from .lift import HShear, TorusLift, Translation, VShear, primitive_from_dict, profile_value
from .polygon import RotationPolygon, convex_hull, hausdorff

__all__ = [
    "BACKEND", "Box", "DegreeCertificate", "DisplacementSample", "EmpiricalMeasure", "FlaggedEdge",
    "HShear", "PeriodicSearchResult", "RotationPolygon", "TorusLift", "Translation", "VShear",
    "boundary_diagnostic", "check_homogeneity", "convex_hull", "degree_on_box", "deviation_profile",
    "displacement", "displacement_sample", "find_periodic", "grid_points", "hausdorff",
    "measure_rotation", "primitive_from_dict", "profile_value", "rotation_set_estimate",
]
