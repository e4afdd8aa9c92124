"""Kahler angles, Cayley calibrations and curvature of graph immersions R^4 -> R^8."""

from ._kahler import (
    GeometryError,
    Immersion,
    calibration_defect,
    catalog_ids,
    curvature,
    expected_cos,
    observed_order,
    omega_triangle,
    pde_residual,
    point_geometry,
    scan,
    transgression_residual,
    tube_integral,
)

__all__ = [
    "GeometryError",
    "Immersion",
    "calibration_defect",
    "catalog_ids",
    "curvature",
    "expected_cos",
    "observed_order",
    "omega_triangle",
    "pde_residual",
    "point_geometry",
    "scan",
    "transgression_residual",
    "tube_integral",
]
