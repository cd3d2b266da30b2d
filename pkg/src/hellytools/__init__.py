"""Exact computational tools for Helly-type theorems on diameter, width and lattice points."""

from .engine import (
    ColorfulFamilies,
    ContainsIntegerPoint,
    ContainsKColinear,
    DiameterAtLeast,
    Family,
    NonemptyIntersection,
    VWidthAtLeast,
    certify_diameter,
    check_colorful,
    check_helly,
    fractional_vwidth,
)
from .geometry import HalfSpace, HPolytope, VBody, intersect, radon_partition
from .norms import PolytopeNorm, l2_diameter_exact, rho_diameter, v_width

__version__ = "0.1.0"

__all__ = [
    "ColorfulFamilies",
    "ContainsIntegerPoint",
    "ContainsKColinear",
    "DiameterAtLeast",
    "Family",
    "HPolytope",
    "HalfSpace",
    "NonemptyIntersection",
    "PolytopeNorm",
    "VBody",
    "VWidthAtLeast",
    "certify_diameter",
    "check_colorful",
    "check_helly",
    "fractional_vwidth",
    "intersect",
    "l2_diameter_exact",
    "radon_partition",
    "rho_diameter",
    "v_width",
]
