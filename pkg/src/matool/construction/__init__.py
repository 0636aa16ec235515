"""Patch geometry, flat oscillator profile, cutoff families, and the glued
coefficient field (a, b, c, f) with its decay schedule."""

from .layout import PatchLayout, MicroRect, patch_layout, microrectangles, disjointness_check
from .oscillator import OscillatorProfile
from .cutoffs import CutoffFamily, cutoff_order
from .field import CoefficientField, build_field, gamma_schedule, flatness_report

__all__ = [
    "PatchLayout",
    "MicroRect",
    "patch_layout",
    "microrectangles",
    "disjointness_check",
    "OscillatorProfile",
    "CutoffFamily",
    "cutoff_order",
    "CoefficientField",
    "build_field",
    "gamma_schedule",
    "flatness_report",
]
