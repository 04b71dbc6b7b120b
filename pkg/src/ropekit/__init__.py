"""Thickness, ropelength and curvature-constrained paths for polygonal curves."""

from .curve import (
    Component,
    CurveError,
    PolyCurve,
    discrete_curvature,
    frenet_frames,
    frenet_integrate,
    resample_arclength,
)
from .dubins import (
    BoundaryData,
    DubinsError,
    DubinsPath,
    HelicoidalArc,
    ccc_filter,
    integrate_helicoidal,
    path_to_polycurve,
    solve_clc_3d,
    solve_dubins_2d,
)
from .thickness import ThicknessError, ThicknessReport, dcsd, find_double_critical_pairs, thickness
from .tighten import (
    TightenConfig,
    TightenTrace,
    VariationField,
    curvature_variation_a,
    curvature_variation_b,
    normal_push_experiment,
    subarc_dubins_check,
    tighten,
    tighten_step,
    verify_contact_condition,
    verify_theorem1,
)

__version__ = "0.1.0"

__all__ = [
    "BoundaryData",
    "Component",
    "CurveError",
    "DubinsError",
    "DubinsPath",
    "HelicoidalArc",
    "PolyCurve",
    "ThicknessError",
    "ThicknessReport",
    "TightenConfig",
    "TightenTrace",
    "VariationField",
    "ccc_filter",
    "curvature_variation_a",
    "curvature_variation_b",
    "dcsd",
    "discrete_curvature",
    "find_double_critical_pairs",
    "frenet_frames",
    "frenet_integrate",
    "integrate_helicoidal",
    "normal_push_experiment",
    "path_to_polycurve",
    "resample_arclength",
    "solve_clc_3d",
    "solve_dubins_2d",
    "subarc_dubins_check",
    "thickness",
    "tighten",
    "tighten_step",
    "verify_contact_condition",
    "verify_theorem1",
]
