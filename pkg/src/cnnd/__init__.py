"""Spacelike surfaces in Minkowski 4-space with a canonical normal null direction.

The public entry points are re-exported here; see the submodules for details.
"""

from .battery import BatteryReport, gauss_battery, grid, identity_battery
from .constructions import (
    SplitComplex,
    family1,
    family2,
    graph_cnnd_criterion,
    graph_surface,
    pde_residual,
    ruled_surface,
    split_ops,
    translation_cnnd_criterion,
    translation_surface,
)
from .expr import parse, parse_curve, to_source
from .gaussmap import (
    asymptotic_directions,
    curvature_ellipse,
    delta_form,
    delta_invariant,
    dgauss,
    gauss_map,
    gstar_h,
    gstar_h_discriminant,
    mean_curvature_directions,
)
from .geometry import cnnd_frame, directional_derivative, fundamental_forms, geometry_report, shape_operator
from .jets import Jet2
from .pde import GraphPDEProblem, pde_solve
from .surface import SurfaceDef

__version__ = "0.1.0"

__all__ = [
    "BatteryReport",
    "GraphPDEProblem",
    "Jet2",
    "SplitComplex",
    "SurfaceDef",
    "asymptotic_directions",
    "cnnd_frame",
    "curvature_ellipse",
    "delta_form",
    "delta_invariant",
    "dgauss",
    "directional_derivative",
    "family1",
    "family2",
    "fundamental_forms",
    "gauss_battery",
    "gauss_map",
    "geometry_report",
    "graph_cnnd_criterion",
    "graph_surface",
    "grid",
    "gstar_h",
    "gstar_h_discriminant",
    "identity_battery",
    "mean_curvature_directions",
    "parse",
    "parse_curve",
    "pde_residual",
    "pde_solve",
    "ruled_surface",
    "shape_operator",
    "split_ops",
    "to_source",
    "translation_cnnd_criterion",
    "translation_surface",
]
