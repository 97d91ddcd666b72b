"""Localization error bounds and port selection for fluid-antenna positioning."""

from .errors import (
    DegenerateGeometry,
    FaslocError,
    IndexOutOfRange,
    InvalidConfig,
    Nonconvergence,
    NotPositiveDefinite,
    ParseError,
    SingularBase,
    TooLarge,
    ValidationError,
)
from .fisher import (
    InfoWeights,
    MeasurementModel,
    Scenario,
    ScenarioConfig,
    anchor_weights,
    aoa_fim,
    aoa_weight,
    base_information,
    network_fim,
    peb,
    port_kernel,
    toa_fim,
    toa_variance,
    toa_weight,
)
from .geometry import Anchor, Bearing, bearing, symmetric_ring
from .linalg2 import Mat2, Vec2, inverse, logdet, outer
from .ports import PortLayout, Selection, linear_layout, perp_projection
from .select import (
    Method,
    RelaxedWeights,
    SelectionReport,
    bs_side_selection,
    exhaustive_selection,
    greedy_selection,
    project_capped_simplex,
    random_selection,
    relaxed_selection,
    top_k_selection,
)

__version__ = "0.1.0"

__all__ = [
    "Anchor",
    "Bearing",
    "DegenerateGeometry",
    "FaslocError",
    "IndexOutOfRange",
    "InfoWeights",
    "InvalidConfig",
    "Mat2",
    "MeasurementModel",
    "Method",
    "Nonconvergence",
    "NotPositiveDefinite",
    "ParseError",
    "PortLayout",
    "RelaxedWeights",
    "Scenario",
    "ScenarioConfig",
    "Selection",
    "SelectionReport",
    "SingularBase",
    "TooLarge",
    "ValidationError",
    "Vec2",
    "anchor_weights",
    "aoa_fim",
    "aoa_weight",
    "base_information",
    "bearing",
    "bs_side_selection",
    "exhaustive_selection",
    "greedy_selection",
    "inverse",
    "linear_layout",
    "logdet",
    "network_fim",
    "outer",
    "peb",
    "perp_projection",
    "port_kernel",
    "project_capped_simplex",
    "random_selection",
    "relaxed_selection",
    "symmetric_ring",
    "toa_fim",
    "toa_variance",
    "toa_weight",
    "top_k_selection",
]
