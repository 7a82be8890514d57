"""Toolkit for placing shaped facilities on a discretized planar region.

Facilities occupy real area: each one is a translatable convex shape whose
footprint blocks demand cells, while every remaining cell picks its
cheapest facility.  The package discretizes the region, evaluates the
resulting cost exactly, and solves the placement problem with a randomized
multistart heuristic, exhaustive search, or via an exported MILP.
"""

from .costs import InvalidCostCurveError, PiecewiseLinear, pl_constant, pl_eval, pl_from_expr, pl_identity
from .evaluate import (
    Allocation,
    Evaluation,
    Evaluator,
    Facility,
    UnsuitablePlacementError,
    UtilitySpec,
    objective,
    solve_lower_level,
    unit_utility,
    utility_value,
)
from .exact import (
    ExactResult,
    InfeasibleError,
    MilpModel,
    SizeLimitError,
    build_milp_model,
    compute_big_m,
    enumerate_exact,
    evaluate_model_at_placement,
    parse_lp,
    write_lp,
)
from .geometry import (
    Ellipse,
    GaugeDomainError,
    GeometryError,
    InvalidShapeError,
    Norm,
    PlacedShape,
    Point,
    Polygon,
    Rect,
    RegionPolygon,
    UnsupportedShapeError,
    gauge_value,
    max_vertex_distance,
    min_l1_shape_distance,
    norm_distance,
)
from .grasp import (
    ConstructionFailureError,
    GraspParams,
    GraspResult,
    NoFeasiblePlacementError,
    grasp_solve,
    greedy_improve,
    wavefront_construct,
)
from .grid import (
    DiscretizedInstance,
    Grid,
    build_cells,
    cell_weight,
    discretize,
    facility_feasible_cells,
    facility_footprint,
    placement_is_suitable,
    placement_violation,
)
from .config import (
    ConfigError,
    InstanceConfig,
    config_fingerprint,
    load_config,
    loads_config,
)
from .render import render_solution

__version__ = "0.1.0"
