"""Depth statistics for weighted point samples.

Halfspace and related set-family depths with exact rational arithmetic,
cone partial orders with median boxes, depth regions and centers, the
1/(dim+1) coverage bound, and Jensen-style inequality checks.
"""

from .depth import (
    AxisParallel,
    BallComplements,
    ConvexCompactComplements,
    DepthValue,
    Halfspace,
    HalfspaceAll,
    IntervalComplements,
    axis_depth,
    ball_depth,
    convex_complement_depth,
    depth,
    depth_oracle,
    halfspace_depth,
    halfspace_depth_2d,
    halfspace_depth_exact,
    interval_complement_depth,
    monte_carlo_depth,
)
from .errors import (
    BudgetError,
    DegenerateInput,
    DepthKitError,
    DimensionError,
    ParameterError,
    PreconditionError,
)
from .jensen import (
    BUILTIN_FUNCTIONS,
    ExpLine,
    GaugeBox,
    JensenReport,
    center_jensen,
    jensen_check,
    make_builtin,
    median_jensen,
)
from .measure import (
    QuantilePair,
    WeightedSample,
    load_csv,
    prob_ball,
    prob_halfspace,
    prob_interval,
    quantiles,
)
from .order import (
    ConeOrder,
    OrderInterval,
    leq,
    median_set,
    median_set_oracle,
    sup_inf,
)
from .regions import (
    BoundReport,
    DepthRegion,
    axis_center,
    axis_interval,
    axis_region,
    center,
    halfspace_center,
    halfspace_region,
    max_depth_bound,
    region,
)

__version__ = "0.1.0"

__all__ = [
    "AxisParallel",
    "BallComplements",
    "BoundReport",
    "BudgetError",
    "BUILTIN_FUNCTIONS",
    "center",
    "center_jensen",
    "ConeOrder",
    "convex_complement_depth",
    "ConvexCompactComplements",
    "DegenerateInput",
    "depth",
    "depth_oracle",
    "DepthKitError",
    "DepthRegion",
    "DepthValue",
    "DimensionError",
    "ExpLine",
    "GaugeBox",
    "Halfspace",
    "HalfspaceAll",
    "halfspace_center",
    "halfspace_depth",
    "halfspace_depth_2d",
    "halfspace_depth_exact",
    "halfspace_region",
    "IntervalComplements",
    "interval_complement_depth",
    "axis_center",
    "axis_depth",
    "axis_interval",
    "axis_region",
    "ball_depth",
    "jensen_check",
    "JensenReport",
    "leq",
    "load_csv",
    "make_builtin",
    "max_depth_bound",
    "median_jensen",
    "median_set",
    "median_set_oracle",
    "monte_carlo_depth",
    "OrderInterval",
    "ParameterError",
    "PreconditionError",
    "prob_ball",
    "prob_halfspace",
    "prob_interval",
    "QuantilePair",
    "quantiles",
    "region",
    "sup_inf",
    "WeightedSample",
    "__version__",
]
