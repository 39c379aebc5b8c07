"""Distance-preserving grid layouts: project a dataset to 2-D, then assign
points to an orthogonal regular grid by recursive bisection."""

from .core import (
    CapacityError,
    Dataset,
    GridAssignment,
    GridSpec,
    InvalidInputError,
    Projection,
    UndefinedMetricError,
    normalize_columns,
    pairwise_cosine,
    pairwise_euclidean,
    validate_assignment,
)
from .layout import assign_cells, check_staircase, dgrid, grid_dims, layout, split_x, split_y
from .metrics import (
    MetricReport,
    cross_correlation,
    default_k,
    energy,
    evaluate,
    neighborhood_preservation,
    per_cell_metrics,
)
from .projection import (
    FeatureSetBundle,
    classical_scaling,
    combine_projections,
    import_projection,
    kmeans_medoid_sample,
    build_sample,
    standardize_projection,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "Dataset",
    "GridAssignment",
    "GridSpec",
    "InvalidInputError",
    "Projection",
    "UndefinedMetricError",
    "MetricReport",
    "FeatureSetBundle",
    "assign_cells",
    "build_sample",
    "check_staircase",
    "classical_scaling",
    "combine_projections",
    "cross_correlation",
    "default_k",
    "dgrid",
    "energy",
    "evaluate",
    "grid_dims",
    "import_projection",
    "kmeans_medoid_sample",
    "layout",
    "neighborhood_preservation",
    "normalize_columns",
    "pairwise_cosine",
    "pairwise_euclidean",
    "per_cell_metrics",
    "split_x",
    "split_y",
    "standardize_projection",
    "validate_assignment",
]
