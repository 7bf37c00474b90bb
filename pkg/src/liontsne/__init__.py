"""LION-tSNE: add new high-dimensional samples into an existing 2-D/3-D
embedding via local inverse-distance-weighting interpolation, with explicit
outlier detection and grid-based outlier placement."""

from .core import (
    DataError,
    LionConfig,
    LionError,
    MapOutcome,
    NumericError,
    OutcomeKind,
    euclidean_distance,
    percentile,
)
from .engine import LionModel, OutlierGroup, fit, group_outliers, map_batch, map_one
from .interpolate import RbfModel, idw_global, idw_interpolate, rbf_eval, rbf_fit
from .metrics import (
    EvalReport,
    kl_with_sample,
    knn_accuracy,
    nn_distance_percentile,
    perplexity_sigma,
    run_attribution_test,
    run_outlier_test,
)
from .model_io import load_matrix_csv, load_model, render_svg, save_model, write_matrix_csv
from .neighbors import NeighborIndex, build_index
from .outlier_grid import OutlierPositionPool, compute_r_y, precompute_outlier_positions
from .power_select import PowerCurve, cross_validation_error, select_power

__version__ = "0.1.0"

__all__ = [
    "DataError",
    "EvalReport",
    "LionConfig",
    "LionError",
    "LionModel",
    "MapOutcome",
    "NeighborIndex",
    "NumericError",
    "OutcomeKind",
    "OutlierGroup",
    "OutlierPositionPool",
    "PowerCurve",
    "RbfModel",
    "build_index",
    "compute_r_y",
    "cross_validation_error",
    "euclidean_distance",
    "fit",
    "group_outliers",
    "idw_global",
    "idw_interpolate",
    "kl_with_sample",
    "knn_accuracy",
    "load_matrix_csv",
    "load_model",
    "map_batch",
    "map_one",
    "nn_distance_percentile",
    "percentile",
    "perplexity_sigma",
    "precompute_outlier_positions",
    "rbf_eval",
    "rbf_fit",
    "render_svg",
    "run_attribution_test",
    "run_outlier_test",
    "save_model",
    "write_matrix_csv",
    "select_power",
]
