"""Leave-one-out cross-validation metric for the IDW power and argmin search."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DataError, NumericError, as_matrix
from .interpolate import idw_interpolate
from .neighbors import NeighborIndex

REFINE_STEP = 0.1


@dataclass(frozen=True)
class PowerCurve:
    grid: np.ndarray
    errors: np.ndarray
    best_p: float
    skipped_count: int


def _neighbor_lists(x_train: np.ndarray, r_x: float):
    index = NeighborIndex(x_train)
    out = []
    for i in range(index.n):
        nb = index.radius_query(x_train[i], r_x)
        out.append(nb[nb != i])
    return out


def _error_for_p(p, x_train, y_train, neighbor_lists):
    sse = 0.0
    evaluated = 0
    for i, nb in enumerate(neighbor_lists):
        if nb.size == 0:
            continue
        est = idw_interpolate(x_train[i], x_train[nb], y_train[nb], p)
        sse += float(np.sum((est - y_train[i]) ** 2))
        evaluated += 1
    if evaluated == 0:
        raise NumericError("radius too small for cross-validation")
    return sse / evaluated


def cross_validation_error(p: float, r_x: float, x_train, y_train) -> float:
    """Mean squared leave-one-out IDW error over samples with >= 1 neighbor."""
    x_train = as_matrix(x_train, "x_train")
    y_train = as_matrix(y_train, "y_train")
    if x_train.shape[0] != y_train.shape[0]:
        raise DataError("x/y row count mismatch")
    if x_train.shape[0] < 3:
        raise DataError("cross-validation requires at least 3 samples")
    if p <= 0:
        raise DataError("p must be positive")
    return _error_for_p(p, x_train, y_train, _neighbor_lists(x_train, r_x))


def select_power(r_x: float, x_train, y_train, grid=(0.5, 50.0, 0.5)) -> PowerCurve:
    """Grid search of the cross-validation metric, plus one 0.1-step refinement
    pass around the coarse minimum. Ties go to the smaller p."""
    x_train = as_matrix(x_train, "x_train")
    y_train = as_matrix(y_train, "y_train")
    lo, hi, step = (float(v) for v in grid)
    if not (0 < lo < hi and step > 0):
        raise DataError(f"invalid power grid {grid}")

    neighbor_lists = _neighbor_lists(x_train, r_x)
    coarse = np.arange(lo, hi + step / 2, step)
    evaluated = {float(p): _error_for_p(p, x_train, y_train, neighbor_lists) for p in coarse}

    coarse_best = min(evaluated, key=lambda p: (evaluated[p], p))
    if REFINE_STEP < step:
        fine_lo = max(lo, coarse_best - step)
        fine_hi = min(hi, coarse_best + step)
        for p in np.arange(fine_lo, fine_hi + REFINE_STEP / 2, REFINE_STEP):
            p = float(round(p, 10))
            if p not in evaluated:
                evaluated[p] = _error_for_p(p, x_train, y_train, neighbor_lists)

    ps = np.array(sorted(evaluated))
    errors = np.array([evaluated[p] for p in ps])
    best_p = min(evaluated, key=lambda p: (evaluated[p], p))
    skipped = sum(1 for nb in neighbor_lists if nb.size == 0)
    return PowerCurve(grid=ps, errors=errors, best_p=float(best_p), skipped_count=skipped)
