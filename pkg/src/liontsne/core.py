"""Shared types, validation and small numeric utilities."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np


class LionError(Exception):
    """Base class for errors raised by this package."""


class DataError(LionError):
    """Invalid or inconsistent input data."""


class NumericError(LionError):
    """Numeric failure (singular system, non-convergence, empty metric)."""


def as_matrix(values, name: str = "matrix") -> np.ndarray:
    """Validate a 2-D array of finite floats. Returns a float64 copy."""
    a = np.asarray(values, dtype=float)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2:
        raise DataError(f"{name}: expected 2-D array, got ndim={a.ndim}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise DataError(f"{name}: empty matrix {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DataError(f"{name}: non-finite values present")
    return a


def as_point(x, dim: Optional[int] = None, name: str = "point") -> np.ndarray:
    a = np.asarray(x, dtype=float).ravel()
    if a.size < 1 or not np.all(np.isfinite(a)):
        raise DataError(f"{name}: expected finite coordinates")
    if dim is not None and a.size != dim:
        raise DataError(f"{name}: dimension mismatch, expected {dim}, got {a.size}")
    return a


def euclidean_distance(a, b) -> float:
    a = as_point(a, name="a")
    b = as_point(b, name="b")
    if a.size != b.size:
        raise DataError(f"dimension mismatch: {a.size} vs {b.size}")
    return float(np.sqrt(np.sum((a - b) ** 2)))


def percentile(values, q) -> float:
    """Linear-interpolation percentile over the sorted values."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise DataError("percentile of empty list")
    if not np.all(np.isfinite(v)):
        raise DataError("percentile: non-finite values")
    q = float(q)
    if q < 0.0 or q > 100.0:
        raise DataError(f"percentile q={q} outside [0, 100]")
    return float(np.percentile(v, q, method="linear"))


class OutcomeKind(str, Enum):
    INTERPOLATED = "interpolated"
    NEAR_SINGLE = "near_single"
    OUTLIER = "outlier"


@dataclass(frozen=True)
class MapOutcome:
    """Embedding coordinates for one mapped sample plus provenance."""

    y: np.ndarray
    kind: OutcomeKind
    group_id: Optional[int] = None


PercentOrMax = Union[float, str]


@dataclass(frozen=True)
class LionConfig:
    """Parameters controlling radius selection, power selection and seeding."""

    rx_percentile: float = 99.0
    ry_coefficient: float = 2.0
    ry_percentile: PercentOrMax = "max"
    rclose_percentile: float = 10.0
    power: Union[float, str] = "auto"
    power_search_grid: Tuple[float, float, float] = (0.5, 50.0, 0.5)
    seed: int = 0

    def __post_init__(self):
        if not (0.0 < self.rx_percentile <= 100.0):
            raise DataError(f"rx_percentile={self.rx_percentile} not in (0, 100]")
        if self.ry_coefficient <= 0:
            raise DataError("ry_coefficient must be positive")
        if self.ry_percentile != "max":
            try:
                ok = 0.0 < float(self.ry_percentile) <= 100.0
            except (TypeError, ValueError):
                ok = False
            if not ok:
                raise DataError(
                    f"ry_percentile={self.ry_percentile!r} not in (0, 100] or 'max'"
                )
        if not (0.0 < self.rclose_percentile <= 100.0):
            raise DataError(f"rclose_percentile={self.rclose_percentile} not in (0, 100]")
        if self.power != "auto" and float(self.power) <= 0:
            raise DataError("power must be positive or 'auto'")
        lo, hi, step = self.power_search_grid
        if not (lo < hi and step > 0 and lo > 0):
            raise DataError(f"invalid power_search_grid {self.power_search_grid}")
        if int(self.seed) < 0:
            raise DataError("seed must be a nonnegative integer")
