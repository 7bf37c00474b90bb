"""Fitting the model and mapping new samples.

Mapping rule per sample x, with neighbors = training points within r_x:
  > 1 neighbor   -> local IDW interpolation
  == 1 neighbor  -> near that neighbor's embedding if the neighbor is itself
                    a training outlier, otherwise treated as an outlier
  == 0 neighbors -> outlier placement from the free-cell pool
Batched outliers within r_x of each other share one pool position: the lowest
batch index is the representative, the rest land within r_close of it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .core import DataError, LionConfig, MapOutcome, OutcomeKind, as_matrix, as_point, percentile
from .interpolate import idw_interpolate
from .neighbors import NeighborIndex
from .outlier_grid import OutlierPositionPool, compute_r_y, precompute_outlier_positions
from .power_select import select_power


@dataclass
class LionModel:
    x_train: np.ndarray
    y_train: np.ndarray
    r_x: float
    r_close: float
    r_y: float
    power: float
    training_outlier_flags: np.ndarray
    pool: OutlierPositionPool
    config: LionConfig

    def __post_init__(self):
        self._x_index = NeighborIndex(self.x_train)

    @property
    def x_index(self) -> NeighborIndex:
        return self._x_index


@dataclass(frozen=True)
class OutlierGroup:
    member_indices: List[int]
    representative: int
    placement: Optional[np.ndarray] = None


def fit(x_train, y_train, config: LionConfig = LionConfig()) -> LionModel:
    x = as_matrix(x_train, "x_train")
    y = as_matrix(y_train, "y_train")
    if x.shape[0] != y.shape[0]:
        raise DataError("x_train/y_train row count mismatch")
    if x.shape[0] < 3:
        raise DataError("fit requires at least 3 samples")
    if y.shape[1] > 3:
        raise DataError("embedding dimensionality > 3 is not supported")

    nn_x = NeighborIndex(x).nn_distances()
    r_x = percentile(nn_x, config.rx_percentile)

    nn_y = NeighborIndex(y).nn_distances()
    r_close = percentile(nn_y, config.rclose_percentile)
    r_y = compute_r_y(nn_y, config.ry_coefficient, config.ry_percentile, r_close)

    if config.power == "auto":
        power = select_power(r_x, x, y, config.power_search_grid).best_p
    else:
        power = float(config.power)

    return LionModel(
        x_train=x,
        y_train=y,
        r_x=r_x,
        r_close=r_close,
        r_y=r_y,
        power=power,
        training_outlier_flags=nn_x > r_x,
        pool=precompute_outlier_positions(y, r_y),
        config=config,
    )


def _ball_offset(rng: np.random.Generator, radius: float, dim: int) -> np.ndarray:
    """Uniform random point in the dim-ball of the given radius."""
    v = rng.standard_normal(dim)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        v = np.ones(dim)
        norm = np.linalg.norm(v)
    return v / norm * radius * rng.random() ** (1.0 / dim)


def _training_match(model: LionModel, x: np.ndarray, nb: np.ndarray) -> Optional[np.ndarray]:
    """Stored embedding if x coincides with a training sample, else None."""
    if nb.size == 0:
        return None
    diff = model.x_train[nb] - x
    dist = np.sqrt(np.einsum("ij,ij->i", diff, diff))
    hit = nb[dist <= 1e-12 * (1.0 + float(np.linalg.norm(x)))]
    if hit.size == 0:
        return None
    if hit.size == 1:
        return model.y_train[hit[0]].copy()
    return model.y_train[hit].mean(axis=0)


def map_one(model: LionModel, x, rng: Optional[np.random.Generator] = None) -> MapOutcome:
    x = as_point(x, model.x_train.shape[1], "x")
    if rng is None:
        rng = np.random.default_rng(model.config.seed)
    nb = model.x_index.radius_query(x, model.r_x)
    matched = _training_match(model, x, nb)
    if matched is not None:
        return MapOutcome(y=matched, kind=OutcomeKind.INTERPOLATED)
    d = model.y_train.shape[1]
    if nb.size > 1:
        y = idw_interpolate(x, model.x_train[nb], model.y_train[nb], model.power)
        return MapOutcome(y=y, kind=OutcomeKind.INTERPOLATED)
    if nb.size == 1:
        i = int(nb[0])
        if model.training_outlier_flags[i]:
            y = model.y_train[i] + _ball_offset(rng, model.r_close, d)
            return MapOutcome(y=y, kind=OutcomeKind.NEAR_SINGLE)
    return MapOutcome(y=model.pool.take_position(rng), kind=OutcomeKind.OUTLIER)


def group_outliers(outlier_xs, r_x: float) -> List[OutlierGroup]:
    """Single-linkage connected components under distance <= r_x."""
    xs = np.asarray(outlier_xs, dtype=float)
    if xs.size == 0:
        return []
    xs = as_matrix(xs, "outlier_xs")
    n = xs.shape[0]
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        diff = xs[i + 1:] - xs[i]
        close = np.flatnonzero(np.sqrt(np.einsum("ij,ij->i", diff, diff)) <= r_x)
        for j in close + i + 1:
            ra, rb = find(i), find(int(j))
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [
        OutlierGroup(member_indices=members, representative=members[0])
        for _, members in sorted(groups.items())
    ]


def map_batch(model: LionModel, x_new, seed: Optional[int] = None) -> List[MapOutcome]:
    xs = as_matrix(x_new, "x_new")
    if xs.shape[1] != model.x_train.shape[1]:
        raise DataError(
            f"dimension mismatch: batch has {xs.shape[1]} columns, "
            f"training data has {model.x_train.shape[1]}"
        )
    rng = np.random.default_rng(model.config.seed if seed is None else seed)
    d = model.y_train.shape[1]
    n = xs.shape[0]

    neighbor_sets = [model.x_index.radius_query(xs[i], model.r_x) for i in range(n)]
    matches = [_training_match(model, xs[i], neighbor_sets[i]) for i in range(n)]
    outlier_rows = [
        i
        for i, nb in enumerate(neighbor_sets)
        if matches[i] is None
        and (
            nb.size == 0
            or (nb.size == 1 and not model.training_outlier_flags[int(nb[0])])
        )
    ]
    group_of = {}
    for gid, group in enumerate(group_outliers(xs[outlier_rows], model.r_x)):
        for local in group.member_indices:
            group_of[outlier_rows[local]] = (gid, outlier_rows[group.representative])

    outcomes: List[Optional[MapOutcome]] = [None] * n
    for i in range(n):
        nb = neighbor_sets[i]
        if matches[i] is not None:
            outcomes[i] = MapOutcome(y=matches[i], kind=OutcomeKind.INTERPOLATED)
        elif i in group_of:
            gid, rep = group_of[i]
            if rep == i:
                y = model.pool.take_position(rng)
            else:
                y = outcomes[rep].y + _ball_offset(rng, model.r_close, d)
            outcomes[i] = MapOutcome(y=y, kind=OutcomeKind.OUTLIER, group_id=gid)
        elif nb.size == 1:
            j = int(nb[0])
            y = model.y_train[j] + _ball_offset(rng, model.r_close, d)
            outcomes[i] = MapOutcome(y=y, kind=OutcomeKind.NEAR_SINGLE)
        else:
            y = idw_interpolate(xs[i], model.x_train[nb], model.y_train[nb], model.power)
            outcomes[i] = MapOutcome(y=y, kind=OutcomeKind.INTERPOLATED)
    return outcomes
