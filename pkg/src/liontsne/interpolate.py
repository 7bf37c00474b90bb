"""Inverse distance weighting (local and global) and the RBF benchmark family."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DataError, NumericError, as_matrix, as_point
from .neighbors import NeighborIndex

# ||x - x_i|| below this (relative) threshold triggers the forced-return rule.
EXACT_MATCH_RTOL = 1e-12

_CONDITION_LIMIT = 1e12


def idw_weights(distances: np.ndarray, p: float) -> np.ndarray:
    """Normalized inverse-distance weights, computed in the log domain.

    Stable for large p: exponents are shifted by their maximum before
    exponentiating, so powers like p=200 do not overflow.
    """
    log_w = -p * np.log(distances)
    log_w -= log_w.max()
    w = np.exp(log_w)
    return w / w.sum()


def idw_interpolate(x, x_nb, y_nb, p: float) -> np.ndarray:
    x_nb = as_matrix(x_nb, "x_nb")
    y_nb = as_matrix(y_nb, "y_nb")
    if x_nb.shape[0] != y_nb.shape[0]:
        raise DataError(
            f"row-count mismatch: {x_nb.shape[0]} x rows vs {y_nb.shape[0]} y rows"
        )
    x = as_point(x, x_nb.shape[1], "x")
    if p <= 0:
        raise DataError(f"power p={p} must be positive")

    diff = x_nb - x
    d = np.sqrt(np.einsum("ij,ij->i", diff, diff))
    tol = EXACT_MATCH_RTOL * (1.0 + float(np.linalg.norm(x)))
    exact = np.flatnonzero(d < tol)
    if exact.size == 1:
        return y_nb[exact[0]].copy()
    if exact.size > 1:
        # limit of the weight formula: coincident points share weight equally
        return y_nb[exact].mean(axis=0)
    if x_nb.shape[0] == 1:
        return y_nb[0].copy()
    w = idw_weights(d, p)
    return w @ y_nb


def idw_global(x, x_train, y_train, p: float) -> np.ndarray:
    """Non-local IDW: every training row participates."""
    return idw_interpolate(x, x_train, y_train, p)


_KERNELS = {
    "multiquadric": lambda r, eps: np.sqrt((r / eps) ** 2 + 1.0),
    "gaussian": lambda r, eps: np.exp(-((r / eps) ** 2)),
    "inverse_multiquadric": lambda r, eps: 1.0 / np.sqrt((r / eps) ** 2 + 1.0),
    "linear": lambda r, eps: r,
    "cubic": lambda r, eps: r ** 3,
    "thin_plate": lambda r, eps: np.where(r > 0, r ** 2 * np.log(np.where(r > 0, r, 1.0)), 0.0),
}

RBF_KERNELS = tuple(_KERNELS)


@dataclass(frozen=True)
class RbfModel:
    centers: np.ndarray
    lambdas: np.ndarray
    kernel: str
    epsilon: float


def _pairwise_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    sq = (
        np.einsum("ij,ij->i", a, a)[:, None]
        - 2.0 * a @ b.T
        + np.einsum("ij,ij->i", b, b)[None, :]
    )
    np.maximum(sq, 0.0, out=sq)
    return np.sqrt(sq)


def rbf_fit(x, y, kernel: str = "multiquadric", epsilon: float | None = None) -> RbfModel:
    x = as_matrix(x, "x")
    y = as_matrix(y, "y")
    if x.shape[0] != y.shape[0]:
        raise DataError("x/y row count mismatch")
    if x.shape[0] < 2:
        raise DataError("rbf_fit requires at least 2 points")
    if kernel not in _KERNELS:
        raise DataError(f"unknown kernel {kernel!r}; choose from {RBF_KERNELS}")
    if epsilon is None:
        epsilon = float(np.mean(NeighborIndex(x).nn_distances()))
        if epsilon <= 0:
            epsilon = 1.0
    if epsilon <= 0:
        raise DataError("epsilon must be positive")

    phi = _KERNELS[kernel](_pairwise_distances(x, x), epsilon)
    cond = np.linalg.cond(phi)
    if not np.isfinite(cond) or cond > _CONDITION_LIMIT:
        raise NumericError(
            f"RBF system for kernel {kernel!r} is singular or ill-conditioned "
            f"(condition estimate {cond:.3e})"
        )
    lambdas = np.linalg.solve(phi, y)
    return RbfModel(centers=x, lambdas=lambdas, kernel=kernel, epsilon=float(epsilon))


def rbf_eval(model: RbfModel, x) -> np.ndarray:
    x = as_point(x, model.centers.shape[1], "x")
    diff = model.centers - x
    r = np.sqrt(np.einsum("ij,ij->i", diff, diff))
    return _KERNELS[model.kernel](r, model.epsilon) @ model.lambdas
