"""Exact radius and k-NN queries over a fixed point set.

Brute-force vectorized scans: O(NK) per query, which is the cost model the
mapping path is designed around. Results are exact and tie-broken by index.
"""
from __future__ import annotations

import numpy as np

from .core import DataError, as_matrix, as_point


class NeighborIndex:
    """Immutable index over a point set; all queries are exact."""

    def __init__(self, points):
        self.points = as_matrix(points, "points")
        self._sq_norms = np.einsum("ij,ij->i", self.points, self.points)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def _distances(self, x: np.ndarray) -> np.ndarray:
        diff = self.points - x
        return np.sqrt(np.einsum("ij,ij->i", diff, diff))

    def radius_query(self, x, r: float) -> np.ndarray:
        """Indices i with ||x - points[i]|| <= r, ascending."""
        x = as_point(x, self.dim, "query point")
        if r < 0:
            raise DataError(f"negative radius {r}")
        d = self._distances(x)
        return np.flatnonzero(d <= r)

    def knn_query(self, x, k: int) -> np.ndarray:
        """Indices of the k nearest points, by distance then by index."""
        x = as_point(x, self.dim, "query point")
        if not (1 <= k <= self.n):
            raise DataError(f"k={k} outside [1, {self.n}]")
        d = self._distances(x)
        order = np.lexsort((np.arange(self.n), d))
        return order[:k]

    def nn_distances(self, chunk: int = 512) -> np.ndarray:
        """Distance of each point to its nearest other point (D_NN)."""
        if self.n < 2:
            raise DataError("nn_distances requires at least 2 points")
        out = np.empty(self.n)
        for start in range(0, self.n, chunk):
            stop = min(start + chunk, self.n)
            block = self.points[start:stop]
            sq = (
                self._sq_norms[start:stop, None]
                - 2.0 * block @ self.points.T
                + self._sq_norms[None, :]
            )
            np.maximum(sq, 0.0, out=sq)
            rows = np.arange(start, stop)
            sq[rows - start, rows] = np.inf
            out[start:stop] = np.sqrt(sq.min(axis=1))
        return out


def build_index(points) -> NeighborIndex:
    return NeighborIndex(points)
