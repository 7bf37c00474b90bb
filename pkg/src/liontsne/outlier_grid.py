"""Free-cell grid in embedding space for outlier placement.

Cells have side >= 2*r_y, so a cell center is at least r_y away (through the
nearest face) from anything outside its own cell, and distinct cell centers
are at least one cell side apart. Cells are addressed by integer index tuples;
interior indices are [0, n_d) per dimension and expansion rings use indices
outside that range, tiling outward from the original bounding box edges.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .core import DataError, NumericError, as_matrix, percentile

Cell = Tuple[int, ...]


def compute_r_y(nn_dists_y, k: float, q, r_close: float) -> float:
    """r_y = k * r_yNN + r_close, with r_yNN a percentile (or max) of D_NN."""
    v = np.asarray(nn_dists_y, dtype=float).ravel()
    if v.size == 0:
        raise DataError("empty nearest-neighbor distance distribution")
    r_ynn = float(v.max()) if q == "max" else percentile(v, float(q))
    return float(k) * r_ynn + float(r_close)


@dataclass
class OutlierPositionPool:
    """Dispensable free-cell centers, expandable in rings beyond the bounds."""

    bounds: np.ndarray          # (d, 2) per-dimension (min, max) of Y_train
    cell_side: np.ndarray       # (d,) adjusted side r_adj, >= 2*r_y
    n_cells: np.ndarray         # (d,) interior cell counts (0 if range < 2*r_y)
    r_y: float
    free_cells: List[Cell] = field(default_factory=list)
    expansion_layers: int = 0

    def cell_center(self, cell: Cell) -> np.ndarray:
        c = np.empty(len(cell))
        for dim, i in enumerate(cell):
            if i < self.n_cells[dim]:
                lo = self.bounds[dim, 0] + i * self.cell_side[dim]
            else:
                lo = self.bounds[dim, 1] + (i - self.n_cells[dim]) * self.cell_side[dim]
            c[dim] = lo + 0.5 * self.cell_side[dim]
        return c

    @property
    def free_centers(self) -> List[np.ndarray]:
        return [self.cell_center(c) for c in self.free_cells]

    def take_position(self, rng: np.random.Generator) -> np.ndarray:
        """Remove and return a uniformly random free center; expands if empty."""
        while not self.free_cells:
            self.expand()
        j = int(rng.integers(len(self.free_cells)))
        self.free_cells[j], self.free_cells[-1] = self.free_cells[-1], self.free_cells[j]
        return self.cell_center(self.free_cells.pop())

    def expand(self) -> None:
        """Add one full ring of cells around the currently covered rectangle."""
        layer = self.expansion_layers + 1
        d = len(self.n_cells)
        ranges = [range(-layer, int(self.n_cells[dim]) + layer) for dim in range(d)]
        new = [
            cell
            for cell in itertools.product(*ranges)
            if any(
                i < -(layer - 1) or i > self.n_cells[dim] + layer - 2
                for dim, i in enumerate(cell)
            )
        ]
        self.free_cells.extend(sorted(new))
        self.expansion_layers = layer


def precompute_outlier_positions(y_train, r_y: float) -> OutlierPositionPool:
    y = as_matrix(y_train, "y_train")
    d = y.shape[1]
    if d > 3:
        raise DataError(f"embedding dimensionality {d} > 3 is not supported")
    if r_y <= 0:
        raise DataError("r_y must be positive")

    mins = y.min(axis=0)
    maxs = y.max(axis=0)
    ranges = maxs - mins
    if np.any(ranges <= 0):
        raise DataError("degenerate (zero-extent) embedding dimension")

    n_cells = np.floor(ranges / (2.0 * r_y)).astype(int)
    side = np.where(n_cells >= 1, ranges / np.maximum(n_cells, 1), 2.0 * r_y)

    pool = OutlierPositionPool(
        bounds=np.column_stack([mins, maxs]),
        cell_side=side,
        n_cells=n_cells,
        r_y=float(r_y),
    )

    if np.all(n_cells >= 1):
        # Locate each training point's cell: half-open [lo, hi) with the last
        # cell per dimension closed (points at the max edge clip into it).
        idx = np.floor((y - mins) / side).astype(int)
        idx = np.minimum(idx, n_cells - 1)
        occupied = {tuple(row) for row in idx}
        all_cells = itertools.product(*[range(int(n)) for n in n_cells])
        pool.free_cells = sorted(c for c in all_cells if c not in occupied)

    # Geometry guarantees the r_y clearance; verify against the training data.
    for cell in pool.free_cells:
        center = pool.cell_center(cell)
        if np.min(np.sqrt(((y - center) ** 2).sum(axis=1))) < r_y:
            raise NumericError(
                f"free cell {cell} violates the r_y={r_y} clearance"
            )  # pragma: no cover - construction invariant
    return pool
