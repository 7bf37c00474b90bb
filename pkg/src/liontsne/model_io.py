"""CSV ingestion, model persistence and SVG scatter rendering."""
from __future__ import annotations

import csv
import json
import os
import tempfile
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .core import DataError, LionConfig, MapOutcome, OutcomeKind
from .engine import LionModel
from .outlier_grid import OutlierPositionPool

SCHEMA_VERSION = 1


def _atomic_write(path: str, data: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_matrix_csv(
    path: str,
    has_header: bool = False,
    label_column: Optional[str] = None,
) -> Tuple[np.ndarray, Optional[list]]:
    """Parse a rectangular numeric CSV; optionally split off a label column."""
    if label_column is not None and not has_header:
        raise DataError("label_column requires has_header")
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    rows = [r for r in rows if r]
    if not rows:
        raise DataError(f"{path}: empty file")

    header = None
    label_idx = None
    if has_header:
        header = rows.pop(0)
        if label_column is not None:
            if label_column not in header:
                raise DataError(f"{path}: no column named {label_column!r}")
            label_idx = header.index(label_column)
    if not rows:
        raise DataError(f"{path}: no data rows")

    width = len(rows[0])
    values = []
    labels = [] if label_idx is not None else None
    for line_no, row in enumerate(rows, start=2 if has_header else 1):
        if len(row) != width:
            raise DataError(f"{path}: ragged row at line {line_no}")
        parsed = []
        for col, cell in enumerate(row):
            if col == label_idx:
                labels.append(cell)
                continue
            try:
                parsed.append(float(cell))
            except ValueError:
                raise DataError(
                    f"{path}: non-numeric cell {cell!r} at line {line_no}, column {col + 1}"
                ) from None
        values.append(parsed)
    matrix = np.array(values, dtype=float)
    if not np.all(np.isfinite(matrix)):
        raise DataError(f"{path}: non-finite values")
    return matrix, labels


def write_matrix_csv(
    path: str,
    matrix: np.ndarray,
    header: Optional[Sequence[str]] = None,
    kinds: Optional[Sequence[str]] = None,
) -> None:
    lines = []
    if header is not None:
        lines.append(",".join(header))
    for i, row in enumerate(np.asarray(matrix, dtype=float)):
        cells = [repr(float(v)) for v in row]
        if kinds is not None:
            cells.append(kinds[i])
        lines.append(",".join(cells))
    _atomic_write(path, "\n".join(lines) + "\n")


def _config_to_dict(config: LionConfig) -> dict:
    return {
        "rx_percentile": config.rx_percentile,
        "ry_coefficient": config.ry_coefficient,
        "ry_percentile": config.ry_percentile,
        "rclose_percentile": config.rclose_percentile,
        "power": config.power,
        "power_search_grid": list(config.power_search_grid),
        "seed": config.seed,
    }


def _config_from_dict(doc: dict) -> LionConfig:
    return LionConfig(
        rx_percentile=doc["rx_percentile"],
        ry_coefficient=doc["ry_coefficient"],
        ry_percentile=doc["ry_percentile"],
        rclose_percentile=doc["rclose_percentile"],
        power=doc["power"],
        power_search_grid=tuple(doc["power_search_grid"]),
        seed=doc["seed"],
    )


def save_model(model: LionModel, path: str) -> None:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "config": _config_to_dict(model.config),
        "r_x": model.r_x,
        "r_close": model.r_close,
        "r_y": model.r_y,
        "power": model.power,
        "x_train": model.x_train.tolist(),
        "y_train": model.y_train.tolist(),
        "training_outlier_flags": [bool(v) for v in model.training_outlier_flags],
        "pool": {
            "bounds": model.pool.bounds.tolist(),
            "cell_side": model.pool.cell_side.tolist(),
            "n_cells": [int(v) for v in model.pool.n_cells],
            "r_y": model.pool.r_y,
            "free_cells": [list(c) for c in model.pool.free_cells],
            "expansion_layers": model.pool.expansion_layers,
        },
    }
    _atomic_write(path, json.dumps(doc, indent=1))


def load_model(path: str) -> LionModel:
    with open(path) as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: invalid JSON ({exc})") from None

    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise DataError(f"{path}: unsupported schema_version {version!r}")

    def fetch(container, key, parent="model"):
        if key not in container:
            raise DataError(f"{path}: missing field {parent}.{key}")
        return container[key]

    try:
        pool_doc = fetch(doc, "pool")
        pool = OutlierPositionPool(
            bounds=np.array(fetch(pool_doc, "bounds", "pool"), dtype=float),
            cell_side=np.array(fetch(pool_doc, "cell_side", "pool"), dtype=float),
            n_cells=np.array(fetch(pool_doc, "n_cells", "pool"), dtype=int),
            r_y=float(fetch(pool_doc, "r_y", "pool")),
            free_cells=[tuple(c) for c in fetch(pool_doc, "free_cells", "pool")],
            expansion_layers=int(fetch(pool_doc, "expansion_layers", "pool")),
        )
        return LionModel(
            x_train=np.array(fetch(doc, "x_train"), dtype=float),
            y_train=np.array(fetch(doc, "y_train"), dtype=float),
            r_x=float(fetch(doc, "r_x")),
            r_close=float(fetch(doc, "r_close")),
            r_y=float(fetch(doc, "r_y")),
            power=float(fetch(doc, "power")),
            training_outlier_flags=np.array(
                fetch(doc, "training_outlier_flags"), dtype=bool
            ),
            pool=pool,
            config=_config_from_dict(fetch(doc, "config")),
        )
    except (TypeError, ValueError, KeyError) as exc:
        raise DataError(f"{path}: corrupted field ({exc})") from None


_KIND_COLORS = {
    OutcomeKind.INTERPOLATED: "#1f77b4",
    OutcomeKind.NEAR_SINGLE: "#ff7f0e",
    OutcomeKind.OUTLIER: "#d62728",
}


def render_svg(
    y_train: np.ndarray,
    outcomes: Sequence[MapOutcome],
    r_y: float,
    path: str,
    show_radius_circles: bool = True,
    size: int = 640,
) -> None:
    """Training scatter plus mapped points colored by outcome kind.

    Coordinates are data-space inside a computed viewBox, so output bytes are
    a pure function of the inputs.
    """
    y_train = np.asarray(y_train, dtype=float)
    if y_train.ndim != 2 or y_train.shape[1] != 2:
        raise DataError("render_svg requires 2-D embeddings")
    points = [y_train]
    for o in outcomes:
        if o.y.size != 2:
            raise DataError("render_svg requires 2-D embeddings")
        points.append(o.y.reshape(1, 2))
    allpts = np.vstack(points)
    lo = allpts.min(axis=0)
    hi = allpts.max(axis=0)
    span = np.maximum(hi - lo, 1e-9)
    pad = 0.05 * span.max() + (r_y if show_radius_circles else 0.0)
    scale = size / (span.max() + 2 * pad)

    def sx(v):
        return f"{(v - lo[0] + pad) * scale:.3f}"

    def sy(v):
        # SVG y axis points down
        return f"{(hi[1] - v + pad) * scale:.3f}"

    marker = max(2.5, 0.004 * size)
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size}" height="{size}" '
        f'viewBox="0 0 {(span[0] + 2 * pad) * scale:.3f} {(span[1] + 2 * pad) * scale:.3f}">',
        '<rect width="100%" height="100%" fill="#ffffff"/>',
    ]
    for row in y_train:
        parts.append(
            f'<circle cx="{sx(row[0])}" cy="{sy(row[1])}" r="{marker}" '
            f'fill="#9e9e9e" fill-opacity="0.7"/>'
        )
    for o in outcomes:
        color = _KIND_COLORS[o.kind]
        if o.kind is OutcomeKind.OUTLIER and show_radius_circles:
            parts.append(
                f'<circle cx="{sx(o.y[0])}" cy="{sy(o.y[1])}" r="{r_y * scale:.3f}" '
                f'fill="none" stroke="{color}" stroke-opacity="0.4" stroke-width="1"/>'
            )
        parts.append(
            f'<circle cx="{sx(o.y[0])}" cy="{sy(o.y[1])}" r="{marker * 1.4}" '
            f'fill="{color}"/>'
        )
    parts.append("</svg>")
    _atomic_write(path, "\n".join(parts) + "\n")


def write_curve_csv(path: str, grid: np.ndarray, errors: np.ndarray) -> None:
    lines = ["p,error"]
    for p, e in zip(grid, errors):
        lines.append(f"{repr(float(p))},{repr(float(e))}")
    _atomic_write(path, "\n".join(lines) + "\n")


def write_report_csv(path: str, report) -> None:
    columns = ["accuracy", "distance_percentile", "nn_distance", "kl_divergence", "kind"]
    lines = [",".join(columns)]
    for rec in report.per_sample:
        cells = []
        for name in columns:
            v = getattr(rec, name)
            cells.append("" if v is None else (v if isinstance(v, str) else repr(float(v))))
        lines.append(",".join(cells))
    _atomic_write(path, "\n".join(lines) + "\n")


def write_report_json(path: str, report) -> None:
    doc = dict(report.aggregates)
    if report.baseline_accuracy is not None:
        doc["baseline_accuracy"] = report.baseline_accuracy
    _atomic_write(path, json.dumps(doc, indent=1) + "\n")
