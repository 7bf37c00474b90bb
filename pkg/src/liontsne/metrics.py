"""Evaluation metrics: k-NN label accuracy, nearest-neighbor distance
percentile against D_NN, and KL divergence of the joint neighbor
distributions with the new sample appended."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .core import DataError, NumericError, OutcomeKind, as_matrix, as_point
from .engine import LionModel, map_batch
from .neighbors import NeighborIndex

ENTROPY_TOL = 1e-5
MAX_SIGMA_ITERATIONS = 200


@dataclass
class SampleMetrics:
    accuracy: Optional[float] = None
    distance_percentile: Optional[float] = None
    nn_distance: Optional[float] = None
    kl_divergence: Optional[float] = None
    kind: Optional[str] = None


@dataclass
class EvalReport:
    per_sample: List[SampleMetrics]
    aggregates: dict = field(default_factory=dict)
    baseline_accuracy: Optional[float] = None


def knn_accuracy(y_train, labels: Sequence, y_new, label_new, k: int = 10) -> float:
    """Fraction of the k nearest training embeddings sharing label_new."""
    y_train = as_matrix(y_train, "y_train")
    if len(labels) != y_train.shape[0]:
        raise DataError("labels length must match y_train rows")
    idx = NeighborIndex(y_train).knn_query(y_new, k)
    return float(np.mean([labels[i] == label_new for i in idx]))


def nn_distance_percentile(d_nn, y_new, y_train) -> float:
    """Percentile rank (fraction <=, x100) of the new sample's nearest-training
    distance within the D_NN distribution."""
    d_nn = np.asarray(d_nn, dtype=float).ravel()
    y_train = as_matrix(y_train, "y_train")
    y_new = as_point(y_new, y_train.shape[1], "y_new")
    diff = y_train - y_new
    d = float(np.sqrt(np.einsum("ij,ij->i", diff, diff)).min())
    return float(np.mean(d_nn <= d) * 100.0)


def perplexity_sigma(dist_row, perplexity: float) -> float:
    """Bandwidth sigma such that the entropy of the conditional distribution
    p_j ~ exp(-d_j^2 / (2 sigma^2)) matches log2(perplexity)."""
    d = np.asarray(dist_row, dtype=float).ravel()
    if d.size < 2:
        raise DataError("distance row must have at least 2 entries")
    if not (0 < perplexity < d.size):
        raise DataError(f"perplexity {perplexity} must be in (0, row length)")
    target = np.log2(perplexity)
    d2 = d ** 2
    if np.ptp(d2) <= 1e-12 * (1.0 + d2.max()):
        # all-equal distances give a uniform distribution for every sigma;
        # return a scale-covariant representative
        return float(np.mean(d)) if np.mean(d) > 0 else 1.0

    def entropy(beta):
        logits = -d2 * beta
        logits -= logits.max()
        p = np.exp(logits)
        p /= p.sum()
        nz = p > 0
        return float(-np.sum(p[nz] * np.log2(p[nz])))

    beta, beta_lo, beta_hi = 1.0, 0.0, np.inf
    h = entropy(beta)
    for _ in range(MAX_SIGMA_ITERATIONS):
        if abs(h - target) <= ENTROPY_TOL:
            break
        if h > target:
            beta_lo = beta
            beta = beta * 2.0 if np.isinf(beta_hi) else 0.5 * (beta + beta_hi)
        else:
            beta_hi = beta
            beta = 0.5 * (beta + beta_lo)
        h = entropy(beta)
    else:
        raise NumericError(
            f"sigma search did not converge: achieved entropy {h:.6f}, "
            f"target {target:.6f}"
        )
    return float(1.0 / np.sqrt(2.0 * beta))


def _conditional_p(dist_sq_row: np.ndarray, sigma: float) -> np.ndarray:
    logits = -dist_sq_row / (2.0 * sigma ** 2)
    logits -= logits.max()
    p = np.exp(logits)
    return p / p.sum()


def joint_p_matrix(x_all: np.ndarray, perplexity: float) -> np.ndarray:
    """Symmetrized tSNE P matrix over all rows; off-diagonal sums to 1."""
    n = x_all.shape[0]
    sq = (
        np.einsum("ij,ij->i", x_all, x_all)[:, None]
        - 2.0 * x_all @ x_all.T
        + np.einsum("ij,ij->i", x_all, x_all)[None, :]
    )
    np.maximum(sq, 0.0, out=sq)
    cond = np.zeros((n, n))
    others = np.arange(n)
    for i in range(n):
        mask = others != i
        row = sq[i, mask]
        sigma = perplexity_sigma(np.sqrt(row), perplexity)
        cond[i, mask] = _conditional_p(row, sigma)
    return (cond + cond.T) / (2.0 * n)


def joint_q_matrix(y_all: np.ndarray) -> np.ndarray:
    """Student-t Q matrix; off-diagonal sums to 1."""
    n = y_all.shape[0]
    sq = (
        np.einsum("ij,ij->i", y_all, y_all)[:, None]
        - 2.0 * y_all @ y_all.T
        + np.einsum("ij,ij->i", y_all, y_all)[None, :]
    )
    np.maximum(sq, 0.0, out=sq)
    q = 1.0 / (1.0 + sq)
    np.fill_diagonal(q, 0.0)
    return q / q.sum()


def kl_with_sample(x_train, y_train, x_new, y_new, perplexity: float = 30.0) -> float:
    """KL(P || Q) over the (N+1)x(N+1) matrices with the new sample appended."""
    x_train = as_matrix(x_train, "x_train")
    y_train = as_matrix(y_train, "y_train")
    x_new = as_point(x_new, x_train.shape[1], "x_new")
    y_new = as_point(y_new, y_train.shape[1], "y_new")
    x_all = np.vstack([x_train, x_new])
    y_all = np.vstack([y_train, y_new])
    p = joint_p_matrix(x_all, perplexity)
    q = joint_q_matrix(y_all)
    mask = p > 0
    return float(np.sum(p[mask] * np.log(p[mask] / np.maximum(q[mask], 1e-300))))


def run_attribution_test(
    model: LionModel,
    x_test,
    labels_test: Sequence,
    labels_train: Sequence,
    k: int = 10,
    seed: Optional[int] = None,
    compute_kl: bool = False,
    perplexity: float = 30.0,
) -> EvalReport:
    x_test = as_matrix(x_test, "x_test")
    if len(labels_test) != x_test.shape[0]:
        raise DataError("labels_test length must match x_test rows")
    if len(labels_train) != model.y_train.shape[0]:
        raise DataError("labels_train length must match training rows")

    y_index = NeighborIndex(model.y_train)
    d_nn = y_index.nn_distances()
    outcomes = map_batch(model, x_test, seed=seed)

    per_sample = []
    baseline = []
    for i, outcome in enumerate(outcomes):
        label = labels_test[i]
        diff = model.y_train - outcome.y
        dist = float(np.sqrt(np.einsum("ij,ij->i", diff, diff)).min())
        rec = SampleMetrics(
            accuracy=knn_accuracy(model.y_train, labels_train, outcome.y, label, k),
            distance_percentile=float(np.mean(d_nn <= dist) * 100.0),
            nn_distance=dist,
            kind=outcome.kind.value,
        )
        if compute_kl:
            rec.kl_divergence = kl_with_sample(
                model.x_train, model.y_train, x_test[i], outcome.y, perplexity
            )
        per_sample.append(rec)
        nearest = int(model.x_index.knn_query(x_test[i], 1)[0])
        baseline.append(
            knn_accuracy(model.y_train, labels_train, model.y_train[nearest], label, k)
        )

    report = EvalReport(per_sample=per_sample, baseline_accuracy=float(np.mean(baseline)))
    report.aggregates = _aggregate(per_sample)
    report.aggregates["baseline_accuracy"] = report.baseline_accuracy
    return report


def run_outlier_test(model: LionModel, x_out, seed: Optional[int] = None) -> EvalReport:
    x_out = as_matrix(x_out, "x_out")
    d_nn = NeighborIndex(model.y_train).nn_distances()
    outcomes = map_batch(model, x_out, seed=seed)

    per_sample = []
    for outcome in outcomes:
        diff = model.y_train - outcome.y
        dist = float(np.sqrt(np.einsum("ij,ij->i", diff, diff)).min())
        per_sample.append(
            SampleMetrics(
                distance_percentile=float(np.mean(d_nn <= dist) * 100.0),
                nn_distance=dist,
                kind=outcome.kind.value,
            )
        )

    report = EvalReport(per_sample=per_sample)
    report.aggregates = _aggregate(per_sample)
    non_outliers = sum(1 for r in per_sample if r.kind != OutcomeKind.OUTLIER.value)
    report.aggregates["non_outlier_count"] = non_outliers
    return report


def _aggregate(per_sample: List[SampleMetrics]) -> dict:
    if not per_sample:
        raise DataError("empty test set")
    out = {"n_samples": len(per_sample)}
    for name in ("accuracy", "distance_percentile", "nn_distance", "kl_divergence"):
        values = [getattr(r, name) for r in per_sample if getattr(r, name) is not None]
        if values:
            out[f"mean_{name}"] = float(np.mean(values))
    return out
