"""Matplotlib figures rendered alongside the delimited report output."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .core import OutcomeKind
from .power_select import PowerCurve

_KIND_COLORS = {
    OutcomeKind.INTERPOLATED.value: "tab:blue",
    OutcomeKind.NEAR_SINGLE.value: "tab:orange",
    OutcomeKind.OUTLIER.value: "tab:red",
}


def power_curve_figure(curve: PowerCurve, path: str) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(curve.grid, curve.errors, "-", color="tab:blue", lw=1.2)
    ax.axvline(curve.best_p, color="tab:red", ls="--", lw=1,
               label=f"selected p = {curve.best_p:g}")
    ax.set_xlabel("power p")
    ax.set_ylabel("leave-one-out mean squared error")
    ax.set_yscale("log")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def report_figure(report, path: str) -> None:
    """Histogram of distance percentiles plus per-kind sample counts."""
    percentiles = [r.distance_percentile for r in report.per_sample
                   if r.distance_percentile is not None]
    kinds = [r.kind for r in report.per_sample if r.kind is not None]
    fig, axes = plt.subplots(1, 2, figsize=(9, 4))
    axes[0].hist(percentiles, bins=20, range=(0, 100), color="tab:blue")
    axes[0].set_xlabel("nearest-neighbor distance percentile")
    axes[0].set_ylabel("samples")
    names = sorted(set(kinds))
    counts = [kinds.count(n) for n in names]
    axes[1].bar(names, counts, color=[_KIND_COLORS.get(n, "tab:gray") for n in names])
    axes[1].set_ylabel("samples")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def embedding_figure(y_train: np.ndarray, outcomes, path: str) -> None:
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.scatter(y_train[:, 0], y_train[:, 1], s=8, c="0.6", label="training")
    for kind in OutcomeKind:
        pts = np.array([o.y for o in outcomes if o.kind is kind])
        if pts.size:
            ax.scatter(pts[:, 0], pts[:, 1], s=18,
                       c=_KIND_COLORS[kind.value], label=kind.value)
    ax.legend()
    ax.set_aspect("equal")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
