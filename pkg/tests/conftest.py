import numpy as np
import pytest

from liontsne import LionConfig, fit


def make_blobs(seed=0, n_per=60, n_blobs=5, dim=10, blob_sigma=1.0):
    """Labeled blob fixture: clustered x, with y a smooth (per-blob linear)
    function of the within-blob offset, so interpolation has structure to
    recover."""
    rng = np.random.default_rng(seed)
    x_centers = rng.normal(0, 10, (n_blobs, dim))
    y_centers = rng.normal(0, 8, (n_blobs, 2))
    proj = rng.normal(0, 0.3, (dim, 2))
    xs, ys, labels = [], [], []
    for b in range(n_blobs):
        offsets = rng.normal(0, blob_sigma, (n_per, dim))
        xs.append(x_centers[b] + offsets)
        ys.append(y_centers[b] + offsets @ proj)
        labels.extend([str(b)] * n_per)
    return np.vstack(xs), np.vstack(ys), labels


@pytest.fixture(scope="session")
def blob_data():
    return make_blobs(seed=0)


@pytest.fixture(scope="session")
def blob_model(blob_data):
    x, y, _ = blob_data
    return fit(x, y, LionConfig(rx_percentile=100, power=10.0, seed=42))
