import math

import numpy as np
import pytest

from liontsne import DataError, LionConfig, euclidean_distance, percentile
from liontsne.core import as_matrix


def test_distance_345():
    assert euclidean_distance((0, 0), (3, 4)) == 5.0


def test_distance_identity():
    assert euclidean_distance([1.7], [1.7]) == 0.0


def test_distance_formula():
    # direct formula: sqrt(1 + 4 + 16)
    assert euclidean_distance((1, 1, 1), (2, 3, 5)) == pytest.approx(math.sqrt(21))


def test_distance_dimension_mismatch():
    with pytest.raises(DataError):
        euclidean_distance((1, 2), (1, 2, 3))


def test_distance_symmetry_and_triangle():
    rng = np.random.default_rng(3)
    for _ in range(200):
        a, b, c = rng.normal(0, 5, (3, 4))
        assert euclidean_distance(a, b) == euclidean_distance(b, a)
        assert euclidean_distance(a, c) <= (
            euclidean_distance(a, b) + euclidean_distance(b, c) + 1e-12
        )


def test_percentile_extremes():
    assert percentile([5, 1, 9], 100) == 9
    assert percentile([5, 1, 9], 0) == 1


def test_percentile_linear_interpolation():
    # oracle: sort [1,2,3,4], rank position 1.5 -> midpoint of 2 and 3
    assert percentile([1, 2, 3, 4], 50) == pytest.approx(2.5)


def test_percentile_errors():
    with pytest.raises(DataError):
        percentile([], 50)
    with pytest.raises(DataError):
        percentile([1, 2], 101)
    with pytest.raises(DataError):
        percentile([1, 2], -1)


def test_percentile_monotone_in_q():
    rng = np.random.default_rng(7)
    values = rng.normal(0, 3, 37)
    qs = np.sort(rng.uniform(0, 100, 25))
    results = [percentile(values, q) for q in qs]
    assert all(a <= b + 1e-12 for a, b in zip(results, results[1:]))


def test_matrix_rejects_non_finite():
    with pytest.raises(DataError):
        as_matrix([[1.0, np.nan]])
    with pytest.raises(DataError):
        as_matrix([[np.inf, 2.0]])


def test_matrix_rejects_empty():
    with pytest.raises(DataError):
        as_matrix(np.zeros((0, 2)))


def test_config_validation():
    with pytest.raises(DataError):
        LionConfig(rx_percentile=0)
    with pytest.raises(DataError):
        LionConfig(power=-1.0)
    with pytest.raises(DataError):
        LionConfig(power_search_grid=(5.0, 1.0, 0.5))
    with pytest.raises(DataError):
        LionConfig(ry_percentile="median")
    LionConfig()  # defaults are valid
