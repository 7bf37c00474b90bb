import numpy as np
import pytest

from liontsne import (
    DataError,
    NumericError,
    idw_global,
    idw_interpolate,
    rbf_eval,
    rbf_fit,
)
from liontsne.interpolate import RBF_KERNELS

# 1-D toy pairs used throughout power-selection discussion
TOY_X = np.array([[10.0], [20.0], [30.0], [40.0]])
TOY_Y = np.array([[10.0], [40.0], [1.0], [50.0]])


def idw_oracle(x, xs, ys, p):
    """Independent direct-sum evaluation of the weighted-sum formula."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    num = np.zeros(ys.shape[1])
    den = 0.0
    for xi, yi in zip(xs, ys):
        d = np.sqrt(np.sum((x - xi) ** 2))
        if d == 0:
            return yi.copy()
        w = d ** -p
        num += w * yi
        den += w
    return num / den


def test_exact_match_forced():
    out = idw_interpolate([10.0], TOY_X, TOY_Y, 2.0)
    assert np.array_equal(out, TOY_Y[0])


def test_equidistant_pair_mean_any_p():
    xs = np.array([[0.0], [2.0]])
    ys = np.array([[1.0, 5.0], [3.0, -5.0]])
    for p in (0.5, 2.0, 40.0, 200.0):
        assert np.allclose(idw_interpolate([1.0], xs, ys, p), [2.0, 0.0])


def test_toy_value_matches_oracle():
    expected = idw_oracle([15.0], TOY_X, TOY_Y, 2.0)
    out = idw_interpolate([15.0], TOY_X, TOY_Y, 2.0)
    assert np.allclose(out, expected, rtol=1e-12)
    assert out[0] == pytest.approx(24.2252, abs=1e-3)


def test_single_row_returns_that_y():
    out = idw_interpolate([5.0], np.array([[1.0]]), np.array([[7.0, 8.0]]), 3.0)
    assert np.array_equal(out, [7.0, 8.0])


def test_errors():
    with pytest.raises(DataError):
        idw_interpolate([1.0], TOY_X, TOY_Y[:2], 2.0)
    with pytest.raises(DataError):
        idw_interpolate([1.0], TOY_X, TOY_Y, 0.0)


def test_global_low_power_near_mean():
    out = idw_global([1e5], TOY_X, TOY_Y, 0.01)
    mean = TOY_Y.mean(axis=0)
    assert np.all(np.abs(out - mean) <= 0.01 * np.abs(mean))


def test_global_high_power_nearest():
    out = idw_global([29.0], TOY_X, TOY_Y, 200.0)
    assert np.allclose(out, TOY_Y[2], atol=1e-9)


def test_global_equals_local_on_full_set():
    for x in (15.0, 22.5, 37.0):
        a = idw_global([x], TOY_X, TOY_Y, 2.0)
        b = idw_interpolate([x], TOY_X, TOY_Y, 2.0)
        assert np.array_equal(a, b)


def test_weights_and_convex_hull_properties():
    rng = np.random.default_rng(21)
    from liontsne.interpolate import idw_weights

    for _ in range(50):
        xs = rng.normal(0, 2, (8, 3))
        ys = rng.normal(0, 2, (8, 2))
        x = rng.normal(0, 2, 3)
        p = rng.uniform(0.3, 60)
        d = np.sqrt(((xs - x) ** 2).sum(axis=1))
        w = idw_weights(d, p)
        assert np.all(w >= 0)
        assert abs(w.sum() - 1.0) < 1e-12
        out = idw_interpolate(x, xs, ys, p)
        assert np.all(out >= ys.min(axis=0) - 1e-12)
        assert np.all(out <= ys.max(axis=0) + 1e-12)


def test_continuity_away_from_data():
    rng = np.random.default_rng(4)
    xs = rng.normal(0, 1, (10, 2))
    ys = rng.normal(0, 1, (10, 2))
    x = xs.mean(axis=0) + np.array([5.0, 5.0])  # > 0.1 from every sample
    a = idw_interpolate(x, xs, ys, 5.0)
    b = idw_interpolate(x + 1e-9, xs, ys, 5.0)
    assert np.all(np.abs(a - b) < 1e-6)


def test_large_power_no_overflow():
    out = idw_interpolate([11.0], TOY_X, TOY_Y, 200.0)
    assert np.all(np.isfinite(out))
    assert np.allclose(out, TOY_Y[0], atol=1e-9)


def test_rbf_two_points_linear():
    model = rbf_fit(np.array([[0.0], [1.0]]), np.array([[2.0], [5.0]]), "linear")
    assert np.allclose(rbf_eval(model, [0.0]), [2.0], atol=1e-8)
    assert np.allclose(rbf_eval(model, [1.0]), [5.0], atol=1e-8)


@pytest.mark.parametrize("kernel", RBF_KERNELS)
def test_rbf_center_reproduction(kernel):
    rng = np.random.default_rng(8)
    xs = rng.normal(0, 2, (20, 3))
    ys = rng.normal(0, 2, (20, 2))
    model = rbf_fit(xs, ys, kernel)
    for i in range(20):
        out = rbf_eval(model, xs[i])
        assert np.allclose(out, ys[i], rtol=1e-6, atol=1e-6 * np.abs(ys).max())


def test_rbf_duplicate_centers_singular():
    xs = np.array([[0.0], [0.0], [1.0]])
    ys = np.array([[1.0], [2.0], [3.0]])
    with pytest.raises(NumericError, match="gaussian"):
        rbf_fit(xs, ys, "gaussian")


def test_rbf_symmetric_midpoint():
    xs = np.array([[-1.0], [1.0]])
    # linear kernel on two points reproduces the mean at the midpoint exactly
    model = rbf_fit(xs, np.array([[0.0], [4.0]]), "linear")
    assert np.allclose(rbf_eval(model, [0.0]), [2.0], atol=1e-9)
    # radially symmetric kernels: antisymmetric y values cancel at the center
    for kernel in ("gaussian", "multiquadric", "inverse_multiquadric"):
        model = rbf_fit(xs, np.array([[-4.0], [4.0]]), kernel, epsilon=1.0)
        assert np.allclose(rbf_eval(model, [0.0]), [0.0], atol=1e-9)


def test_rbf_eval_matches_direct_sum_oracle():
    from liontsne.interpolate import _KERNELS

    rng = np.random.default_rng(15)
    xs = rng.normal(0, 1, (12, 2))
    ys = rng.normal(0, 1, (12, 2))
    model = rbf_fit(xs, ys, "multiquadric", epsilon=0.8)
    for _ in range(20):
        x = rng.normal(0, 1, 2)
        expected = sum(
            model.lambdas[i] * _KERNELS["multiquadric"](
                np.sqrt(np.sum((x - xs[i]) ** 2)), 0.8
            )
            for i in range(12)
        )
        assert np.allclose(rbf_eval(model, x), expected, atol=1e-10)


def test_rbf_eval_dimension_mismatch():
    model = rbf_fit(np.array([[0.0], [1.0]]), np.array([[0.0], [1.0]]), "linear")
    with pytest.raises(DataError):
        rbf_eval(model, [0.0, 1.0])
