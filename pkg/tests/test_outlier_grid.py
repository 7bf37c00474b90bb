import numpy as np
import pytest

from liontsne import DataError, compute_r_y, precompute_outlier_positions


def corner_box(extent=10.0):
    """Two opposite corners give a [0, extent]^2 bounding box."""
    return np.array([[0.0, 0.0], [extent, extent]])


def test_compute_r_y_formula():
    assert compute_r_y([1, 2, 3], 2.0, "max", 0.5) == pytest.approx(6.5)


def test_compute_r_y_plain_max():
    assert compute_r_y([1, 2, 3], 1.0, "max", 0.0) == pytest.approx(3.0)


def test_compute_r_y_constant_distribution():
    assert compute_r_y([2.0, 2.0, 2.0], 3.0, 50, 0.25) == pytest.approx(6.25)


def test_grid_5x5_construction():
    pool = precompute_outlier_positions(corner_box(), 1.0)
    assert list(pool.n_cells) == [5, 5]
    assert np.allclose(pool.cell_side, 2.0)
    # corner cells (0,0) and (4,4) hold the two training points
    assert len(pool.free_cells) == 23
    centers = np.array(pool.free_centers)
    expected = {(1.0 + 2 * a, 1.0 + 2 * b) for a in range(5) for b in range(5)}
    expected -= {(1.0, 1.0), (9.0, 9.0)}
    assert {tuple(c) for c in centers} == expected


def test_one_training_point_per_cell_empty_pool():
    pts = np.array([[1.0 + 2 * a, 1.0 + 2 * b] for a in range(5) for b in range(5)])
    pool = precompute_outlier_positions(pts, 1.0)
    assert pool.free_cells == []


def test_centers_clear_of_training_points():
    y = np.vstack([corner_box(), [[5.0, 5.0]]])
    pool = precompute_outlier_positions(y, 1.0)
    for center in pool.free_centers:
        assert np.min(np.sqrt(((y - center) ** 2).sum(axis=1))) >= 1.0


def test_narrow_box_starts_empty():
    y = np.array([[0.0, 0.0], [1.0, 1.0]])  # range 1 < 2*r_y
    pool = precompute_outlier_positions(y, 1.0)
    assert pool.free_cells == []
    assert list(pool.n_cells) == [0, 0]
    pool.expand()
    assert len(pool.free_cells) == 4
    for center in pool.free_centers:
        assert np.min(np.sqrt(((y - center) ** 2).sum(axis=1))) >= 1.0


def test_degenerate_dimension_rejected():
    with pytest.raises(DataError):
        precompute_outlier_positions(np.array([[0.0, 1.0], [5.0, 1.0]]), 1.0)


def test_take_single_position():
    pool = precompute_outlier_positions(corner_box(4.0), 1.0)
    # 2x2 grid; corners occupied leaves 2 free
    assert len(pool.free_cells) == 2
    rng = np.random.default_rng(0)
    pool.take_position(rng)
    pool.take_position(rng)
    assert pool.free_cells == []


def test_take_deterministic_sequence():
    def run():
        pool = precompute_outlier_positions(corner_box(), 1.0)
        rng = np.random.default_rng(123)
        return [tuple(pool.take_position(rng)) for _ in range(30)]

    assert run() == run()


def test_exhaustion_triggers_expansion_outside_bounds():
    pool = precompute_outlier_positions(corner_box(4.0), 1.0)
    rng = np.random.default_rng(1)
    for _ in range(len(pool.free_cells)):
        pool.take_position(rng)
    extra = pool.take_position(rng)
    assert pool.expansion_layers == 1
    assert np.any(extra < 0.0) or np.any(extra > 4.0)


def test_expansion_ring_counts_2d():
    pool = precompute_outlier_positions(corner_box(), 1.0)  # 5x5 interior
    pool.expand()
    assert pool.expansion_layers == 1
    # 23 free interior cells plus a full ring of 7*7 - 5*5 = 24
    assert len(pool.free_cells) == 23 + (7 * 7 - 5 * 5)
    before = len(pool.free_cells)
    pool.expand()
    assert len(pool.free_cells) - before == 9 * 9 - 7 * 7


def test_expansion_1d():
    pool = precompute_outlier_positions(np.array([[0.0], [10.0]]), 1.0)
    before = len(pool.free_cells)
    pool.expand()
    assert len(pool.free_cells) - before == 2


def test_random_fixtures_separation_and_spacing():
    rng = np.random.default_rng(42)
    for _ in range(50):
        n = int(rng.integers(3, 40))
        y = rng.normal(0, 5, (n, 2))
        r_y = float(rng.uniform(0.3, 3.0))
        try:
            pool = precompute_outlier_positions(y, r_y)
        except DataError:
            continue
        take_rng = np.random.default_rng(7)
        taken = [pool.take_position(take_rng) for _ in range(min(20, 5 + n))]
        for pos in taken:
            assert np.min(np.sqrt(((y - pos) ** 2).sum(axis=1))) >= r_y - 1e-12
        for i in range(len(taken)):
            for j in range(i + 1, len(taken)):
                d = np.sqrt(np.sum((taken[i] - taken[j]) ** 2))
                assert d >= min(pool.cell_side) * (1 - 1e-12)


def test_cell_union_covers_bounds_exactly():
    rng = np.random.default_rng(3)
    y = rng.normal(0, 5, (25, 2))
    pool = precompute_outlier_positions(y, 0.8)
    for dim in range(2):
        n = int(pool.n_cells[dim])
        edges = [pool.bounds[dim, 0] + i * pool.cell_side[dim] for i in range(n + 1)]
        assert edges[0] == pytest.approx(pool.bounds[dim, 0])
        assert edges[-1] == pytest.approx(pool.bounds[dim, 1])
        widths = np.diff(edges)
        assert np.allclose(widths, pool.cell_side[dim])
        assert pool.cell_side[dim] >= 2 * pool.r_y


def test_half_open_membership_no_double_count():
    # point exactly on an interior cell boundary counts for the upper cell only
    y = np.array([[0.0, 0.0], [10.0, 10.0], [4.0, 4.0]])
    pool = precompute_outlier_positions(y, 1.0)
    # (4,4) sits on the corner of cells (1,1)/(2,2); only (2,2) is occupied
    assert (1, 1) in pool.free_cells
    assert (2, 2) not in pool.free_cells
