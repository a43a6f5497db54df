import numpy as np
import pytest

import oracles
from halting_nets.cubical import boundary_matrix, build_cubical, euler_characteristic, face_indices
from halting_nets.netbuilder import (
    DyadicPoint,
    OffGridError,
    boundary_net,
    cumulative_net,
    full_grid,
    punctured_net,
)


def index_set(coords):
    return {tuple(int(v) for v in row) for row in coords}


def full_minus_centre(m, D):
    g = full_grid(m, D)
    return g[~(g == 2 ** (m - 1)).all(axis=1)]


def test_full_cube_level_one_counts():
    cx = build_cubical(cumulative_net(1, 3), 1, 3)
    assert cx.cell_counts == [27, 54, 36, 8]
    assert cx.euler() == 1


def test_cube_minus_centre_counts():
    cx = build_cubical(full_minus_centre(1, 3), 1, 3)
    assert cx.cell_counts == [26, 48, 24, 0]
    assert cx.euler() == 2


def test_single_point():
    cx = build_cubical([DyadicPoint.center(3)], 1, 3)
    assert cx.cell_counts == [1, 0, 0, 0]


def test_empty_point_set():
    cx = build_cubical(np.zeros((0, 2), dtype=np.int64), 2, 2)
    assert cx.cell_counts == [0, 0, 0]


def test_off_grid_rejected():
    with pytest.raises(OffGridError):
        build_cubical(cumulative_net(2, 3), 1, 3)
    with pytest.raises(OffGridError):
        build_cubical([DyadicPoint.from_grid([1, 0], 2)], 1, 2)


def test_coarse_net_refined_onto_finer_grid():
    cx = build_cubical(cumulative_net(1, 2), 2, 2)
    # only the 9 coarse points survive, no level-2 edges have both ends present
    assert cx.cell_counts == [9, 0, 0]


def test_boundary_matrix_shape_and_weight():
    cx = build_cubical(cumulative_net(1, 3), 1, 3)
    d3 = boundary_matrix(cx, 3)
    assert d3.shape == (36, 8)
    assert (np.asarray(d3.sum(axis=0)).ravel() == 6).all()
    for k in (1, 2, 3):
        w = np.asarray(boundary_matrix(cx, k).sum(axis=0)).ravel()
        assert (w == 2 * k).all()


def test_boundary_matrix_k_range():
    cx = build_cubical(cumulative_net(1, 2), 1, 2)
    with pytest.raises(ValueError):
        boundary_matrix(cx, 0)
    with pytest.raises(ValueError):
        boundary_matrix(cx, 3)


def test_cells_are_sorted_and_faces_present():
    cx = build_cubical(boundary_net(2, 3), 2, 3)
    for k in range(4):
        assert (np.diff(cx.keys[k]) > 0).all()
    for k in range(1, 4):
        f = face_indices(cx, k)
        assert (f >= 0).all()
    cells = cx.cells(2)
    assert all(c.dim == 2 for c in cells)


COMPLEXES = [
    ("full m=1 D=2", lambda: cumulative_net(1, 2), 1, 2),
    ("full m=2 D=3", lambda: cumulative_net(2, 3), 2, 3),
    ("boundary m=2 D=3", lambda: boundary_net(2, 3), 2, 3),
    ("punctured m=2 D=3", lambda: punctured_net(2, 3), 2, 3),
    ("punctured switch 2 m=3 D=3", lambda: punctured_net(3, 3, None, 2), 3, 3),
    ("full m=1 D=4", lambda: cumulative_net(1, 4), 1, 4),
    ("punctured m=1 D=4", lambda: punctured_net(1, 4), 1, 4),
]


@pytest.mark.parametrize("name, make, m, D", COMPLEXES, ids=[c[0] for c in COMPLEXES])
def test_boundary_of_boundary_is_zero(name, make, m, D):
    cx = build_cubical(make(), m, D)
    for k in range(2, D + 1):
        prod = boundary_matrix(cx, k - 1).astype(np.int64) @ boundary_matrix(cx, k).astype(np.int64)
        prod.data %= 2
        prod.eliminate_zeros()
        assert prod.nnz == 0


@pytest.mark.parametrize("m, D", [(1, 2), (2, 2), (1, 3), (2, 3)])
def test_counts_match_naive_enumeration(m, D):
    for coords in (full_grid(m, D), full_minus_centre(m, D), punctured_net(m, D).coords):
        cx = build_cubical(coords, m, D)
        assert cx.cell_counts == oracles.cell_counts(index_set(coords), m, D)


def test_boundary_matrix_matches_naive():
    coords = full_minus_centre(1, 3)
    cx = build_cubical(coords, 1, 3)
    naive = oracles.boundary_matrices(index_set(coords), 1, 3)
    for k in (1, 2, 3):
        assert np.array_equal(boundary_matrix(cx, k).toarray(), naive[k - 1])


def test_euler_characteristic_function():
    cx = build_cubical(boundary_net(1, 3), 1, 3)
    assert euler_characteristic(cx) == 2
    assert cx.summary() == {"level": 1, "dimension": 3, "cell_counts": [26, 48, 24, 0], "euler": 2}


def test_grid_too_large_rejected():
    with pytest.raises(ValueError, match="too large"):
        build_cubical(np.zeros((1, 3), dtype=np.int64), 10, 3)
