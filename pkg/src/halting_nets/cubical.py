"""Cubical complexes spanned by a point set on a dyadic grid.

A k-cell is an axis-aligned cube with anchor (its minimal corner) and extent
(the k axes it spans). A cell belongs to the complex iff all ``2**k`` of its
corners are among the given points, so the complex is closed under faces by
construction. Cells of each dimension are ordered by ``(anchor, extent)``
with anchors compared lexicographically and extents by axis bitmask.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sps

from .netbuilder import DyadicPoint, EpsNet, OffGridError, check_dimension, check_level, points_to_grid

MAX_GRID_CELLS = 2**27


@dataclass(frozen=True)
class CubicalCell:
    anchor: DyadicPoint
    extent: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.extent)


def _mask_axes(mask: int, D: int) -> tuple[int, ...]:
    return tuple(i for i in range(D) if mask >> i & 1)


class CubicalComplex:
    """Face-closed set of grid cells at one level.

    ``anchors[k]`` is an ``(n_k, D)`` array of grid indices, ``masks[k]`` the
    extent bitmasks and ``keys[k]`` the sorted integer keys used for face
    lookups.
    """

    def __init__(self, level: int, dimension: int, anchors, masks):
        self.level = level
        self.dimension = dimension
        self.side = 2**level + 1
        self.anchors = anchors
        self.masks = masks
        self.keys = [self._key(a, mk) for a, mk in zip(anchors, masks)]

    def _key(self, anchors: np.ndarray, masks: np.ndarray) -> np.ndarray:
        lin = np.zeros(len(anchors), dtype=np.int64)
        for col in anchors.T:
            lin = lin * self.side + col
        return lin * (1 << self.dimension) + masks

    @property
    def cell_counts(self) -> list[int]:
        return [len(a) for a in self.anchors]

    def cells(self, k: int) -> list[CubicalCell]:
        D = self.dimension
        return [
            CubicalCell(DyadicPoint.from_grid(a, self.level), _mask_axes(int(mk), D))
            for a, mk in zip(self.anchors[k].tolist(), self.masks[k].tolist())
        ]

    def index_of(self, k: int, anchors: np.ndarray, masks: np.ndarray) -> np.ndarray:
        """Positions of the given cells in the dimension-``k`` ordering; -1 when absent."""
        keys = self._key(np.asarray(anchors, dtype=np.int64).reshape(-1, self.dimension), np.asarray(masks))
        table = self.keys[k]
        if len(table) == 0:
            return np.full(len(keys), -1, dtype=np.int64)
        pos = np.minimum(np.searchsorted(table, keys), len(table) - 1)
        return np.where(table[pos] == keys, pos, -1)

    def euler(self) -> int:
        return euler_characteristic(self)

    def summary(self) -> dict:
        return {
            "level": self.level,
            "dimension": self.dimension,
            "cell_counts": self.cell_counts,
            "euler": self.euler(),
        }


def build_cubical(points, m: int, D: int) -> CubicalComplex:
    """Cubical complex of all grid cells at level ``m`` whose corners are all in ``points``.

    ``points`` may be an :class:`EpsNet`, an iterable of :class:`DyadicPoint`
    or an integer array of level-``m`` grid indices.
    """
    m, D = check_level(m), check_dimension(D)
    if isinstance(points, EpsNet):
        if points.dimension != D:
            raise ValueError("net dimension does not match D")
        if points.level > m:
            coarse = points.coords % (1 << (points.level - m))
            if coarse.any():
                raise OffGridError(f"net has points off the level-{m} grid")
            coords = points.coords >> (points.level - m)
        else:
            coords = points.coords << (m - points.level)
    elif isinstance(points, np.ndarray):
        coords = points.astype(np.int64).reshape(-1, D)
        if len(coords) and (coords.min() < 0 or coords.max() > 2**m):
            raise OffGridError(f"grid index outside the level-{m} grid")
    else:
        coords = points_to_grid(points, m, D)

    side = 2**m + 1
    if side**D > MAX_GRID_CELLS:
        raise ValueError(f"level {m} grid in dimension {D} is too large ({side}^{D} vertices)")
    occupied = np.zeros((side,) * D, dtype=bool)
    if len(coords):
        occupied[tuple(coords.T)] = True

    anchors: list[list[np.ndarray]] = [[] for _ in range(D + 1)]
    masks: list[list[np.ndarray]] = [[] for _ in range(D + 1)]
    for k in range(D + 1):
        for extent in itertools.combinations(range(D), k):
            present = occupied
            for axis in extent:
                lo = [slice(None)] * D
                hi = [slice(None)] * D
                lo[axis] = slice(None, -1)
                hi[axis] = slice(1, None)
                present = present[tuple(lo)] & present[tuple(hi)]
            a = np.argwhere(present)
            anchors[k].append(a.astype(np.int64))
            masks[k].append(np.full(len(a), sum(1 << i for i in extent), dtype=np.int64))

    cx = CubicalComplex(
        m,
        D,
        [np.concatenate(a) if a else np.zeros((0, D), dtype=np.int64) for a in anchors],
        [np.concatenate(mk) if mk else np.zeros(0, dtype=np.int64) for mk in masks],
    )
    for k in range(D + 1):
        order = np.argsort(cx.keys[k], kind="stable")
        cx.anchors[k] = cx.anchors[k][order]
        cx.masks[k] = cx.masks[k][order]
        cx.keys[k] = cx.keys[k][order]
    return cx


def face_indices(cx: CubicalComplex, k: int) -> np.ndarray:
    """``(n_k, 2k)`` array: row j lists the (k-1)-cells bounding k-cell j, sorted."""
    D = cx.dimension
    anchors, masks = cx.anchors[k], cx.masks[k]
    n = len(anchors)
    faces = np.empty((n, 2 * k), dtype=np.int64)
    if n == 0:
        return faces
    col = 0
    # the axes of each extent in increasing order: the i-th set bit
    axes = np.zeros((n, k), dtype=np.int64)
    counter = np.zeros(n, dtype=np.int64)
    for axis in range(D):
        has = (masks >> axis) & 1 == 1
        axes[has, counter[has]] = axis
        counter += has
    for i in range(k):
        axis = axes[:, i]
        face_mask = masks & ~(1 << axis)
        shifted = anchors.copy()
        shifted[np.arange(n), axis] += 1
        for a in (anchors, shifted):
            idx = cx.index_of(k - 1, a, face_mask)
            if (idx < 0).any():
                raise AssertionError("complex is not closed under faces")
            faces[:, col] = idx
            col += 1
    faces.sort(axis=1)
    return faces


def boundary_matrix(cx: CubicalComplex, k: int) -> sps.csc_matrix:
    """Boundary operator from k-cells to (k-1)-cells over GF(2)."""
    if not 1 <= k <= cx.dimension:
        raise ValueError(f"k must be in 1..{cx.dimension}")
    faces = face_indices(cx, k)
    n_cols = len(faces)
    indptr = np.arange(0, 2 * k * n_cols + 1, 2 * k, dtype=np.int64)
    data = np.ones(2 * k * n_cols, dtype=np.uint8)
    return sps.csc_matrix((data, faces.ravel(), indptr), shape=(len(cx.anchors[k - 1]), n_cols))


def euler_characteristic(cx: CubicalComplex) -> int:
    return sum((-1) ** k * n for k, n in enumerate(cx.cell_counts))
