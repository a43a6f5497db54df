"""Input checks shared by the estimators and the command line."""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .netbuilder import DyadicPoint, EpsNet, OffGridError, check_dimension, check_level

__all__ = ["MAX_CLOUD_LEVEL", "check_dimension", "check_level", "check_point_cloud", "infer_level"]

# floats such as 0.1 are dyadic only at level ~55; treat anything this fine as off-grid
MAX_CLOUD_LEVEL = 20


def _to_point(row) -> DyadicPoint:
    if isinstance(row, DyadicPoint):
        return row
    try:
        return DyadicPoint.from_fractions(Fraction(v) for v in row)
    except (TypeError, ValueError) as exc:
        raise OffGridError(f"cannot read {row!r} as a dyadic point: {exc}") from None


def infer_level(points) -> int:
    return max((p.level for p in points), default=0)


def check_point_cloud(cloud, level: int | None = None, dimension: int | None = None) -> tuple[np.ndarray, int, int]:
    """Validate one point cloud and return ``(grid_indices, level, dimension)``.

    ``cloud`` may be an :class:`EpsNet`, an iterable of :class:`DyadicPoint`,
    or an ``(n, D)`` array-like of dyadic numbers (floats are read exactly).
    The level defaults to the coarsest grid holding every point.
    """
    if isinstance(cloud, EpsNet):
        if dimension is not None and check_dimension(dimension) != cloud.dimension:
            raise ValueError(f"expected dimension {dimension}, got {cloud.dimension}")
        lvl = cloud.level if level is None else check_level(level)
        if lvl >= cloud.level:
            return cloud.coords << (lvl - cloud.level), lvl, cloud.dimension
        points = list(cloud.points)
    else:
        rows = cloud.tolist() if isinstance(cloud, np.ndarray) else list(cloud)
        points = [_to_point(r) for r in rows]
    if not points:
        if dimension is None:
            raise ValueError("cannot infer the dimension of an empty point cloud")
        D = check_dimension(dimension)
        return np.zeros((0, D), dtype=np.int64), check_level(level or 0), D
    dims = {p.dimension for p in points}
    if len(dims) != 1:
        raise ValueError("points have mixed dimensions")
    D = dims.pop()
    if dimension is not None and check_dimension(dimension) != D:
        raise ValueError(f"expected dimension {dimension}, got {D}")
    if level is None:
        lvl = infer_level(points)
        if lvl > MAX_CLOUD_LEVEL:
            raise OffGridError(f"points are not on any dyadic grid of level <= {MAX_CLOUD_LEVEL}")
    else:
        lvl = check_level(level)
    coords = np.asarray([p.at_level(lvl) for p in points], dtype=np.int64)
    return coords, lvl, D
