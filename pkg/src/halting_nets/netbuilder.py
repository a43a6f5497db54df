"""Exact dyadic epsilon-nets of the unit cube.

Points live on dyadic grids: at level ``m`` a coordinate is ``k / 2**m`` with
``0 <= k <= 2**m``. Internally a net is an integer array of grid indices at
its level; :class:`DyadicPoint` is the exact, hashable view of one point.
Squared distances are :class:`fractions.Fraction` values and no floating
point is involved in deciding membership.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple

import numpy as np
from scipy.spatial import cKDTree

MIN_DIM, MAX_DIM = 2, 4
FALLBACK_D_SQUARED = Fraction(1, 16)


class OffGridError(ValueError):
    """A point is not representable on the requested dyadic grid."""


def check_dimension(D: int) -> int:
    if not (isinstance(D, (int, np.integer)) and MIN_DIM <= D <= MAX_DIM):
        raise ValueError(f"dimension must be an integer in [{MIN_DIM}, {MAX_DIM}], got {D!r}")
    return int(D)


def check_level(m: int, name: str = "level") -> int:
    if not (isinstance(m, (int, np.integer)) and m >= 0):
        raise ValueError(f"{name} must be a natural number, got {m!r}")
    return int(m)


# ------------------------------------------------------------------ points

def _canonical(num: int, lvl: int) -> tuple[int, int]:
    while lvl > 0 and num % 2 == 0:
        num //= 2
        lvl -= 1
    return num, lvl


@dataclass(frozen=True)
class DyadicPoint:
    """Point of ``[0, 1]^D`` with coordinates ``numerator / 2**level``.

    Coordinates are stored in canonical form (odd numerator or level 0), so
    dataclass equality and hashing compare exact values.
    """

    coords: tuple[tuple[int, int], ...]

    def __post_init__(self):
        canon = []
        for num, lvl in self.coords:
            num, lvl = int(num), int(lvl)
            if lvl < 0 or not 0 <= num <= 2**lvl:
                raise ValueError(f"coordinate {num}/2^{lvl} is outside [0, 1]")
            canon.append(_canonical(num, lvl))
        if not MIN_DIM <= len(canon) <= MAX_DIM:
            raise ValueError(f"dimension must be in [{MIN_DIM}, {MAX_DIM}], got {len(canon)}")
        object.__setattr__(self, "coords", tuple(canon))

    @classmethod
    def from_grid(cls, index: Iterable[int], level: int) -> "DyadicPoint":
        return cls(tuple((int(k), level) for k in index))

    @classmethod
    def from_fractions(cls, values: Iterable) -> "DyadicPoint":
        coords = []
        for v in values:
            f = Fraction(v)
            den = f.denominator
            if den & (den - 1):
                raise OffGridError(f"{v} is not a dyadic rational")
            coords.append((f.numerator, den.bit_length() - 1))
        return cls(tuple(coords))

    @classmethod
    def center(cls, D: int) -> "DyadicPoint":
        return cls(((1, 1),) * check_dimension(D))

    @property
    def dimension(self) -> int:
        return len(self.coords)

    @property
    def level(self) -> int:
        """Coarsest grid level containing the point."""
        return max(lvl for _, lvl in self.coords)

    def fractions(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(num, 2**lvl) for num, lvl in self.coords)

    def at_level(self, m: int) -> tuple[int, ...]:
        if self.level > m:
            raise OffGridError(f"{self} is not on the level-{m} grid")
        return tuple(num << (m - lvl) for num, lvl in self.coords)

    def sort_key(self):
        return self.fractions()

    def __str__(self):
        return " ".join(f"{num}/2^{lvl}" for num, lvl in self.coords)


def squared_distance(a: DyadicPoint, b: DyadicPoint) -> Fraction:
    if a.dimension != b.dimension:
        raise ValueError("points have different dimensions")
    return sum(((x - y) ** 2 for x, y in zip(a.fractions(), b.fractions())), Fraction(0))


def points_to_grid(points: Iterable[DyadicPoint], m: int, D: int | None = None) -> np.ndarray:
    """Grid indices of ``points`` at level ``m`` as an ``(n, D)`` int64 array."""
    rows = []
    for p in points:
        if D is not None and p.dimension != D:
            raise ValueError(f"point {p} is not {D}-dimensional")
        rows.append(p.at_level(m))
    if not rows:
        return np.zeros((0, D or 0), dtype=np.int64)
    return np.asarray(rows, dtype=np.int64)


def grid_to_points(coords: np.ndarray, m: int) -> frozenset[DyadicPoint]:
    return frozenset(DyadicPoint.from_grid(row, m) for row in coords.tolist())


# ----------------------------------------------------------- integer kernels

def full_grid(m: int, D: int) -> np.ndarray:
    """All level-``m`` grid indices in lexicographic order."""
    side = np.arange(2**m + 1, dtype=np.int64)
    mesh = np.meshgrid(*([side] * D), indexing="ij")
    return np.stack([g.ravel() for g in mesh], axis=1)


def layer_grid(m: int, D: int) -> np.ndarray:
    g = full_grid(m, D)
    if m == 0:
        return g
    # points of the coarser grid have every index even
    return g[(g % 2).any(axis=1)]


def sorted_unique(coords: np.ndarray) -> np.ndarray:
    """Unique rows of a non-negative integer array in lexicographic order."""
    if len(coords) == 0:
        return coords
    base = int(coords.max()) + 1
    keys = np.zeros(len(coords), dtype=np.int64)
    for col in coords.T:
        keys = keys * base + col
    keys = np.unique(keys)
    out = np.empty((len(keys), coords.shape[1]), dtype=np.int64)
    for j in range(coords.shape[1] - 1, -1, -1):
        keys, out[:, j] = np.divmod(keys, base)
    return out


def _center_offsets(coords: np.ndarray, m: int, center: DyadicPoint) -> tuple[np.ndarray, int]:
    """Integer squared distances to ``center`` and their common denominator."""
    L = max(m, center.level)
    c = np.asarray(center.at_level(L), dtype=np.int64)
    diff = (coords << (L - m)) - c
    return (diff * diff).sum(axis=1), 4**L


def _inside_open_ball(coords: np.ndarray, m: int, center: DyadicPoint, d_sq: Fraction) -> np.ndarray:
    num, den = _center_offsets(coords, m, center)
    # num / den < d_sq.numerator / d_sq.denominator, cross-multiplied
    return num * d_sq.denominator < d_sq.numerator * den


def punctured_layer_grid(m: int, d_sq: Fraction, center: DyadicPoint, D: int) -> np.ndarray:
    layer = layer_grid(m, D)
    return layer[~_inside_open_ball(layer, m, center, d_sq)]


def puncture_radius_sq_grid(coords: np.ndarray, m: int, center: DyadicPoint) -> Fraction:
    if len(coords) == 0:
        return FALLBACK_D_SQUARED
    num, den = _center_offsets(coords, m, center)
    num = num[num > 0]
    if len(num) == 0:
        return FALLBACK_D_SQUARED
    return Fraction(int(num.min()), 4 * den)


# ------------------------------------------------------------------ nets

class Method(str, enum.Enum):
    ONE = "One"
    TWO = "Two"


@dataclass(frozen=True)
class Cube:
    kind = "cube"


@dataclass(frozen=True)
class Boundary:
    kind = "boundary"


@dataclass(frozen=True)
class Punctured:
    """The cube minus the open ball of squared radius ``d_squared`` about ``center``."""

    center: DyadicPoint
    d_squared: Fraction
    kind = "punctured"

    def __post_init__(self):
        if self.d_squared <= 0:
            raise ValueError("puncture radius must be positive")


SpaceTag = Cube | Boundary | Punctured


class EpsNet:
    """Finite net of a subspace of ``[0, 1]^D`` at grid level ``level``.

    ``coords`` holds the level-``level`` grid indices, sorted and unique.
    ``epsilon_bound`` is a dyadic rational certified by
    :func:`covering_radius_sq`. For punctured nets the centre itself is the
    only point allowed inside the removed ball; it is kept when an earlier
    full layer already contained it.
    """

    def __init__(self, dimension: int, level: int, coords, epsilon_bound: Fraction, space_tag: SpaceTag):
        self.dimension = check_dimension(dimension)
        self.level = check_level(level)
        coords = np.asarray(coords, dtype=np.int64).reshape(-1, self.dimension)
        if len(coords) and (coords.min() < 0 or coords.max() > 2**self.level):
            raise ValueError("net points must lie in the unit cube")
        uniq = sorted_unique(coords)
        if len(uniq) != len(coords):
            raise ValueError("net points must be pairwise distinct")
        uniq.setflags(write=False)
        self.coords = uniq
        self.epsilon_bound = Fraction(epsilon_bound)
        self.space_tag = space_tag
        if isinstance(space_tag, Punctured):
            inside = _inside_open_ball(uniq, self.level, space_tag.center, space_tag.d_squared)
            if inside.any() and not (inside.sum() == 1 and self.contains(space_tag.center)):
                raise ValueError("punctured net has points inside the removed ball")

    def __len__(self):
        return len(self.coords)

    def __eq__(self, other):
        if not isinstance(other, EpsNet):
            return NotImplemented
        return (
            self.dimension == other.dimension
            and self.level == other.level
            and self.epsilon_bound == other.epsilon_bound
            and self.space_tag == other.space_tag
            and np.array_equal(self.coords, other.coords)
        )

    def __repr__(self):
        return (
            f"EpsNet(dimension={self.dimension}, level={self.level}, points={len(self)}, "
            f"epsilon_bound={self.epsilon_bound}, space_tag={self.space_tag})"
        )

    @cached_property
    def points(self) -> frozenset[DyadicPoint]:
        return grid_to_points(self.coords, self.level)

    def contains(self, p: DyadicPoint) -> bool:
        if p.level > self.level:
            return False
        row = np.asarray(p.at_level(self.level), dtype=np.int64)
        return bool((self.coords == row).all(axis=1).any())

    @property
    def keeps_center(self) -> bool:
        tag = self.space_tag
        return isinstance(tag, Punctured) and self.contains(tag.center)


class StreamLayer(NamedTuple):
    m: int
    net: EpsNet
    method: Method


@dataclass(frozen=True)
class NetStream:
    """Refinement sequence of accumulated nets, one per layer index."""

    layers: tuple[StreamLayer, ...]
    switch_level: int | None = None

    def __post_init__(self):
        prev = None
        for i, layer in enumerate(self.layers):
            if layer.m != i:
                raise ValueError("layer indices must run 0, 1, 2, ...")
            expected = Method.ONE if self.switch_level is None or i < self.switch_level else Method.TWO
            if layer.method is not expected:
                raise ValueError(f"layer {i} built with Method {layer.method.value}, expected {expected.value}")
            if prev is not None and not layer.net.epsilon_bound < prev:
                raise ValueError("epsilon bounds must strictly decrease along the stream")
            prev = layer.net.epsilon_bound

    @property
    def accumulated(self) -> EpsNet:
        return self.layers[-1].net

    def __len__(self):
        return len(self.layers)


# ------------------------------------------------------------- covering

def _region_mask(x: np.ndarray, L: int, net: EpsNet) -> np.ndarray:
    tag = net.space_tag
    if isinstance(tag, Cube):
        return np.ones(len(x), dtype=bool)
    if isinstance(tag, Boundary):
        return ((x == 0) | (x == 2**L)).any(axis=1)
    outside = ~_inside_open_ball(x, L, tag.center, tag.d_squared)
    if net.keeps_center:
        c = np.asarray(tag.center.at_level(L), dtype=np.int64)
        outside |= (x == c).all(axis=1)
    return outside


def _box_meets_region(centers: np.ndarray, h: int, L: int, net: EpsNet) -> np.ndarray:
    """Conservative test whether the box ``centers +- h`` can contain region points."""
    tag = net.space_tag
    if isinstance(tag, Cube):
        return np.ones(len(centers), dtype=bool)
    if isinstance(tag, Boundary):
        return ((centers <= h) | (centers >= 2**L - h)).any(axis=1)
    c = np.asarray(tag.center.at_level(L), dtype=np.int64)
    far = np.abs(centers - c) + h
    return (far * far).sum(axis=1) * tag.d_squared.denominator >= tag.d_squared.numerator * 4**L


def covering_radius_sq(net: EpsNet, reference_level: int) -> Fraction:
    """Largest squared distance from a reference-grid point of the net's space to the net.

    The reference grid has spacing ``2**-reference_level`` and is restricted
    to the region named by the net's space tag. Every reference point ``x``
    either has one of its nearest level-``m`` grid points in the net, in
    which case the distance is its offset inside that point's Voronoi box, or
    all of them are missing, in which case the nearest net point is looked up
    explicitly. The first case is maximised offset by offset, the second only
    visits boxes of missing grid points.
    """
    m, D = net.level, net.dimension
    L = check_level(reference_level, "reference_level")
    if L < m + 2:
        raise ValueError(f"reference level too coarse: need >= {m + 2}, got {L}")
    if len(net) == 0:
        raise ValueError("empty net")
    s = 2 ** (L - m)
    h = s // 2
    top = 2**L
    present = np.zeros((2**m + 1,) * D, dtype=bool)
    present[tuple(net.coords.T)] = True
    scaled = net.coords * s

    offsets = np.array(list(itertools.product(range(-h, h + 1), repeat=D)), dtype=np.int64)
    norms = (offsets * offsets).sum(axis=1)
    order = np.argsort(-norms, kind="stable")

    good = -1
    for i in order:
        if norms[i] <= good:
            break
        x = scaled + offsets[i]
        ok = ((x >= 0) & (x <= top)).all(axis=1)
        if ok.any() and _region_mask(x[ok], L, net).any():
            good = int(norms[i])

    bad = -1
    missing = np.argwhere(~present)
    missing = missing[_box_meets_region(missing * s, h, L, net)]
    chunk = max(1, 2**20 // len(offsets))
    for start in range(0, len(missing), chunk):
        x = (missing[start : start + chunk] * s)[:, None, :] + offsets[None, :, :]
        x = x.reshape(-1, D)
        x = x[((x >= 0) & (x <= top)).all(axis=1)]
        x = x[_region_mask(x, L, net)]
        x = sorted_unique(x)
        if len(x):
            q, r = np.divmod(x, s)
            any_present = np.zeros(len(x), dtype=bool)
            # nearest grid indices per axis: floor, ceil, or both on a tie
            for corner in itertools.product((0, 1), repeat=D):
                corner = np.asarray(corner, dtype=np.int64)
                usable = ((corner == 0) & (r <= h)) | ((corner == 1) & (r >= h) & (r > 0))
                usable = usable.all(axis=1)
                idx = q + corner
                inb = (idx <= 2**m).all(axis=1) & usable
                hit = np.zeros(len(x), dtype=bool)
                hit[inb] = present[tuple(idx[inb].T)]
                any_present |= hit
            lonely = x[~any_present]
            if len(lonely):
                _, nearest = cKDTree(scaled).query(lonely)
                diff = lonely - scaled[nearest]
                bad = max(bad, int((diff * diff).sum(axis=1).max()))

    worst = max(good, bad)
    if worst < 0:
        raise ValueError("the net's space has no reference points")
    return Fraction(worst, 4**L)


def certify_epsilon(radius_sq: Fraction, reference_level: int) -> Fraction:
    """Smallest multiple of ``2**-reference_level`` strictly above ``sqrt(radius_sq)``."""
    scale = 4**reference_level
    root = math.isqrt(radius_sq.numerator * scale // radius_sq.denominator)
    return Fraction(root + 1, 2**reference_level)


def certified_net(D: int, m: int, coords: np.ndarray, tag: SpaceTag) -> EpsNet:
    draft = EpsNet(D, m, coords, Fraction(1), tag)
    bound = certify_epsilon(covering_radius_sq(draft, m + 2), m + 2)
    return EpsNet(D, m, draft.coords, bound, tag)


# ------------------------------------------------------------ public ops

def grid_layer(m: int, D: int) -> frozenset[DyadicPoint]:
    """Level-``m`` grid minus the level ``m-1`` grid; the corners when ``m == 0``."""
    m, D = check_level(m), check_dimension(D)
    return grid_to_points(layer_grid(m, D), m)


def cumulative_net(m: int, D: int) -> EpsNet:
    m, D = check_level(m), check_dimension(D)
    return certified_net(D, m, full_grid(m, D), Cube())


def puncture_radius_sq(points: Iterable[DyadicPoint], C: DyadicPoint) -> Fraction:
    """A quarter of the smallest squared distance from ``C`` to the other points.

    Falls back to ``1/16`` (radius ``1/4``) when no point other than ``C`` is given.
    """
    pts = [p for p in points if p != C]
    if not pts:
        return FALLBACK_D_SQUARED
    return min(squared_distance(p, C) for p in pts) / 4


def punctured_layer(m: int, d_sq: Fraction, C: DyadicPoint, D: int) -> frozenset[DyadicPoint]:
    """``grid_layer(m, D)`` without the points strictly closer than ``sqrt(d_sq)`` to ``C``."""
    m, D = check_level(m), check_dimension(D)
    d_sq = Fraction(d_sq)
    if d_sq <= 0:
        raise ValueError("d_sq must be positive")
    if C.dimension != D:
        raise ValueError("centre has the wrong dimension")
    return grid_to_points(punctured_layer_grid(m, d_sq, C, D), m)


def boundary_grid(m: int, D: int) -> np.ndarray:
    g = full_grid(m, D)
    return g[((g == 0) | (g == 2**m)).any(axis=1)]


def boundary_net(m: int, D: int) -> EpsNet:
    m, D = check_level(m), check_dimension(D)
    return certified_net(D, m, boundary_grid(m, D), Boundary())


def punctured_net(m: int, D: int, d_sq: Fraction | None = None, switch_level: int = 0) -> EpsNet:
    """Accumulated net: full layers below ``switch_level``, punctured layers from there on.

    With ``d_sq=None`` the radius follows the halving rule applied to the
    layers built before the switch.
    """
    m, D = check_level(m), check_dimension(D)
    C = DyadicPoint.center(D)
    before = [layer_grid(j, D) << (m - j) for j in range(min(switch_level, m + 1))]
    before = np.concatenate(before) if before else np.zeros((0, D), dtype=np.int64)
    if d_sq is None:
        d_sq = puncture_radius_sq_grid(before, m, C)
    d_sq = Fraction(d_sq)
    after = [punctured_layer_grid(j, d_sq, C, D) << (m - j) for j in range(switch_level, m + 1)]
    coords = np.concatenate([before] + after) if after else before
    return certified_net(D, m, coords, Punctured(C, d_sq))
