"""Betti numbers over GF(2) and the finite-resolution triviality verdict.

The verdict stands in for an oracle deciding whether the (D-1)-th homotopy
group of a space is trivial. It reads the (D-1)-th Betti number of the
cubical complex spanned by a net. For the spaces built here (solid cube,
cube with a central cavity, boundary sphere; simply connected when D >= 3)
the Hurewicz theorem makes the two questions agree. That identification is a
modelling choice of this package and nothing more: no finite procedure
decides the question for arbitrary spaces.
"""
from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sps

from ._gf2 import reduce_columns
from .cubical import CubicalComplex, boundary_matrix, build_cubical, euler_characteristic
from .netbuilder import EpsNet

TRIVIAL = "Trivial"
NONTRIVIAL = "Nontrivial"
WORKERS_ENV = "HALTING_NETS_WORKERS"


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return min(4, os.cpu_count() or 1)


@dataclass(frozen=True)
class BettiVector:
    betti: tuple[int, ...]
    cell_counts: tuple[int, ...]
    ranks: tuple[int, ...]

    def __post_init__(self):
        D = len(self.cell_counts) - 1
        r = (0,) + tuple(self.ranks) + (0,)
        if len(self.ranks) != D or len(self.betti) != D + 1:
            raise ValueError("inconsistent lengths in BettiVector")
        for k in range(D + 1):
            if self.betti[k] != self.cell_counts[k] - r[k] - r[k + 1]:
                raise ValueError(f"beta_{k} disagrees with the rank formula")

    @property
    def euler(self) -> int:
        return sum((-1) ** k * b for k, b in enumerate(self.betti))


@dataclass(frozen=True)
class Verdict:
    verdict: str
    evidence: BettiVector
    level: int

    def __post_init__(self):
        D = len(self.evidence.betti) - 1
        expected = NONTRIVIAL if self.evidence.betti[D - 1] > 0 else TRIVIAL
        if self.verdict != expected:
            raise ValueError(f"verdict {self.verdict} contradicts beta_{D - 1}")

    @property
    def nontrivial(self) -> bool:
        return self.verdict == NONTRIVIAL

    @property
    def answer(self) -> str:
        """The oracle's reply: "Yes" for a nontrivial group, "No" for a trivial one."""
        return "Yes" if self.nontrivial else "No"

    def to_dict(self, elapsed_ms: float | None = None) -> dict:
        out = {
            "verdict": self.verdict,
            "level": self.level,
            "betti": list(self.evidence.betti),
            "cell_counts": list(self.evidence.cell_counts),
            "euler": self.evidence.euler,
        }
        if elapsed_ms is not None:
            out["elapsed_ms"] = round(elapsed_ms, 3)
        return out


def _as_gf2_csc(matrix) -> sps.csc_matrix:
    if sps.issparse(matrix):
        m = sps.csc_matrix(matrix, dtype=np.int64, copy=True)
    else:
        m = sps.csc_matrix(np.asarray(matrix, dtype=np.int64))
    m.data %= 2
    m.eliminate_zeros()
    m.sort_indices()
    return m


def _owners(m: sps.csc_matrix, skip: np.ndarray | None = None) -> np.ndarray:
    if skip is None:
        skip = np.zeros(m.shape[1], dtype=np.bool_)
    return reduce_columns(
        m.indptr.astype(np.int64), m.indices.astype(np.int64), m.shape[0], skip.astype(np.bool_)
    )


def rank_gf2(matrix) -> int:
    """Rank over the two-element field of a sparse or dense 0/1 matrix."""
    m = _as_gf2_csc(matrix)
    if m.shape[0] == 0 or m.shape[1] == 0:
        return 0
    return int((_owners(m) >= 0).sum())


def boundary_ranks(cx: CubicalComplex) -> list[int]:
    """``[rank d_1, ..., rank d_D]``.

    Matrices are reduced from the top dimension down. A k-cell that is the
    pivot of a reduced (k+1)-column bounds a cycle, so its own column in
    ``d_k`` reduces to zero and is skipped.
    """
    D = cx.dimension
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        mats = list(pool.map(lambda k: boundary_matrix(cx, k), range(1, D + 1)))
    ranks = [0] * D
    skip = None
    for k in range(D, 0, -1):
        m = mats[k - 1]
        if m.shape[0] == 0 or m.shape[1] == 0:
            ranks[k - 1] = 0
            skip = np.zeros(m.shape[0], dtype=np.bool_)
            continue
        owner = _owners(m, skip)
        ranks[k - 1] = int((owner >= 0).sum())
        skip = owner >= 0
    return ranks


def betti(cx: CubicalComplex) -> BettiVector:
    counts = cx.cell_counts
    D = cx.dimension
    ranks = boundary_ranks(cx)
    r = [0] + ranks + [0]
    b = tuple(counts[k] - r[k] - r[k + 1] for k in range(D + 1))
    vec = BettiVector(b, tuple(counts), tuple(ranks))
    if vec.euler != euler_characteristic(cx):
        raise AssertionError("Euler characteristic check failed")
    return vec


def verdict_from_betti(vec: BettiVector, level: int) -> Verdict:
    D = len(vec.betti) - 1
    return Verdict(NONTRIVIAL if vec.betti[D - 1] > 0 else TRIVIAL, vec, level)


def q_hat(net: EpsNet, m: int | None = None, timings: dict | None = None) -> Verdict:
    """Finite-resolution verdict for the space presented by ``net``.

    Builds the cubical complex of ``net`` at level ``m`` (the net's own level
    by default) and answers Nontrivial iff the (D-1)-th Betti number is
    positive. ``timings``, when given, receives ``elapsed_ms``.
    """
    start = time.perf_counter()
    level = net.level if m is None else m
    cx = build_cubical(net, level, net.dimension)
    verdict = verdict_from_betti(betti(cx), level)
    if timings is not None:
        timings["elapsed_ms"] = (time.perf_counter() - start) * 1e3
    return verdict
