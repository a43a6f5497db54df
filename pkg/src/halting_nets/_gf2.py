"""Sparse column elimination over GF(2), compiled with numba.

Columns are sorted arrays of row indices; adding two columns is their
symmetric difference. A column is reduced against the column owning its
largest row index until that index is unowned or the column vanishes.
"""
import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _xor(a, b):
    out = np.empty(a.size + b.size, dtype=np.int64)
    i = j = k = 0
    while i < a.size and j < b.size:
        if a[i] < b[j]:
            out[k] = a[i]
            i += 1
            k += 1
        elif a[i] > b[j]:
            out[k] = b[j]
            j += 1
            k += 1
        else:
            i += 1
            j += 1
    while i < a.size:
        out[k] = a[i]
        i += 1
        k += 1
    while j < b.size:
        out[k] = b[j]
        j += 1
        k += 1
    return out[:k]


@njit(cache=True, nogil=True)
def reduce_columns(indptr, indices, n_rows, skip):
    """Return ``owner``: for each row, the reduced column whose pivot it is, else -1.

    ``skip[j]`` marks columns known to reduce to zero; they are not touched.
    The rank is the number of owned rows.
    """
    owner = np.full(n_rows, -1, dtype=np.int64)
    reduced = [np.empty(0, dtype=np.int64)]
    reduced.pop()
    for j in range(indptr.size - 1):
        if skip[j]:
            continue
        col = indices[indptr[j] : indptr[j + 1]].copy()
        while col.size > 0:
            o = owner[col[-1]]
            if o < 0:
                break
            col = _xor(col, reduced[o])
        if col.size > 0:
            owner[col[-1]] = len(reduced)
            reduced.append(col)
    return owner
