"""Index bookkeeping for densely stored symmetric tensors.

A symmetric tensor of degree ``p`` over ``R^n`` is stored as a flat array
with one entry per non-decreasing multi-index ``I = (i_1 <= ... <= i_p)``,
``i_k in {0, ..., n-1}``, ordered lexicographically.  The stored value is
the common entry of the fully symmetric dense array, so looking up an
arbitrary index tuple means looking up its sorted permutation.

All tables are cached per shape; they are tiny at the sizes this package
targets (n <= 8, p <= 6 or so).
"""

from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from math import comb, factorial

import numpy as np

__all__ = [
    "sym_size",
    "multi_indices",
    "index_position",
    "multiplicities",
    "sorted_insert",
]


def sym_size(n, p):
    """Number of independent components of a symmetric p-tensor over R^n."""
    return comb(n + p - 1, p)


@lru_cache(maxsize=None)
def multi_indices(n, p):
    """All non-decreasing multi-indices for shape (n, p), lexicographic."""
    return tuple(combinations_with_replacement(range(n), p))


@lru_cache(maxsize=None)
def index_position(n, p):
    """Dict mapping each sorted multi-index to its storage position."""
    return {I: k for k, I in enumerate(multi_indices(n, p))}


@lru_cache(maxsize=None)
def multiplicities(n, p):
    """Orbit sizes p!/prod(repeat counts!) per stored index, as floats."""
    out = np.empty(sym_size(n, p))
    for k, I in enumerate(multi_indices(n, p)):
        m = factorial(p)
        for i in set(I):
            m //= factorial(I.count(i))
        out[k] = float(m)
    out.flags.writeable = False
    return out


def sorted_insert(I, j):
    """Sorted tuple obtained by inserting index j into sorted tuple I."""
    out = []
    placed = False
    for i in I:
        if not placed and j <= i:
            out.append(j)
            placed = True
        out.append(i)
    if not placed:
        out.append(j)
    return tuple(out)


@lru_cache(maxsize=None)
def product_table(n, p, q):
    """Shuffle table for the symmetric product of degrees p and q.

    Entry ``k`` of the returned tuple lists ``(pos_a, pos_b, count)``
    triples such that the k-th component of the product is
    ``sum(count * A[pos_a] * B[pos_b])``.  The count records how many of
    the C(p+q, p) position shuffles of the output index produce the same
    (sorted A-part, sorted B-part) pair.
    """
    posa = index_position(n, p)
    posb = index_position(n, q)
    table = []
    for I in multi_indices(n, p + q):
        counts = {}
        for sel in combinations(range(p + q), p):
            rest = [k for k in range(p + q) if k not in sel]
            a = tuple(I[k] for k in sel)
            b = tuple(I[k] for k in rest)
            key = (posa[a], posb[b])
            counts[key] = counts.get(key, 0) + 1
        table.append(tuple((ka, kb, float(c)) for (ka, kb), c in counts.items()))
    return tuple(table)


@lru_cache(maxsize=None)
def contract_table(n, p):
    """Positions K[sorted(J + (j,))] for each output index J and slot j."""
    pos = index_position(n, p)
    table = []
    for J in multi_indices(n, p - 1):
        table.append(tuple(pos[sorted_insert(J, j)] for j in range(n)))
    return tuple(table)


@lru_cache(maxsize=None)
def trace_table(n, p):
    """Positions K[sorted(J + (j, j))] for each output index J and j."""
    pos = index_position(n, p)
    table = []
    for J in multi_indices(n, p - 2):
        table.append(tuple(pos[sorted_insert(sorted_insert(J, j), j)] for j in range(n)))
    return tuple(table)


@lru_cache(maxsize=None)
def replace_table(n, p):
    """Positions of K with one occurrence of an index replaced.

    For each stored index I (position k), slot m in range(p) and new index
    d in range(n), entry [k][m][d] is the storage position of the sorted
    tuple obtained from I by replacing I[m] with d.  Used for connection
    correction terms.
    """
    pos = index_position(n, p)
    table = []
    for I in multi_indices(n, p):
        rows = []
        for m in range(p):
            rest = I[:m] + I[m + 1:]
            rows.append(tuple(pos[sorted_insert(rest, d)] for d in range(n)))
        table.append(tuple(rows))
    return tuple(table)
