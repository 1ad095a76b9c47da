"""Pure-Python implementations of the hot kernels.

Used when the compiled ``_kernels`` extension is unavailable or when
``TOPODIST_PURE_PYTHON=1`` is set.  Both backends must return identical
arrays for identical inputs.
"""

import numpy as np


def kruskal_merges(ei, ej, n, skip=None):
    """Positions of the edges that merge two components, in filtration order.

    ``ei``/``ej`` list the edge endpoints already sorted by filtration
    value.  Edges flagged in ``skip`` are ignored.  Scanning stops as soon
    as a single component remains.
    """
    parent = list(range(n))
    size = [1] * n
    merges = []
    remaining = n - 1
    skip_list = None if skip is None else np.asarray(skip, dtype=np.uint8).tolist()
    for pos, (a, b) in enumerate(zip(np.asarray(ei).tolist(), np.asarray(ej).tolist())):
        if remaining == 0:
            break
        if skip_list is not None and skip_list[pos]:
            continue
        # path halving
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        while parent[b] != b:
            parent[b] = parent[parent[b]]
            b = parent[b]
        if a == b:
            continue
        if size[a] < size[b]:
            a, b = b, a
        parent[b] = a
        size[a] += size[b]
        merges.append(pos)
        remaining -= 1
    return np.asarray(merges, dtype=np.int64)


def reduce_triangles(faces):
    """Column-reduce the triangle boundary matrix over GF(2).

    ``faces`` is a ``(T, 3)`` array giving, for each triangle in filtration
    order, the filtration indices of its three edges.  Returns the pivot
    (lowest nonzero row) of every reduced column, ``-1`` for columns that
    reduce to zero.  Columns are held as Python ints used as bitsets.
    """
    faces = np.asarray(faces, dtype=np.int64)
    lows = np.full(faces.shape[0], -1, dtype=np.int64)
    reduced = {}
    for t, (a, b, c) in enumerate(faces.tolist()):
        col = (1 << a) ^ (1 << b) ^ (1 << c)
        while col:
            low = col.bit_length() - 1
            other = reduced.get(low)
            if other is None:
                reduced[low] = col
                lows[t] = low
                break
            col ^= other
    return lows


def reduce_coboundary(ei, ej, skip, pair_offset, tri_rank):
    """Column-reduce the edge coboundary matrix over GF(2), with clearing.

    Edge columns are visited from the last edge in filtration order to the
    first; edges flagged in ``skip`` (spanning-tree edges, which are known
    to have zero reduced columns) are never built.  A column holds the
    filtration ranks of the triangles having that edge as a face; its pivot
    is the smallest rank.  ``pair_offset[a, b] + c - b - 1`` is the
    lexicographic index of triangle ``a < b < c`` and ``tri_rank`` maps that
    to a filtration rank (``-1`` when the triangle is beyond the cutoff).

    Returns, per edge, the rank of the triangle it is paired with or ``-1``.
    """
    ei = np.asarray(ei, dtype=np.int64)
    ej = np.asarray(ej, dtype=np.int64)
    skip = np.asarray(skip, dtype=bool)
    n = pair_offset.shape[0]
    paired = np.full(ei.size, -1, dtype=np.int64)
    reduced = {}
    others = np.arange(n)
    for e in range(ei.size - 1, -1, -1):
        if skip[e]:
            continue
        i, j = ei[e], ej[e]
        k = others[(others != i) & (others != j)]
        a = np.minimum(i, k)
        c = np.maximum(j, k)
        b = i + j + k - a - c
        ranks = tri_rank[pair_offset[a, b] + c - b - 1]
        col = set(ranks[ranks >= 0].tolist())
        while col:
            pivot = min(col)
            other = reduced.get(pivot)
            if other is None:
                reduced[pivot] = col
                paired[e] = pivot
                break
            col ^= other
    return paired
