# distutils: language = c++
"""Compiled hot kernels: union-find merges and GF(2) column reductions.

Mirrors ``_kernels_py`` exactly; see there for the contracts.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint8_t
from libcpp.algorithm cimport sort as _cpp_sort
from libcpp.vector cimport vector

cnp.import_array()


cdef inline int64_t _find(int64_t* parent, int64_t x) noexcept nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def kruskal_merges(ei, ej, Py_ssize_t n, skip=None):
    cdef const int64_t[::1] vi = np.ascontiguousarray(ei, dtype=np.int64)
    cdef const int64_t[::1] vj = np.ascontiguousarray(ej, dtype=np.int64)
    cdef Py_ssize_t n_edges = vi.shape[0]
    cdef const uint8_t[::1] vskip
    cdef bint use_skip = skip is not None
    if use_skip:
        vskip = np.ascontiguousarray(skip, dtype=np.uint8)
    else:
        vskip = np.zeros(1, dtype=np.uint8)

    cdef int64_t[::1] parent = np.arange(n, dtype=np.int64)
    cdef int64_t[::1] size = np.ones(n, dtype=np.int64)
    cdef int64_t[::1] merges = np.empty(max(n - 1, 0), dtype=np.int64)
    cdef Py_ssize_t pos, count = 0, remaining = n - 1
    cdef int64_t a, b, tmp

    with nogil:
        for pos in range(n_edges):
            if remaining == 0:
                break
            if use_skip and vskip[pos]:
                continue
            a = _find(&parent[0], vi[pos])
            b = _find(&parent[0], vj[pos])
            if a == b:
                continue
            if size[a] < size[b]:
                tmp = a
                a = b
                b = tmp
            parent[b] = a
            size[a] += size[b]
            merges[count] = pos
            count += 1
            remaining -= 1
    return np.asarray(merges[:count]).copy()


cdef void _xor_into(vector[int64_t]& col, const vector[int64_t]& other,
                    vector[int64_t]& scratch) noexcept nogil:
    # symmetric difference of two ascending index lists, written back to col
    cdef size_t i = 0, j = 0
    cdef size_t ni = col.size(), nj = other.size()
    scratch.clear()
    while i < ni and j < nj:
        if col[i] < other[j]:
            scratch.push_back(col[i])
            i += 1
        elif col[i] > other[j]:
            scratch.push_back(other[j])
            j += 1
        else:
            i += 1
            j += 1
    while i < ni:
        scratch.push_back(col[i])
        i += 1
    while j < nj:
        scratch.push_back(other[j])
        j += 1
    col.swap(scratch)


def reduce_triangles(faces):
    cdef const int64_t[:, ::1] f = np.ascontiguousarray(faces, dtype=np.int64).reshape(-1, 3)
    cdef Py_ssize_t n_tri = f.shape[0]
    cdef int64_t n_edges = (np.asarray(f).max() + 1) if n_tri else 0
    cdef int64_t[::1] lows = np.full(n_tri, -1, dtype=np.int64)
    # slot of the stored reduced column whose pivot is a given edge, or -1
    cdef int64_t[::1] slot_of = np.full(max(n_edges, 1), -1, dtype=np.int64)
    cdef vector[vector[int64_t]] stored
    cdef vector[int64_t] col, scratch
    cdef Py_ssize_t t
    cdef int64_t a, b, c, tmp, low, slot

    with nogil:
        for t in range(n_tri):
            a = f[t, 0]
            b = f[t, 1]
            c = f[t, 2]
            if a > b:
                tmp = a; a = b; b = tmp
            if b > c:
                tmp = b; b = c; c = tmp
            if a > b:
                tmp = a; a = b; b = tmp
            col.clear()
            col.push_back(a)
            col.push_back(b)
            col.push_back(c)
            while col.size() > 0:
                low = col.back()
                slot = slot_of[low]
                if slot < 0:
                    slot_of[low] = <int64_t>stored.size()
                    stored.push_back(col)
                    lows[t] = low
                    break
                _xor_into(col, stored[slot], scratch)
    return np.asarray(lows)


cdef inline void _sort(vector[int64_t]& v) noexcept nogil:
    _cpp_sort(v.begin(), v.end())


def reduce_coboundary(ei, ej, skip, pair_offset, tri_rank):
    cdef const int64_t[::1] vi = np.ascontiguousarray(ei, dtype=np.int64)
    cdef const int64_t[::1] vj = np.ascontiguousarray(ej, dtype=np.int64)
    cdef const uint8_t[::1] vskip = np.ascontiguousarray(skip, dtype=np.uint8)
    cdef const int64_t[:, ::1] offset = np.ascontiguousarray(pair_offset, dtype=np.int64)
    cdef const int64_t[::1] rank = np.ascontiguousarray(tri_rank, dtype=np.int64)
    cdef Py_ssize_t n = offset.shape[0]
    cdef Py_ssize_t n_edges = vi.shape[0]
    cdef Py_ssize_t n_tri = rank.shape[0]
    cdef int64_t[::1] paired = np.full(n_edges, -1, dtype=np.int64)
    cdef int64_t[::1] slot_of = np.full(max(n_tri, 1), -1, dtype=np.int64)
    cdef vector[vector[int64_t]] stored
    cdef vector[int64_t] col, scratch
    cdef Py_ssize_t e, k
    cdef int64_t i, j, a, b, c, r, pivot, slot

    with nogil:
        for e in range(n_edges - 1, -1, -1):
            if vskip[e]:
                continue
            i = vi[e]
            j = vj[e]
            col.clear()
            for k in range(n):
                if k == i or k == j:
                    continue
                if k < i:
                    a = k; b = i; c = j
                elif k < j:
                    a = i; b = k; c = j
                else:
                    a = i; b = j; c = k
                r = rank[offset[a, b] + c - b - 1]
                if r >= 0:
                    col.push_back(r)
            _sort(col)
            while col.size() > 0:
                pivot = col[0]
                slot = slot_of[pivot]
                if slot < 0:
                    slot_of[pivot] = <int64_t>stored.size()
                    stored.push_back(col)
                    paired[e] = pivot
                    break
                _xor_into(col, stored[slot], scratch)
    return np.asarray(paired)
