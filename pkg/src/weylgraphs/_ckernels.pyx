# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``."""
import numpy as np

from libc.stdlib cimport malloc, free

BACKEND = "cython"


cdef struct Search:
    int n
    int *mat
    int *colors
    int *need
    int *seq
    int *best
    int *placed
    char *used
    char *less
    int have_best
    long count


cdef void _rec(Search *s, int d, int off) noexcept nogil:
    cdef int n = s.n
    cdef int v, j, w, k, i, state, worse
    if d == n:
        if not s.have_best or s.less[d]:
            for i in range(n * n):
                s.best[i] = s.seq[i]
            s.have_best = 1
            s.count = 1
            for i in range(n + 1):
                s.less[i] = 0
        else:
            s.count += 1
        return
    for v in range(n):
        if s.used[v] or s.colors[v] != s.need[d]:
            continue
        k = off
        s.seq[k] = s.mat[v * n + v]
        k += 1
        for j in range(d):
            w = s.placed[j]
            s.seq[k] = s.mat[w * n + v]
            s.seq[k + 1] = s.mat[v * n + w]
            k += 2
        state = s.less[d]
        if s.have_best and not state:
            worse = 0
            for i in range(off, k):
                if s.seq[i] != s.best[i]:
                    if s.seq[i] < s.best[i]:
                        state = 1
                    else:
                        worse = 1
                    break
            if worse:
                continue
        s.less[d + 1] = state
        s.used[v] = 1
        s.placed[d] = v
        _rec(s, d + 1, k)
        s.used[v] = 0


def canon_search(int n, mat, colors):
    cdef Search s
    cdef int i, j
    s.n = n
    s.have_best = 0
    s.count = 0
    cdef int total = n * n if n > 0 else 1
    s.mat = <int *> malloc(total * sizeof(int))
    s.colors = <int *> malloc((n + 1) * sizeof(int))
    s.need = <int *> malloc((n + 1) * sizeof(int))
    s.seq = <int *> malloc(total * sizeof(int))
    s.best = <int *> malloc(total * sizeof(int))
    s.placed = <int *> malloc((n + 1) * sizeof(int))
    s.used = <char *> malloc((n + 1) * sizeof(char))
    s.less = <char *> malloc((n + 1) * sizeof(char))
    try:
        for i in range(n):
            row = mat[i]
            for j in range(n):
                s.mat[i * n + j] = row[j]
            s.colors[i] = colors[i]
            s.used[i] = 0
        need = sorted(colors)
        for i in range(n):
            s.need[i] = need[i]
        for i in range(n + 1):
            s.less[i] = 0
        with nogil:
            _rec(&s, 0, 0)
        best = [s.best[i] for i in range(n * n)] if s.have_best else []
        return best, s.count
    finally:
        free(s.mat)
        free(s.colors)
        free(s.need)
        free(s.seq)
        free(s.best)
        free(s.placed)
        free(s.used)
        free(s.less)


def mul2(complex[:, ::1] a, complex[:, ::1] b, int order):
    out_arr = np.zeros((a.shape[0], a.shape[1]), dtype=np.complex128)
    cdef complex[:, ::1] out = out_arr
    cdef int i, j, p, q
    cdef complex c
    for i in range(order + 1):
        for j in range(order + 1 - i):
            c = a[i, j]
            if c == 0:
                continue
            for p in range(order + 1 - i - j):
                for q in range(order + 1 - i - j - p):
                    out[i + p, j + q] += c * b[p, q]
    return out_arr
