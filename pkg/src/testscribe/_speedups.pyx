# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the two quadratic inner loops: LCS length and
terminal-pair admissibility over an AST. Mirrors _kernels_py exactly."""

from libc.stdlib cimport free, malloc


def lcs_length(int[::1] a, int[::1] b) -> int:
    cdef Py_ssize_t na = a.shape[0], nb = b.shape[0]
    if na == 0 or nb == 0:
        return 0
    cdef int *prev = <int *> malloc((nb + 1) * sizeof(int))
    cdef int *cur = <int *> malloc((nb + 1) * sizeof(int))
    if prev == NULL or cur == NULL:
        free(prev)
        free(cur)
        raise MemoryError()
    cdef Py_ssize_t i, j
    cdef int v, best
    cdef int *tmp
    for j in range(nb + 1):
        prev[j] = 0
    try:
        for i in range(na):
            cur[0] = 0
            best = 0
            for j in range(nb):
                if a[i] == b[j]:
                    v = prev[j] + 1
                else:
                    v = prev[j + 1] if prev[j + 1] >= best else best
                cur[j + 1] = v
                best = v
            tmp = prev
            prev = cur
            cur = tmp
        return prev[nb]
    finally:
        free(prev)
        free(cur)


def admissible_pairs(int[::1] parents, int[::1] depths, int[::1] terminals,
                     int max_len):
    cdef Py_ssize_t nt = terminals.shape[0]
    cdef Py_ssize_t ai, bi
    cdef int a, b, u, v, du, dv, da
    out = []
    for ai in range(nt):
        a = terminals[ai]
        da = depths[a]
        for bi in range(ai + 1, nt):
            b = terminals[bi]
            u = a
            v = b
            du = da
            dv = depths[b]
            while du > dv:
                u = parents[u]
                du -= 1
            while dv > du:
                v = parents[v]
                dv -= 1
            while u != v:
                u = parents[u]
                v = parents[v]
                du -= 1
            if da + depths[b] - 2 * du + 1 <= max_len:
                out.append((a, b, u))
    return out
