# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled backtracking kernel for injective two-layer homomorphism counts.

Inputs are CSR adjacency arrays per layer (sorted neighbor lists) plus a
flattened per-step constraint plan produced in Python.  At each step the
candidate source is the shortest adjacency list among the step's
constraints (or a scan over all vertices when the step has no mapped
neighbor); remaining constraints are checked by binary search.
"""

from libc.stdint cimport int64_t, int32_t
from libc.stdlib cimport malloc, free


cdef inline bint _member(const int64_t[::1] indptr, const int64_t[::1] indices,
                         int64_t vertex, int64_t target) noexcept nogil:
    cdef int64_t lo = indptr[vertex]
    cdef int64_t hi = indptr[vertex + 1]
    cdef int64_t mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if indices[mid] < target:
            lo = mid + 1
        else:
            hi = mid
    return lo < indptr[vertex + 1] and indices[lo] == target


cdef void _init_step(
    int step,
    int64_t n,
    const int64_t[::1] indptr1,
    const int64_t[::1] indptr2,
    const int32_t[::1] cons_ptr,
    const int32_t[::1] cons_prev,
    const int32_t[::1] cons_mask,
    int64_t *phi,
    int *mode,
    int64_t *pos,
    int64_t *end,
) noexcept nogil:
    cdef int64_t best_len = n
    cdef int best_mode = 0
    cdef int64_t best_lo = 0, best_hi = n
    cdef int64_t x, length
    cdef int k, j, m
    for k in range(cons_ptr[step], cons_ptr[step + 1]):
        j = cons_prev[k]
        m = cons_mask[k]
        x = phi[j]
        if m & 1:
            length = indptr1[x + 1] - indptr1[x]
            if length < best_len:
                best_len = length
                best_mode = 1
                best_lo = indptr1[x]
                best_hi = indptr1[x + 1]
        if m & 2:
            length = indptr2[x + 1] - indptr2[x]
            if length < best_len:
                best_len = length
                best_mode = 2
                best_lo = indptr2[x]
                best_hi = indptr2[x + 1]
    mode[step] = best_mode
    pos[step] = best_lo
    end[step] = best_hi


def count_injections(
    int64_t n,
    const int64_t[::1] indptr1,
    const int64_t[::1] indices1,
    const int64_t[::1] indptr2,
    const int64_t[::1] indices2,
    const int32_t[::1] cons_ptr,
    const int32_t[::1] cons_prev,
    const int32_t[::1] cons_mask,
    const int64_t[::1] deg1_req,
    const int64_t[::1] deg2_req,
):
    """Count injective maps of the planned motif into the CSR graph."""
    cdef int steps = cons_ptr.shape[0] - 1
    if steps == 0:
        return 1
    if n < steps:
        return 0

    cdef unsigned char *used = <unsigned char *> malloc(n * sizeof(unsigned char))
    cdef int64_t *phi = <int64_t *> malloc(steps * sizeof(int64_t))
    cdef int *mode = <int *> malloc(steps * sizeof(int))
    cdef int64_t *pos = <int64_t *> malloc(steps * sizeof(int64_t))
    cdef int64_t *end = <int64_t *> malloc(steps * sizeof(int64_t))
    if used == NULL or phi == NULL or mode == NULL or pos == NULL or end == NULL:
        free(used); free(phi); free(mode); free(pos); free(end)
        raise MemoryError()

    cdef int64_t total = 0
    cdef int64_t i, x, cand
    cdef int step = 0
    cdef int j, k, m
    cdef bint ok

    with nogil:
        for i in range(n):
            used[i] = 0

        _init_step(0, n, indptr1, indptr2,
                   cons_ptr, cons_prev, cons_mask, phi, mode, pos, end)

        while step >= 0:
            cand = -1
            while pos[step] < end[step]:
                if mode[step] == 0:
                    x = pos[step]
                elif mode[step] == 1:
                    x = indices1[pos[step]]
                else:
                    x = indices2[pos[step]]
                pos[step] += 1
                if used[x]:
                    continue
                if indptr1[x + 1] - indptr1[x] < deg1_req[step]:
                    continue
                if indptr2[x + 1] - indptr2[x] < deg2_req[step]:
                    continue
                ok = True
                for k in range(cons_ptr[step], cons_ptr[step + 1]):
                    j = cons_prev[k]
                    m = cons_mask[k]
                    if m & 1 and not _member(indptr1, indices1, phi[j], x):
                        ok = False
                        break
                    if m & 2 and not _member(indptr2, indices2, phi[j], x):
                        ok = False
                        break
                if ok:
                    cand = x
                    break
            if cand < 0:
                step -= 1
                if step >= 0:
                    used[phi[step]] = 0
                continue
            phi[step] = cand
            if step == steps - 1:
                total += 1
                continue
            used[cand] = 1
            step += 1
            _init_step(step, n, indptr1, indptr2,
                       cons_ptr, cons_prev, cons_mask, phi, mode, pos, end)

    free(used); free(phi); free(mode); free(pos); free(end)
    return total
