"""Pure-Python twin of the compiled counting kernel.

Same plan format, same candidate-selection rule, same results; used when
the extension is unavailable or when MUX_PURE_PYTHON is set.  Works on the
CSR arrays through memoryview-free Python indexing, so it is slow but has
no dependencies beyond the stdlib.
"""

from __future__ import annotations

from bisect import bisect_left


def _member(indptr, indices, vertex: int, target: int) -> bool:
    lo, hi = indptr[vertex], indptr[vertex + 1]
    pos = bisect_left(indices, target, lo, hi)
    return pos < hi and indices[pos] == target


def count_injections(
    n: int,
    indptr1,
    indices1,
    indptr2,
    indices2,
    cons_ptr,
    cons_prev,
    cons_mask,
    deg1_req,
    deg2_req,
) -> int:
    steps = len(cons_ptr) - 1
    if steps == 0:
        return 1
    if n < steps:
        return 0

    indptr1 = list(indptr1)
    indices1 = list(indices1)
    indptr2 = list(indptr2)
    indices2 = list(indices2)
    cons = [
        [(cons_prev[k], cons_mask[k]) for k in range(cons_ptr[i], cons_ptr[i + 1])]
        for i in range(steps)
    ]
    deg1_req = list(deg1_req)
    deg2_req = list(deg2_req)

    used = bytearray(n)
    phi = [0] * steps
    total = 0

    def candidates(step: int):
        best = None  # (length, mode, lo, hi)
        for j, m in cons[step]:
            x = phi[j]
            if m & 1:
                lo, hi = indptr1[x], indptr1[x + 1]
                if best is None or hi - lo < best[0]:
                    best = (hi - lo, 1, lo, hi)
            if m & 2:
                lo, hi = indptr2[x], indptr2[x + 1]
                if best is None or hi - lo < best[0]:
                    best = (hi - lo, 2, lo, hi)
        if best is None or best[0] >= n:
            return range(n)
        _, m, lo, hi = best
        return (indices1 if m == 1 else indices2)[lo:hi]

    def extend(step: int) -> None:
        nonlocal total
        last = step == steps - 1
        for x in candidates(step):
            if used[x]:
                continue
            if indptr1[x + 1] - indptr1[x] < deg1_req[step]:
                continue
            if indptr2[x + 1] - indptr2[x] < deg2_req[step]:
                continue
            ok = True
            for j, m in cons[step]:
                if m & 1 and not _member(indptr1, indices1, phi[j], x):
                    ok = False
                    break
                if m & 2 and not _member(indptr2, indices2, phi[j], x):
                    ok = False
                    break
            if not ok:
                continue
            phi[step] = x
            if last:
                total += 1
            else:
                used[x] = 1
                extend(step + 1)
                used[x] = 0

    extend(0)
    return total
