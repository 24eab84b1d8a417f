"""Injective multiplex homomorphism counting.

Semantics: an injective vertex map is counted when every layer-1 motif edge
lands on a layer-1 graph edge and every layer-2 motif edge on a layer-2
graph edge (presence only, never induced).  Injections are primary; copies
are injections divided by the motif's automorphism count, and the division
is always exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, NamedTuple

import numpy as np

from . import _kernels
from .errors import MissingPlantedCore, ScaleCapExceeded
from .multiplex import Multiplex, Submultiplex, automorphism_count

#: Motif vertex cap for the backtracking counter.
MOTIF_VERTEX_CAP = 12

#: Host cap for the brute-force oracle (iterates all (n)_v injective maps).
ORACLE_HOST_CAP = 10


class CountResult(NamedTuple):
    injections: int
    aut_size: int
    copies: int


@dataclass(frozen=True)
class MotifPlan:
    """Flattened backtracking schedule for one motif, kernel-ready."""

    n_motif: int
    cons_ptr: np.ndarray
    cons_prev: np.ndarray
    cons_mask: np.ndarray
    deg1_req: np.ndarray
    deg2_req: np.ndarray


@lru_cache(maxsize=256)
def build_plan(motif: Multiplex) -> MotifPlan:
    """Vertex order: descending combined degree, ties by vertex id; per-step
    constraints point at already-mapped neighbors with a layer bitmask."""
    v = motif.n
    if v > MOTIF_VERTEX_CAP:
        raise ScaleCapExceeded(f"motif has {v} vertices, counter cap is {MOTIF_VERTEX_CAP}")
    deg = [motif.degree_pair(u) for u in range(v)]
    order = sorted(range(v), key=lambda u: (-(deg[u][0] + deg[u][1]), u))
    position = {u: i for i, u in enumerate(order)}

    masks: dict[tuple[int, int], int] = {}
    for u, w in motif.layer1:
        masks[(u, w)] = masks.get((u, w), 0) | 1
    for u, w in motif.layer2:
        masks[(u, w)] = masks.get((u, w), 0) | 2

    per_step: list[list[tuple[int, int]]] = [[] for _ in range(v)]
    for (u, w), m in sorted(masks.items()):
        i, j = position[u], position[w]
        if i < j:
            per_step[j].append((i, m))
        else:
            per_step[i].append((j, m))

    cons_ptr = np.zeros(v + 1, dtype=np.int32)
    prev: list[int] = []
    mask: list[int] = []
    for i in range(v):
        for j, m in sorted(per_step[i]):
            prev.append(j)
            mask.append(m)
        cons_ptr[i + 1] = len(prev)
    return MotifPlan(
        n_motif=v,
        cons_ptr=cons_ptr,
        cons_prev=np.asarray(prev, dtype=np.int32),
        cons_mask=np.asarray(mask, dtype=np.int32),
        deg1_req=np.asarray([deg[u][0] for u in order], dtype=np.int64),
        deg2_req=np.asarray([deg[u][1] for u in order], dtype=np.int64),
    )


def build_csr(n: int, edges: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric CSR (indptr, sorted indices) from a (k, 2) edge array.

    Directed arcs are packed into single integers src*n + dst and sorted
    once, which orders rows and each row's neighbors simultaneously.
    """
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    k = edges.shape[0]
    enc = np.empty(2 * k, dtype=np.int64)
    np.multiply(edges[:, 0], n, out=enc[:k])
    enc[:k] += edges[:, 1]
    np.multiply(edges[:, 1], n, out=enc[k:])
    enc[k:] += edges[:, 0]
    enc.sort()
    src = enc // n
    indices = enc - src * n
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return indptr, indices


def _edges_array(edges: tuple) -> np.ndarray:
    return np.asarray(edges, dtype=np.int64).reshape(-1, 2)


def count_injections_arrays(motif: Multiplex, n: int, edges1: np.ndarray, edges2: np.ndarray) -> int:
    """Hot-path variant taking the host as raw edge arrays."""
    plan = build_plan(motif)
    indptr1, indices1 = build_csr(n, edges1)
    indptr2, indices2 = build_csr(n, edges2)
    return int(
        _kernels.active.count_injections(
            n,
            indptr1,
            indices1,
            indptr2,
            indices2,
            plan.cons_ptr,
            plan.cons_prev,
            plan.cons_mask,
            plan.deg1_req,
            plan.deg2_req,
        )
    )


def count_injections(motif: Multiplex, graph: Multiplex) -> int:
    """Backtracking count of injective multiplex homomorphisms motif -> graph."""
    return count_injections_arrays(
        motif, graph.n, _edges_array(graph.layer1), _edges_array(graph.layer2)
    )


def count_injections_bruteforce(motif: Multiplex, graph: Multiplex) -> int:
    """Oracle: iterate all injective maps and test every edge directly."""
    if graph.n > ORACLE_HOST_CAP:
        raise ScaleCapExceeded(f"oracle host cap is {ORACLE_HOST_CAP} vertices, got {graph.n}")
    if motif.n > graph.n:
        return 0
    s1, s2 = graph.edge_set1, graph.edge_set2
    total = 0
    for image in itertools.permutations(range(graph.n), motif.n):
        ok = True
        for u, w in motif.layer1:
            x, y = image[u], image[w]
            if (x, y) not in s1 and (y, x) not in s1:
                ok = False
                break
        if ok:
            for u, w in motif.layer2:
                x, y = image[u], image[w]
                if (x, y) not in s2 and (y, x) not in s2:
                    ok = False
                    break
        if ok:
            total += 1
    return total


def count_copies(motif: Multiplex, graph: Multiplex) -> CountResult:
    """Injections, automorphism count, and copies = injections / |Aut|."""
    inj = count_injections(motif, graph)
    aut = automorphism_count(motif)
    copies, rem = divmod(inj, aut)
    assert rem == 0, "injection count must be divisible by the automorphism count"
    return CountResult(injections=inj, aut_size=aut, copies=copies)


def iter_embeddings(motif: Multiplex, graph: Multiplex) -> Iterator[tuple[int, ...]]:
    """Yield every injective homomorphism as an image tuple (motif vertex i
    maps to image[i]).  Pure Python; intended for small hosts."""
    v = motif.n
    if v > MOTIF_VERTEX_CAP:
        raise ScaleCapExceeded(f"motif has {v} vertices, counter cap is {MOTIF_VERTEX_CAP}")
    adj1: list[set[int]] = [set() for _ in range(graph.n)]
    adj2: list[set[int]] = [set() for _ in range(graph.n)]
    for u, w in graph.layer1:
        adj1[u].add(w)
        adj1[w].add(u)
    for u, w in graph.layer2:
        adj2[u].add(w)
        adj2[w].add(u)

    deg = [motif.degree_pair(u) for u in range(v)]
    order = sorted(range(v), key=lambda u: (-(deg[u][0] + deg[u][1]), u))
    back1 = [[] for _ in range(v)]
    back2 = [[] for _ in range(v)]
    pos = {u: i for i, u in enumerate(order)}
    for u, w in motif.layer1:
        i, j = sorted((pos[u], pos[w]))
        back1[j].append(i)
    for u, w in motif.layer2:
        i, j = sorted((pos[u], pos[w]))
        back2[j].append(i)

    image = [-1] * v
    used = [False] * graph.n

    def extend(i: int):
        if i == v:
            out = [0] * v
            for step, vertex in enumerate(order):
                out[vertex] = image[step]
            yield tuple(out)
            return
        if back1[i]:
            cands = adj1[image[back1[i][0]]]
        elif back2[i]:
            cands = adj2[image[back2[i][0]]]
        else:
            cands = range(graph.n)
        for x in cands:
            if used[x]:
                continue
            if any(x not in adj1[image[j]] for j in back1[i]):
                continue
            if any(x not in adj2[image[j]] for j in back2[i]):
                continue
            image[i] = x
            used[x] = True
            yield from extend(i + 1)
            used[x] = False

    yield from extend(0)


def count_extensions(
    core_copy: Multiplex,
    motif: Multiplex,
    core_pattern: Submultiplex,
    graph: Multiplex,
) -> int:
    """Copies of the motif in the graph that contain the placed core copy.

    ``core_copy`` is the placed image of ``core_pattern`` (a submultiplex of
    the motif) inside the graph's vertex range; the graph must already carry
    its edges (see :func:`muxcount.sampler.plant`).  Each motif copy whose
    edge sets contain the placed copy's, layer-wise, counts exactly once.
    """
    if not (
        set(core_copy.layer1) <= graph.edge_set1
        and set(core_copy.layer2) <= graph.edge_set2
    ):
        raise MissingPlantedCore("the placed core's edges are not all present in the graph")
    if not (
        core_pattern.edge_set1 <= motif.edge_set1
        and core_pattern.edge_set2 <= motif.edge_set2
    ):
        raise MissingPlantedCore("core pattern is not a submultiplex of the motif")
    want1 = set(core_copy.layer1)
    want2 = set(core_copy.layer2)

    def norm(x: int, y: int) -> tuple[int, int]:
        return (x, y) if x < y else (y, x)

    hits = 0
    for image in iter_embeddings(motif, graph):
        got1 = {norm(image[u], image[w]) for u, w in motif.layer1}
        got2 = {norm(image[u], image[w]) for u, w in motif.layer2}
        if want1 <= got1 and want2 <= got2:
            hits += 1
    aut = automorphism_count(motif)
    copies, rem = divmod(hits, aut)
    assert rem == 0
    return copies


def kernel_name() -> str:
    """Which counting kernel is active ("compiled" or "python")."""
    return _kernels.IMPLEMENTATION
