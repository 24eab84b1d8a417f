"""Two-layer multiplex data model and its combinatorial substrate.

A multiplex is a pair of simple graphs (layers) on one shared vertex set
{0, ..., n-1}.  Edges are unordered pairs stored as (u, v) with u < v; the
same pair may appear in both layers.  Everything downstream (thresholds,
regions, counting, statistics) is driven by the signature (v, a, b, c):
vertex count, layer-1-only edges, layer-2-only edges, both-layer edges.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, NamedTuple

from .errors import ScaleCapExceeded, ValidationError

Edge = tuple[int, int]

#: Default cap on |E(H^1)| + |E(H^2)| for subset enumeration (2^cap subsets).
DEFAULT_EDGE_CAP = 24

#: Vertex cap for automorphism counting (factorial-order enumeration).
AUTOMORPHISM_VERTEX_CAP = 12


class Signature(NamedTuple):
    """Edge-class profile (v, a, b, c) of a (sub)multiplex."""

    v: int
    a: int
    b: int
    c: int


def _canonical_edges(raw: Iterable[Iterable[int]], n: int, layer: str) -> tuple[Edge, ...]:
    edges: list[Edge] = []
    for pair in raw:
        pair = tuple(pair)
        if len(pair) != 2:
            raise ValidationError(f"{layer}: edge {pair!r} is not a vertex pair")
        u, v = int(pair[0]), int(pair[1])
        if u == v:
            raise ValidationError(f"{layer}: self-loop at vertex {u}")
        if u > v:
            u, v = v, u
        if u < 0 or v >= n:
            raise ValidationError(f"{layer}: edge ({u}, {v}) out of range for n={n}")
        edges.append((u, v))
    edges.sort()
    for prev, cur in itertools.pairwise(edges):
        if prev == cur:
            raise ValidationError(f"{layer}: duplicate edge {cur}")
    return tuple(edges)


@dataclass(frozen=True)
class Multiplex:
    """Immutable two-layer multiplex on vertices {0, ..., n-1}.

    Construct through :func:`validate` or :meth:`from_edges` so the edge
    tuples are canonical (sorted, u < v, no duplicates).
    """

    n: int
    layer1: tuple[Edge, ...]
    layer2: tuple[Edge, ...]

    @classmethod
    def from_edges(cls, n: int, layer1: Iterable[Iterable[int]], layer2: Iterable[Iterable[int]]) -> "Multiplex":
        if n < 0:
            raise ValidationError(f"vertex count must be non-negative, got {n}")
        return cls(int(n), _canonical_edges(layer1, n, "layer1"), _canonical_edges(layer2, n, "layer2"))

    @cached_property
    def edge_set1(self) -> frozenset[Edge]:
        return frozenset(self.layer1)

    @cached_property
    def edge_set2(self) -> frozenset[Edge]:
        return frozenset(self.layer2)

    @cached_property
    def both_edges(self) -> tuple[Edge, ...]:
        """Edges present in both layers (the c-class), sorted."""
        return tuple(sorted(self.edge_set1 & self.edge_set2))

    @property
    def n_edges(self) -> int:
        """Size of E(M) = E(M^1) union E(M^2) as a set of pairs."""
        return len(self.edge_set1 | self.edge_set2)

    def degree_pair(self, u: int) -> tuple[int, int]:
        d1 = sum(1 for e in self.layer1 if u in e)
        d2 = sum(1 for e in self.layer2 if u in e)
        return d1, d2

    def full_submultiplex(self) -> "Submultiplex":
        return Submultiplex.from_edge_subsets(self, self.layer1, self.layer2)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "layer1": [list(e) for e in self.layer1],
            "layer2": [list(e) for e in self.layer2],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Multiplex":
        return validate(data)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "Multiplex":
        with open(path, "r", encoding="utf-8") as fh:
            return validate(json.load(fh))


@dataclass(frozen=True)
class Submultiplex:
    """A choice of edge subsets (s1, s2) inside a host multiplex.

    ``vertices`` defaults to the endpoints covered by s1 and s2.  Lattice
    operations may carry extra explicitly retained vertices: the intersection
    of two submultiplexes keeps V(Q) & V(R) even when some of those vertices
    lose all their edges, which is what makes the exponent form modular.
    """

    parent: Multiplex
    s1: tuple[Edge, ...]
    s2: tuple[Edge, ...]
    vertices: frozenset[int]

    @classmethod
    def from_edge_subsets(
        cls,
        parent: Multiplex,
        s1: Iterable[Edge],
        s2: Iterable[Edge],
        vertices: Iterable[int] | None = None,
    ) -> "Submultiplex":
        s1 = tuple(sorted(set(s1)))
        s2 = tuple(sorted(set(s2)))
        if not set(s1) <= parent.edge_set1:
            raise ValidationError("s1 is not a subset of the host's layer-1 edges")
        if not set(s2) <= parent.edge_set2:
            raise ValidationError("s2 is not a subset of the host's layer-2 edges")
        covered = frozenset(v for e in itertools.chain(s1, s2) for v in e)
        if vertices is None:
            verts = covered
        else:
            verts = frozenset(int(v) for v in vertices)
            if not covered <= verts:
                raise ValidationError("explicit vertex set does not cover all edge endpoints")
        return cls(parent, s1, s2, verts)

    @cached_property
    def edge_set1(self) -> frozenset[Edge]:
        return frozenset(self.s1)

    @cached_property
    def edge_set2(self) -> frozenset[Edge]:
        return frozenset(self.s2)

    @property
    def n_edges(self) -> int:
        return len(self.edge_set1 | self.edge_set2)

    def signature(self) -> Signature:
        return _classify(len(self.vertices), self.edge_set1, self.edge_set2)

    def key(self) -> tuple[tuple[Edge, ...], tuple[Edge, ...]]:
        """Identity of the submultiplex as a pair of edge subsets."""
        return (self.s1, self.s2)

    def is_proper(self) -> bool:
        return self.key() != (self.parent.layer1, self.parent.layer2)

    def contains(self, other: "Submultiplex") -> bool:
        return (
            other.edge_set1 <= self.edge_set1
            and other.edge_set2 <= self.edge_set2
            and other.vertices <= self.vertices
        )

    def placed_multiplex(self) -> Multiplex:
        """The submultiplex as a multiplex on the host's vertex range."""
        return Multiplex.from_edges(self.parent.n, self.s1, self.s2)

    def canonical_multiplex(self) -> Multiplex:
        """Relabel the retained vertices to 0..v-1 in sorted order."""
        order = sorted(self.vertices)
        relabel = {v: i for i, v in enumerate(order)}
        remap = lambda edges: [(relabel[u], relabel[v]) for u, v in edges]
        return Multiplex.from_edges(len(order), remap(self.s1), remap(self.s2))


def validate(raw) -> Multiplex:
    """Canonicalize a raw multiplex (mapping with keys n/layer1/layer2) or reject it."""
    if isinstance(raw, Multiplex):
        return Multiplex.from_edges(raw.n, raw.layer1, raw.layer2)
    if not isinstance(raw, Mapping):
        raise ValidationError(f"expected a mapping with keys n/layer1/layer2, got {type(raw).__name__}")
    missing = {"n", "layer1", "layer2"} - set(raw)
    if missing:
        raise ValidationError(f"missing keys: {sorted(missing)}")
    try:
        n = int(raw["n"])
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"vertex count is not an integer: {raw['n']!r}") from exc
    return Multiplex.from_edges(n, raw["layer1"], raw["layer2"])


def _classify(v: int, set1: frozenset[Edge], set2: frozenset[Edge]) -> Signature:
    both = len(set1 & set2)
    return Signature(v=v, a=len(set1) - both, b=len(set2) - both, c=both)


def edge_class_counts(obj: Multiplex | Submultiplex) -> Signature:
    """Signature of a host (v = n_vertices) or a submultiplex (v = retained vertices)."""
    if isinstance(obj, Submultiplex):
        return obj.signature()
    return _classify(obj.n, obj.edge_set1, obj.edge_set2)


def enumerate_submultiplexes(
    host: Multiplex,
    min_edges: int = 1,
    max_total_edges: int = DEFAULT_EDGE_CAP,
) -> Iterator[Submultiplex]:
    """Stream all (s1, s2) edge-subset pairs with |s1 union s2| >= min_edges.

    Deterministic ascending-bitmask order over the canonical edge ordering:
    low bits select layer-1 edges, high bits layer-2 edges.
    """
    e1, e2 = host.layer1, host.layer2
    total = len(e1) + len(e2)
    if total > max_total_edges:
        raise ScaleCapExceeded(
            f"{total} edges exceeds the enumeration cap of {max_total_edges} "
            f"(2^{total} subsets); raise max_total_edges explicitly to override"
        )
    k1 = len(e1)
    for mask in range(1 << total):
        s1 = tuple(e1[i] for i in range(k1) if mask >> i & 1)
        s2 = tuple(e2[j] for j in range(len(e2)) if mask >> (k1 + j) & 1)
        if len(set(s1) | set(s2)) < min_edges:
            continue
        yield Submultiplex.from_edge_subsets(host, s1, s2)


def completion(sub: Submultiplex) -> Submultiplex:
    """Augment both layers of F with the host's both-layer edges inside V(F).

    Idempotent; keeps V(F) fixed.  See :func:`completion_literal` for the
    as-printed variant this corrects.
    """
    host = sub.parent
    verts = sub.vertices
    d = {e for e in host.both_edges if e[0] in verts and e[1] in verts}
    return Submultiplex.from_edge_subsets(
        host, set(sub.s1) | d, set(sub.s2) | d, vertices=verts
    )


def completion_literal(sub: Submultiplex) -> Multiplex:
    """Uncorrected completion variant, for comparison only: layer 1 is copied
    into both slots and the host's both-layer edges are added without
    restricting to V(F).  The result is generally not a submultiplex of the
    host (its layer 2 can exceed E(H^2)), so it is returned as a plain
    multiplex placed on the host's vertex range.
    """
    host = sub.parent
    s = set(sub.s1) | set(host.both_edges)
    return Multiplex.from_edges(host.n, s, s)


def is_complete(sub: Submultiplex) -> bool:
    """True when F equals its completion."""
    comp = completion(sub)
    return comp.s1 == sub.s1 and comp.s2 == sub.s2


def multiplex_union(a: Multiplex, b: Multiplex) -> Multiplex:
    """Layer-wise union; the vertex range is the union of the two ranges."""
    return Multiplex.from_edges(
        max(a.n, b.n), a.edge_set1 | b.edge_set1, a.edge_set2 | b.edge_set2
    )


def multiplex_intersection(a: Multiplex, b: Multiplex) -> Multiplex:
    """Layer-wise intersection; the vertex range is the intersection of ranges."""
    return Multiplex.from_edges(
        min(a.n, b.n), a.edge_set1 & b.edge_set1, a.edge_set2 & b.edge_set2
    )


def submultiplex_union(p: Submultiplex, q: Submultiplex) -> Submultiplex:
    if p.parent != q.parent:
        raise ValidationError("submultiplex union requires a common host")
    return Submultiplex.from_edge_subsets(
        p.parent, p.edge_set1 | q.edge_set1, p.edge_set2 | q.edge_set2,
        vertices=p.vertices | q.vertices,
    )


def submultiplex_intersection(p: Submultiplex, q: Submultiplex) -> Submultiplex:
    """Edge-wise intersection keeping V(P) & V(Q), isolated vertices included."""
    if p.parent != q.parent:
        raise ValidationError("submultiplex intersection requires a common host")
    return Submultiplex.from_edge_subsets(
        p.parent, p.edge_set1 & q.edge_set1, p.edge_set2 & q.edge_set2,
        vertices=p.vertices & q.vertices,
    )


def automorphism_count(host: Multiplex) -> int:
    """Number of vertex permutations preserving both layers' edge sets exactly.

    Backtracking over vertices with degree-pair pruning; the |V| cap keeps
    the worst case (edgeless host, n! permutations) bounded.
    """
    n = host.n
    if n > AUTOMORPHISM_VERTEX_CAP:
        raise ScaleCapExceeded(
            f"automorphism counting is capped at {AUTOMORPHISM_VERTEX_CAP} vertices, got {n}"
        )
    if n <= 1:
        return 1
    adj1 = [set() for _ in range(n)]
    adj2 = [set() for _ in range(n)]
    for u, v in host.layer1:
        adj1[u].add(v)
        adj1[v].add(u)
    for u, v in host.layer2:
        adj2[u].add(v)
        adj2[v].add(u)
    degs = [(len(adj1[u]), len(adj2[u])) for u in range(n)]

    image = [-1] * n
    used = [False] * n
    count = 0

    def extend(i: int) -> None:
        nonlocal count
        if i == n:
            count += 1
            return
        for cand in range(n):
            if used[cand] or degs[cand] != degs[i]:
                continue
            ok = True
            for j in range(i):
                if (j in adj1[i]) != (image[j] in adj1[cand]) or (j in adj2[i]) != (image[j] in adj2[cand]):
                    ok = False
                    break
            if ok:
                image[i] = cand
                used[cand] = True
                extend(i + 1)
                used[cand] = False
        image[i] = -1

    extend(0)
    return count
