"""Small named motifs used throughout the tests, docs, and benchmarks."""

from .multiplex import Multiplex


def double_edge() -> Multiplex:
    """One vertex pair carrying an edge in both layers."""
    return Multiplex.from_edges(2, [(0, 1)], [(0, 1)])


def edge_triangle() -> Multiplex:
    """Layer-1 triangle whose edge (1, 2) also appears in layer 2."""
    return Multiplex.from_edges(3, [(0, 1), (1, 2), (0, 2)], [(1, 2)])


def tailed_cycle() -> Multiplex:
    """Five vertices: layer-1 four-cycle 1-2-3-4-1 with a tail 0-1;
    layer 2 carries (0, 2) and (1, 2)."""
    return Multiplex.from_edges(
        5,
        [(0, 1), (1, 2), (1, 4), (2, 3), (3, 4)],
        [(0, 2), (1, 2)],
    )


def single_layer1_edge() -> Multiplex:
    return Multiplex.from_edges(2, [(0, 1)], [])


def layer1_triangle() -> Multiplex:
    return Multiplex.from_edges(3, [(0, 1), (1, 2), (0, 2)], [])


def complete_multiplex(n: int) -> Multiplex:
    """Both layers complete on n vertices."""
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    return Multiplex.from_edges(n, edges, edges)
