import random

import pytest

from muxcount import motifs
from muxcount.multiplex import Multiplex

#: One line per acceptance criterion, printed after the run.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def edge_triangle():
    return motifs.edge_triangle()


@pytest.fixture
def double_edge():
    return motifs.double_edge()


@pytest.fixture
def tailed_cycle():
    return motifs.tailed_cycle()


def random_prob_triple(rng: random.Random, lo: float = 0.15, hi: float = 0.7):
    """Feasible (p1, p2, p12) with marginals in [lo, hi]."""
    p1 = rng.uniform(lo, hi)
    p2 = rng.uniform(lo, hi)
    bot = max(1e-6, p1 + p2 - 1 + 1e-6)
    top = min(p1, p2) - 1e-6
    return (p1, p2, rng.uniform(bot, top))


def random_multiplex(rng: random.Random, max_vertices: int = 5, max_edges: int = 8) -> Multiplex:
    """Random small multiplex with at least one edge."""
    while True:
        n = rng.randint(2, max_vertices)
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        e1 = [p for p in pairs if rng.random() < 0.4]
        e2 = [p for p in pairs if rng.random() < 0.4]
        if not e1 and not e2:
            continue
        if len(e1) + len(e2) > max_edges:
            continue
        return Multiplex.from_edges(n, e1, e2)


# Fixed 15-vertex two-layer instance with hand-verified counts; used by the
# counting tests as a known-answer case.
SAMPLE15_L1 = [
    (8, 6), (8, 2), (14, 3), (3, 12), (0, 9), (0, 10), (10, 7), (1, 8),
    (8, 5), (8, 11), (11, 2), (10, 5), (13, 4), (13, 1), (13, 9),
]
SAMPLE15_L2 = [
    (14, 3), (3, 12), (12, 11), (0, 9), (9, 10), (10, 7), (7, 4), (0, 1),
    (0, 14), (0, 12), (3, 8), (1, 8), (8, 5), (8, 2), (5, 6), (8, 13),
]


@pytest.fixture
def fifteen_vertex_sample():
    return Multiplex.from_edges(15, SAMPLE15_L1, SAMPLE15_L2)
