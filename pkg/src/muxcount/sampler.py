"""Correlated two-layer random multiplex generator with reproducible seeding.

Per unordered vertex pair, one uniform drives a four-way draw with fixed
cumulative ordering (both, layer-1 only, layer-2 only, neither), so layer-1
marginal probability is exactly p1, layer-2 exactly p2, and the joint
exactly p12.  Streams are keyed by (base_seed, replication_index) through a
counter-based generator, which makes any replication-parallel schedule
bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleProbability, ValidationError
from .multiplex import Multiplex, multiplex_union
from .thresholds import ThetaPoint

_U64 = 1 << 64


@dataclass(frozen=True)
class ProbTriple:
    """Connection probabilities (p1, p2, p12) of the correlated pair model."""

    p1: float
    p2: float
    p12: float

    def validate(self) -> "ProbTriple":
        for name, value in (("p1", self.p1), ("p2", self.p2), ("p12", self.p12)):
            if not 0.0 < value < 1.0:
                raise InfeasibleProbability(f"{name}={value} must lie in the open interval (0, 1)")
        lo = max(0.0, self.p1 + self.p2 - 1.0)
        hi = min(self.p1, self.p2)
        if not lo <= self.p12 <= hi:
            raise InfeasibleProbability(
                f"p12={self.p12} violates max(0, p1 + p2 - 1) <= p12 <= min(p1, p2) "
                f"(bounds [{lo}, {hi}] for p1={self.p1}, p2={self.p2})"
            )
        return self

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.p1, self.p2, self.p12)


def as_prob_triple(p) -> ProbTriple:
    """Coerce a ProbTriple or a 3-sequence and validate the feasibility band."""
    if isinstance(p, ProbTriple):
        return p.validate()
    p1, p2, p12 = p
    return ProbTriple(float(p1), float(p2), float(p12)).validate()


@dataclass(frozen=True)
class SeedSpec:
    """(base_seed, replication_index) pair that pins a sample bit-exactly."""

    base_seed: int
    replication_index: int = 0

    def generator(self) -> np.random.Generator:
        key = np.array(
            [self.base_seed % _U64, self.replication_index % _U64], dtype=np.uint64
        )
        return np.random.Generator(np.random.Philox(key=key))


def from_theta(n: int, theta: ThetaPoint) -> ProbTriple:
    """(n^-theta1, n^-theta2, n^-theta12); rejects triples that leave the
    feasibility band, which can happen for tiny n with small exponents."""
    if n < 2:
        raise ValidationError(f"n must be at least 2, got {n}")
    theta.require_feasible()
    log_n = math.log(n)
    p = tuple(math.exp(-float(t) * log_n) for t in theta.as_tuple())
    return ProbTriple(*p).validate()


def _pair_index_bounds(n: int) -> np.ndarray:
    # row_starts[u] = index of pair (u, u+1) in lexicographic (u, v), u < v
    counts = np.arange(n - 1, -1, -1, dtype=np.int64)
    starts = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=starts[1:])
    return starts


def sample_arrays(n: int, p, seed: SeedSpec) -> tuple[np.ndarray, np.ndarray]:
    """Sample once; return the two layers as (k, 2) int64 edge arrays.

    Edges come out sorted lexicographically with u < v.  This is the hot
    path behind :func:`sample`; Monte Carlo drivers use it directly to skip
    tuple materialization.
    """
    prob = as_prob_triple(p)
    if n < 0:
        raise ValidationError(f"n must be non-negative, got {n}")
    m = n * (n - 1) // 2
    u = seed.generator().random(m)
    p1, p2, p12 = prob.as_tuple()
    t_any = p1 + p2 - p12
    hit = np.flatnonzero(u < t_any)
    usub = u[hit]
    in1 = usub < p1
    in2 = (usub < p12) | (usub >= p1)
    starts = _pair_index_bounds(n)
    row = np.searchsorted(starts, hit, side="right") - 1
    col = hit - starts[row] + row + 1
    pairs = np.stack([row, col], axis=1)
    return pairs[in1], pairs[in2]


def sample(n: int, p, seed: SeedSpec) -> Multiplex:
    """One draw from the correlated pair model as a canonical Multiplex."""
    e1, e2 = sample_arrays(n, p, seed)
    return Multiplex(
        n,
        tuple(map(tuple, e1.tolist())),
        tuple(map(tuple, e2.tolist())),
    )


def plant(graph: Multiplex, copy: Multiplex) -> Multiplex:
    """Layer-wise union of a sampled graph with a placed motif copy."""
    if copy.n > graph.n:
        raise ValidationError(
            f"planted copy uses vertices up to {copy.n - 1}, host has only {graph.n}"
        )
    return multiplex_union(graph, copy)
