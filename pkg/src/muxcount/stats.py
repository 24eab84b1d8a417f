"""Exact moments, extension expectations, and the Monte Carlo harness.

The mean of the injection count has the closed form (n)_v p1^a p2^b p12^c.
The variance is assembled exactly by enumerating relative placement
patterns of an ordered pair of injections (one copy pinned canonically,
the other ranging over old/fresh vertex slots), weighting each pattern by
falling factorials.  The harness classifies the regime of a parameter
point and runs seed-reproducible replications against the matching
reference law.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.stats import norm, poisson

from .counting import build_plan, count_injections_arrays
from .errors import ScaleCapExceeded, ValidationError
from .multiplex import (
    Multiplex,
    Submultiplex,
    automorphism_count,
    edge_class_counts,
)
from .sampler import ProbTriple, SeedSpec, as_prob_triple, from_theta, sample_arrays
from .thresholds import BalanceLabel, ThetaPoint, classify_balance, core

#: Pair-pattern enumeration cap for the exact variance.
VARIANCE_VERTEX_CAP = 6

#: Poisson reference pmfs are truncated where the tail mass drops below this.
POISSON_TAIL_EPS = 1e-12

#: Core-reduction deviation rates are reported at these fixed thresholds.
DEVIATION_THRESHOLDS = (0.1, 0.01)


def _log_falling(n: int, k: int) -> float:
    if k > n:
        return -math.inf
    return sum(math.log(n - i) for i in range(k))


def exact_mean_injections(host: Multiplex, n: int, p) -> float:
    """(n)_v * p1^a * p2^b * p12^c with (v, a, b, c) the host signature."""
    prob = as_prob_triple(p)
    if n < host.n:
        raise ValidationError(f"n={n} is below the motif's vertex count {host.n}")
    sig = edge_class_counts(host)
    log_mean = (
        _log_falling(n, sig.v)
        + sig.a * math.log(prob.p1)
        + sig.b * math.log(prob.p2)
        + sig.c * math.log(prob.p12)
    )
    return math.exp(log_mean)


def exact_mean_copies(host: Multiplex, n: int, p) -> float:
    return exact_mean_injections(host, n, p) / automorphism_count(host)


def _placement_patterns(v: int, n_old: int):
    """Injective maps of {0..v-1} into n_old old slots plus canonically
    numbered fresh slots (first fresh use gets slot n_old, then n_old+1, ...).
    Yields (pattern, fresh_count)."""
    pattern = [0] * v

    def rec(i: int, used_old: int, fresh: int):
        if i == v:
            yield tuple(pattern), fresh
            return
        for slot in range(n_old):
            if not used_old >> slot & 1:
                pattern[i] = slot
                yield from rec(i + 1, used_old | 1 << slot, fresh)
        pattern[i] = n_old + fresh
        yield from rec(i + 1, used_old, fresh + 1)

    yield from rec(0, 0, 0)


def exact_variance_injections(host: Multiplex, n: int, p) -> float:
    """Exact variance of the injection count by pair-pattern enumeration.

    Patterns whose union carries no pair constrained by both copies
    contribute exactly zero and are skipped.
    """
    prob = as_prob_triple(p)
    v = host.n
    if v > VARIANCE_VERTEX_CAP:
        raise ScaleCapExceeded(
            f"exact variance is capped at {VARIANCE_VERTEX_CAP} vertices, got {v}"
        )
    if n < v:
        raise ValidationError(f"n={n} is below the motif's vertex count {v}")
    sig = edge_class_counts(host)
    p1, p2, p12 = prob.as_tuple()
    mu = p1**sig.a * p2**sig.b * p12**sig.c
    base = float(math.perm(n, v))

    edges = [(u, w, 1) for u, w in host.layer1] + [(u, w, 2) for u, w in host.layer2]
    total = 0.0
    for pattern, fresh in _placement_patterns(v, v):
        if fresh > n - v:
            continue
        union: dict[tuple[int, int], int] = {}
        for u, w, layer in edges:
            for x, y in ((u, w), (pattern[u], pattern[w])):
                key = (x, y) if x < y else (y, x)
                union[key] = union.get(key, 0) | layer
        a_u = sum(1 for m in union.values() if m == 1)
        b_u = sum(1 for m in union.values() if m == 2)
        c_u = sum(1 for m in union.values() if m == 3)
        if (a_u, b_u, c_u) == (2 * sig.a, 2 * sig.b, 2 * sig.c):
            continue
        weight = base * math.perm(n - v, fresh)
        total += weight * (p1**a_u * p2**b_u * p12**c_u - mu * mu)
    return total


def exact_mean_extensions(core_pattern: Submultiplex, host: Multiplex, n: int, p) -> float:
    """Expected number of motif copies through one planted copy of the core.

    Enumerates embeddings of the motif into core slots plus fresh slots whose
    image contains the planted core, weights each by the probability that the
    non-planted edges appear, and divides by |Aut(motif)| to count copies.
    """
    prob = as_prob_triple(p)
    if core_pattern.parent != host:
        raise ValidationError("core pattern must be a submultiplex of the motif")
    p1, p2, p12 = prob.as_tuple()
    core_vertices = sorted(core_pattern.vertices)
    slot = {vertex: i for i, vertex in enumerate(core_vertices)}
    vc = len(core_vertices)
    v = host.n
    if n < v:
        raise ValidationError(f"n={n} is below the motif's vertex count {v}")

    def norm_pair(x: int, y: int) -> tuple[int, int]:
        return (x, y) if x < y else (y, x)

    planted: dict[tuple[int, int], int] = {}
    for u, w in core_pattern.s1:
        planted[norm_pair(slot[u], slot[w])] = planted.get(norm_pair(slot[u], slot[w]), 0) | 1
    for u, w in core_pattern.s2:
        planted[norm_pair(slot[u], slot[w])] = planted.get(norm_pair(slot[u], slot[w]), 0) | 2

    edges = [(u, w, 1) for u, w in host.layer1] + [(u, w, 2) for u, w in host.layer2]
    total = 0.0
    for pat, fresh in _placement_patterns(v, vc):
        if fresh > n - vc:
            continue
        image: dict[tuple[int, int], int] = {}
        for u, w, layer in edges:
            key = norm_pair(pat[u], pat[w])
            image[key] = image.get(key, 0) | layer
        if any(image.get(pair, 0) & mask != mask for pair, mask in planted.items()):
            continue
        weight = 1.0
        for pair, mask in image.items():
            have = planted.get(pair, 0)
            need = mask & ~have
            if need == 3:
                weight *= p12
            elif need == 1:
                weight *= p1
            elif need == 2:
                weight *= p2
        total += weight * math.perm(n - vc, fresh)
    return total / automorphism_count(host)


# ---------------------------------------------------------------------------
# Monte Carlo harness


def _count_chunk(args) -> list[tuple[int, ...]]:
    motifs, n, p, base_seed, rep_lo, rep_hi = args
    out = []
    for rep in range(rep_lo, rep_hi):
        e1, e2 = sample_arrays(n, p, SeedSpec(base_seed, rep))
        out.append(tuple(count_injections_arrays(m, n, e1, e2) for m in motifs))
    return out


def _run_replications(
    motifs: Sequence[Multiplex],
    n: int,
    p: ProbTriple,
    reps: int,
    base_seed: int,
    workers: int,
) -> np.ndarray:
    """(reps, len(motifs)) injection counts, bit-identical for any worker count."""
    for m in motifs:
        build_plan(m)
    if workers <= 1:
        rows = _count_chunk((tuple(motifs), n, p, base_seed, 0, reps))
    else:
        chunk = max(1, math.ceil(reps / (workers * 4)))
        bounds = [(lo, min(lo + chunk, reps)) for lo in range(0, reps, chunk)]
        args = [(tuple(motifs), n, p, base_seed, lo, hi) for lo, hi in bounds]
        rows = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_count_chunk, args):
                rows.extend(part)
    return np.asarray(rows, dtype=np.int64)


def simulate_counts(
    motif: Multiplex,
    n: int,
    p,
    reps: int,
    seed: int,
    workers: int = 1,
) -> list:
    """reps independent sample-and-count runs; see CountResult for fields."""
    from .counting import CountResult

    if reps < 1:
        raise ValidationError("reps must be at least 1")
    prob = as_prob_triple(p)
    aut = automorphism_count(motif)
    counts = _run_replications([motif], n, prob, reps, seed, workers)[:, 0]
    return [CountResult(int(c), aut, int(c) // aut) for c in counts]


def w1_to_std_normal(samples: Sequence[float]) -> float:
    """Wasserstein-1 distance to N(0, 1) by quantile coupling.

    Average over order statistics of |x_(i) - z_(i)| with z the ideal normal
    grid; estimator bias is O(sqrt(log m)/m).  Samples must already be
    standardized by exact moments.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    m = x.size
    if m < 100:
        raise ValidationError(f"need at least 100 samples for the W1 estimate, got {m}")
    grid = norm.ppf((np.arange(m) + 0.5) / m)
    return float(np.mean(np.abs(x - grid)))


def tv_to_reference_pmf(samples: Sequence[int], pmf: np.ndarray) -> float:
    """One-half L1 distance between the empirical pmf and a reference pmf
    supported on 0..len(pmf)-1 (mass beyond the support counts fully)."""
    counts = np.asarray(samples, dtype=np.int64)
    if counts.size == 0:
        raise ValidationError("no samples")
    if (counts < 0).any():
        raise ValidationError("samples must be non-negative integers")
    k = max(int(counts.max()), len(pmf) - 1)
    emp = np.bincount(counts, minlength=k + 1) / counts.size
    ref = np.zeros(k + 1)
    ref[: len(pmf)] = pmf
    return float(0.5 * np.abs(emp - ref).sum())


def poisson_pmf_truncated(mean: float) -> np.ndarray:
    """Poisson pmf out to where the remaining tail mass is below the cutoff."""
    if mean <= 0:
        raise ValidationError(f"Poisson reference mean must be positive, got {mean}")
    hi = int(poisson.isf(POISSON_TAIL_EPS, mean)) + 2
    return poisson.pmf(np.arange(hi + 1), mean)


def tv_to_poisson(samples: Sequence[int], mean: float) -> float:
    """Total variation distance to Poisson(mean), tail-truncated at 1e-12."""
    return tv_to_reference_pmf(samples, poisson_pmf_truncated(mean))


def poisson_product_pmf(mean1: float, mean2: float, k_max: int) -> np.ndarray:
    """pmf of Z1 * Z2 on 0..k_max for independent Poissons Z1, Z2."""
    hi = int(max(poisson.isf(POISSON_TAIL_EPS, mean1), poisson.isf(POISSON_TAIL_EPS, mean2))) + 2
    z1 = poisson.pmf(np.arange(hi + 1), mean1)
    z2 = poisson.pmf(np.arange(hi + 1), mean2)
    pmf = np.zeros(k_max + 1)
    pmf[0] = z1[0] + z2[0] - z1[0] * z2[0]
    for w in range(1, k_max + 1):
        acc = 0.0
        for d in range(1, min(w, hi) + 1):
            q, r = divmod(w, d)
            if r == 0 and q <= hi:
                acc += z1[d] * z2[q]
        pmf[w] = acc
    return pmf


@dataclass
class SimulationReport:
    """Replication counts plus the regime-appropriate distance diagnostics."""

    motif: Multiplex
    n: int
    p: ProbTriple
    reps: int
    seed: int
    regime: str
    samples_injections: list[int]
    samples_copies: list[int]
    exact_mean_inj: float
    exact_var_inj: float | None
    distances: dict[str, float] = field(default_factory=dict)
    fitted_poisson_mean: float | None = None
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "motif": self.motif.to_dict(),
            "n": self.n,
            "p": {"p1": self.p.p1, "p2": self.p.p2, "p12": self.p.p12},
            "reps": self.reps,
            "seed": self.seed,
            "regime": self.regime,
            "samples": {
                "injections": self.samples_injections,
                "copies": self.samples_copies,
            },
            "exact_mean_inj": self.exact_mean_inj,
            "exact_var_inj": self.exact_var_inj,
            "distances": self.distances,
            "fitted_poisson_mean": self.fitted_poisson_mean,
            "extras": self.extras,
        }


def limit_experiment(
    motif: Multiplex,
    theta: ThetaPoint,
    n: int,
    reps: int,
    seed: int,
    workers: int = 1,
) -> SimulationReport:
    """Classify the regime at theta and compare the replication counts with
    the matching reference law.

    Interior: Wasserstein-1 of the exactly standardized counts to N(0, 1).
    Strictly balanced: total variation of copy counts to Poisson with the
    exact finite-n copy mean (the limiting constant is reported under both
    counting conventions but never asserted).  Unbalanced: the rescaled
    count is compared with the core's copy count, and the core's counts with
    their own Poisson reference.  Exterior: empirical P(X > 0).  Balanced but
    not strictly: raw samples only; no universal reference law exists.
    """
    theta.require_feasible()
    p = from_theta(n, theta)
    regime = classify_balance(motif, theta)
    aut = automorphism_count(motif)

    motifs: list[Multiplex] = [motif]
    core_sub: Submultiplex | None = None
    core_motif: Multiplex | None = None
    if regime is BalanceLabel.UNBALANCED:
        core_sub = core(motif, theta)
        core_motif = core_sub.canonical_multiplex()
        motifs.append(core_motif)

    counts = _run_replications(motifs, n, p, reps, seed, workers)
    inj = counts[:, 0]
    copies = inj // aut

    mean_inj = exact_mean_injections(motif, n, p)
    try:
        var_inj = exact_variance_injections(motif, n, p)
    except ScaleCapExceeded:
        var_inj = None

    report = SimulationReport(
        motif=motif,
        n=n,
        p=p,
        reps=reps,
        seed=seed,
        regime=regime.value,
        samples_injections=inj.tolist(),
        samples_copies=copies.tolist(),
        exact_mean_inj=mean_inj,
        exact_var_inj=var_inj,
        fitted_poisson_mean=float(copies.mean()),
    )

    if regime is BalanceLabel.INTERIOR_SATISFIABLE:
        if var_inj is not None and var_inj > 0:
            z = (inj - mean_inj) / math.sqrt(var_inj)
            report.extras["standardization"] = "exact"
        else:
            z = (inj - inj.mean()) / inj.std(ddof=1)
            report.extras["standardization"] = "empirical"
        report.distances["w1_to_normal"] = w1_to_std_normal(z)
    elif regime is BalanceLabel.STRICTLY_BALANCED:
        copy_mean = mean_inj / aut
        report.distances["tv_to_poisson_at_exact_mean"] = tv_to_poisson(copies, copy_mean)
        report.extras["poisson_limit_candidates"] = {
            "vertex_factorial": 1.0 / math.factorial(motif.n),
            "automorphism": 1.0 / aut,
        }
        report.extras["poisson_reference_mean"] = copy_mean
    elif regime is BalanceLabel.UNBALANCED:
        assert core_sub is not None and core_motif is not None
        core_aut = automorphism_count(core_motif)
        core_copies = counts[:, 1] // core_aut
        ext_mean = exact_mean_extensions(core_sub, motif, n, p)
        scaled = copies / ext_mean
        deviation = np.abs(scaled - core_copies)
        report.extras["core"] = core_motif.to_dict()
        report.extras["core_vertices"] = sorted(core_sub.vertices)
        report.extras["exact_mean_extensions"] = ext_mean
        report.extras["samples_core_copies"] = core_copies.tolist()
        report.extras["samples_scaled"] = scaled.tolist()
        for eps in DEVIATION_THRESHOLDS:
            key = f"deviation_rate_gt_{str(eps).replace('.', 'p')}"
            report.extras[key] = float((deviation > eps).mean())
        core_mean = exact_mean_copies(core_motif, n, p)
        if classify_balance(core_motif, theta) is BalanceLabel.STRICTLY_BALANCED:
            report.distances["tv_to_poisson_at_exact_mean"] = tv_to_poisson(
                core_copies, core_mean
            )
            report.extras["poisson_reference_mean"] = core_mean
    elif regime is BalanceLabel.EXTERIOR_UNSATISFIABLE:
        report.extras["prob_positive"] = float((inj > 0).mean())

    return report
