import itertools
import math
import random

import numpy as np
import pytest
from scipy.stats import norm, poisson

from muxcount import motifs
from muxcount.counting import count_injections_bruteforce
from muxcount.errors import ScaleCapExceeded, ValidationError
from muxcount.multiplex import Multiplex
from muxcount.sampler import SeedSpec, sample_arrays
from muxcount.stats import (
    exact_mean_copies,
    exact_mean_extensions,
    exact_mean_injections,
    exact_variance_injections,
    limit_experiment,
    poisson_product_pmf,
    simulate_counts,
    tv_to_poisson,
    tv_to_reference_pmf,
    w1_to_std_normal,
)
from muxcount.thresholds import ThetaPoint, core

from conftest import random_multiplex


def brute_moments(motif, n, p):
    """Exact E/Var of injections by enumerating all 4^C(n,2) pair states."""
    p1, p2, p12 = p
    state_prob = [p12, p1 - p12, p2 - p12, 1 - p1 - p2 + p12]
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    mean = sq = 0.0
    for states in itertools.product(range(4), repeat=len(pairs)):
        w = math.prod(state_prob[s] for s in states)
        l1 = [pr for pr, s in zip(pairs, states) if s in (0, 1)]
        l2 = [pr for pr, s in zip(pairs, states) if s in (0, 2)]
        x = count_injections_bruteforce(motif, Multiplex.from_edges(n, l1, l2))
        mean += w * x
        sq += w * x * x
    return mean, sq - mean * mean


class TestExactMean:
    def test_double_edge_closed_form(self, double_edge):
        assert exact_mean_injections(double_edge, 50, (0.2, 0.2, 0.1)) == pytest.approx(
            50 * 49 * 0.1, rel=1e-12
        )

    def test_edge_triangle_value(self, edge_triangle):
        got = exact_mean_injections(edge_triangle, 100, (0.1, 0.1, 0.01))
        assert got == pytest.approx(100 * 99 * 98 * 0.1 * 0.1 * 0.01, rel=1e-12)

    def test_edgeless_is_falling_factorial(self):
        m = Multiplex.from_edges(4, [], [])
        assert exact_mean_injections(m, 30, (0.5, 0.5, 0.25)) == pytest.approx(
            math.perm(30, 4), rel=1e-12
        )

    def test_copies_divide_by_automorphisms(self, edge_triangle):
        inj = exact_mean_injections(edge_triangle, 40, (0.2, 0.2, 0.1))
        assert exact_mean_copies(edge_triangle, 40, (0.2, 0.2, 0.1)) == pytest.approx(inj / 2)

    def test_n_below_motif_rejected(self, edge_triangle):
        with pytest.raises(ValidationError):
            exact_mean_injections(edge_triangle, 2, (0.2, 0.2, 0.1))


class TestExactVariance:
    def test_single_edge_closed_form(self):
        n, p1 = 17, 0.23
        got = exact_variance_injections(motifs.single_layer1_edge(), n, (p1, 0.5, 0.2))
        want = 4 * math.comb(n, 2) * p1 * (1 - p1)
        assert got == pytest.approx(want, rel=1e-12)

    @pytest.mark.parametrize(
        "motif",
        [
            motifs.single_layer1_edge(),
            motifs.double_edge(),
            motifs.edge_triangle(),
            Multiplex.from_edges(3, [(0, 1), (1, 2)], [(0, 2)]),
        ],
        ids=["edge", "double", "edge-triangle", "path-plus-cross"],
    )
    def test_against_full_enumeration(self, motif):
        n, p = 4, (0.3, 0.4, 0.2)
        mean_o, var_o = brute_moments(motif, n, p)
        assert exact_mean_injections(motif, n, p) == pytest.approx(mean_o, rel=1e-10)
        assert exact_variance_injections(motif, n, p) == pytest.approx(var_o, rel=1e-10)

    def test_monte_carlo_oracle_double_edge(self, double_edge):
        n, p, reps = 50, (0.2, 0.2, 0.1), 50_000
        results = simulate_counts(double_edge, n, p, reps, seed=424242)
        inj = np.array([r.injections for r in results], dtype=float)
        want = exact_variance_injections(double_edge, n, p)
        s2 = inj.var(ddof=1)
        # relative standard error of the sample variance via the fourth moment
        m4 = ((inj - inj.mean()) ** 4).mean()
        se = math.sqrt((m4 - s2**2 * (reps - 3) / (reps - 1)) / reps)
        assert abs(s2 - want) <= 3 * se

    def test_vertex_cap(self):
        big = Multiplex.from_edges(7, [(0, 1)], [])
        with pytest.raises(ScaleCapExceeded):
            exact_variance_injections(big, 30, (0.2, 0.2, 0.1))

    def test_nonnegative_on_random_motifs(self):
        rng = random.Random(55)
        for _ in range(25):
            m = random_multiplex(rng, max_vertices=5, max_edges=7)
            var = exact_variance_injections(m, 25, (0.3, 0.35, 0.2))
            assert var >= 0


class TestExtensionsMean:
    def test_closed_form_for_planted_double_edge(self, edge_triangle):
        core_sub = core(edge_triangle, ThetaPoint.of("1/4", "1/4", 2))
        n, p = 200, (0.05, 0.05, 0.01)
        got = exact_mean_extensions(core_sub, edge_triangle, n, p)
        assert got == pytest.approx((n - 2) * 0.05**2, rel=1e-12)

    def test_core_equal_motif_gives_one(self, edge_triangle):
        full = edge_triangle.full_submultiplex()
        assert exact_mean_extensions(full, edge_triangle, 100, (0.1, 0.1, 0.05)) == pytest.approx(1.0)

    def test_monte_carlo_oracle(self, edge_triangle):
        from muxcount.counting import count_extensions
        from muxcount.sampler import plant, sample

        core_sub = core(edge_triangle, ThetaPoint.of("1/4", "1/4", 2))
        n, p = 200, (0.05, 0.05, 0.01)
        core_copy = Multiplex.from_edges(n, [(0, 1)], [(0, 1)])
        vals = []
        for rep in range(2000):
            g = plant(sample(n, p, SeedSpec(31415, rep)), core_copy)
            vals.append(count_extensions(core_copy, edge_triangle, core_sub, g))
        vals = np.array(vals, dtype=float)
        want = exact_mean_extensions(core_sub, edge_triangle, n, p)
        se = vals.std(ddof=1) / math.sqrt(len(vals))
        assert abs(vals.mean() - want) <= 3 * se

    def test_foreign_core_rejected(self, edge_triangle, double_edge):
        foreign = double_edge.full_submultiplex()
        with pytest.raises(ValidationError):
            exact_mean_extensions(foreign, edge_triangle, 50, (0.2, 0.2, 0.1))


class TestSecondMomentMechanism:
    def test_relative_variance_vanishes_inside(self, edge_triangle):
        # Var/Mean^2 tracks 1/Phi: it must fall along n at an interior point
        theta = ThetaPoint.of("2/5", "2/5", "1/2")
        from muxcount.sampler import from_theta

        ratios = []
        for n in (50, 100, 200, 400):
            p = from_theta(n, theta)
            mean = exact_mean_injections(edge_triangle, n, p)
            var = exact_variance_injections(edge_triangle, n, p)
            ratios.append(var / mean**2)
        assert ratios == sorted(ratios, reverse=True)
        assert ratios[-1] < ratios[0] / 4

    def test_mean_vanishes_outside(self, edge_triangle):
        from muxcount.sampler import from_theta

        theta = ThetaPoint.of("6/5", "6/5", "13/10")
        means = [
            exact_mean_injections(edge_triangle, n, from_theta(n, theta))
            for n in (50, 100, 200, 400)
        ]
        assert means == sorted(means, reverse=True)
        assert means[-1] < 0.05


class TestSimulateCounts:
    def test_single_rep_matches_composition(self, edge_triangle):
        from muxcount.counting import count_injections_arrays

        n, p = 60, (0.1, 0.1, 0.05)
        res = simulate_counts(edge_triangle, n, p, 1, seed=7)[0]
        e1, e2 = sample_arrays(n, p, SeedSpec(7, 0))
        assert res.injections == count_injections_arrays(edge_triangle, n, e1, e2)
        assert res.copies * res.aut_size == res.injections

    def test_worker_count_invariance(self, edge_triangle):
        n, p = 40, (0.1, 0.1, 0.05)
        serial = simulate_counts(edge_triangle, n, p, 40, seed=11, workers=1)
        parallel = simulate_counts(edge_triangle, n, p, 40, seed=11, workers=3)
        assert serial == parallel

    def test_mean_calibration(self, edge_triangle):
        n, p, reps = 80, (0.1, 0.1, 0.05), 4000
        results = simulate_counts(edge_triangle, n, p, reps, seed=13)
        inj = np.array([r.injections for r in results], dtype=float)
        want = exact_mean_injections(edge_triangle, n, p)
        se = inj.std(ddof=1) / math.sqrt(reps)
        assert abs(inj.mean() - want) <= 3 * se

    def test_zero_reps_rejected(self, edge_triangle):
        with pytest.raises(ValidationError):
            simulate_counts(edge_triangle, 30, (0.1, 0.1, 0.05), 0, seed=1)


class TestW1:
    def test_ideal_grid_is_zero(self):
        m = 500
        grid = norm.ppf((np.arange(m) + 0.5) / m)
        assert w1_to_std_normal(grid) == 0.0

    def test_shift_identity(self):
        m = 500
        grid = norm.ppf((np.arange(m) + 0.5) / m)
        assert w1_to_std_normal(grid + 0.5) == pytest.approx(0.5, abs=1e-12)

    def test_standard_normal_draws_small(self):
        rng = np.random.default_rng(0)
        x = rng.standard_normal(20_000)
        assert w1_to_std_normal(x) < 0.02

    def test_minimum_sample_size(self):
        with pytest.raises(ValidationError):
            w1_to_std_normal(np.zeros(50))


class TestTV:
    def test_identical_pmfs_zero(self):
        samples = [0] * 60 + [1] * 30 + [2] * 10
        pmf = np.array([0.6, 0.3, 0.1])
        assert tv_to_reference_pmf(samples, pmf) == pytest.approx(0.0, abs=1e-12)

    def test_all_zero_against_unit_mean(self):
        got = tv_to_poisson([0] * 1000, 1.0)
        assert got == pytest.approx(1 - math.exp(-1), abs=1e-9)

    def test_poisson_draws_within_noise(self):
        rng = np.random.default_rng(1)
        samples = rng.poisson(2.0, 20_000)
        occupied = len(np.unique(samples))
        assert tv_to_poisson(samples, 2.0) <= math.sqrt(occupied / 20_000)

    def test_mean_must_be_positive(self):
        with pytest.raises(ValidationError):
            tv_to_poisson([1, 2], 0.0)


class TestProductPmf:
    def test_zero_mass(self):
        pmf = poisson_product_pmf(0.5, 1.0, 10)
        want0 = math.exp(-0.5) + math.exp(-1.0) - math.exp(-1.5)
        assert pmf[0] == pytest.approx(want0, rel=1e-9)

    def test_prime_value_single_factorization(self):
        lam1, lam2 = 0.7, 1.3
        pmf = poisson_product_pmf(lam1, lam2, 10)
        # w = 1 only from 1*1; w = 2 from 1*2 and 2*1; compare directly
        z1 = poisson.pmf(np.arange(40), lam1)
        z2 = poisson.pmf(np.arange(40), lam2)
        assert pmf[1] == pytest.approx(z1[1] * z2[1], rel=1e-9)
        assert pmf[2] == pytest.approx(z1[1] * z2[2] + z1[2] * z2[1], rel=1e-9)

    def test_matches_simulation(self):
        rng = np.random.default_rng(3)
        z1 = rng.poisson(0.5, 100_000)
        z2 = rng.poisson(1.0, 100_000)
        w = z1 * z2
        pmf = poisson_product_pmf(0.5, 1.0, int(w.max()))
        assert tv_to_reference_pmf(w, pmf) < 0.01


class TestLimitExperiment:
    def test_interior_reports_w1(self, edge_triangle):
        rep = limit_experiment(edge_triangle, ThetaPoint.of("2/5", "2/5", "1/2"), 50, 300, seed=1)
        assert rep.regime == "INTERIOR_SATISFIABLE"
        assert "w1_to_normal" in rep.distances
        assert rep.extras["standardization"] == "exact"
        assert len(rep.samples_injections) == 300

    def test_strictly_balanced_reports_tv_and_candidates(self, edge_triangle):
        rep = limit_experiment(edge_triangle, ThetaPoint.of("3/4", "3/4", "3/2"), 60, 400, seed=2)
        assert rep.regime == "STRICTLY_BALANCED"
        assert "tv_to_poisson_at_exact_mean" in rep.distances
        cands = rep.extras["poisson_limit_candidates"]
        assert cands["vertex_factorial"] == pytest.approx(1 / 6)
        assert cands["automorphism"] == pytest.approx(1 / 2)
        assert rep.fitted_poisson_mean == pytest.approx(np.mean(rep.samples_copies))

    def test_unbalanced_reports_core_and_deviation(self, edge_triangle):
        rep = limit_experiment(edge_triangle, ThetaPoint.of("1/4", "1/4", 2), 60, 400, seed=3)
        assert rep.regime == "UNBALANCED"
        assert rep.extras["core"] == {"n": 2, "layer1": [[0, 1]], "layer2": [[0, 1]]}
        assert "deviation_rate_gt_0p1" in rep.extras
        assert "deviation_rate_gt_0p01" in rep.extras
        assert len(rep.extras["samples_core_copies"]) == 400
        assert "tv_to_poisson_at_exact_mean" in rep.distances

    def test_exterior_reports_prob_positive(self, edge_triangle):
        rep = limit_experiment(edge_triangle, ThetaPoint.of("6/5", "6/5", "13/10"), 60, 200, seed=4)
        assert rep.regime == "EXTERIOR_UNSATISFIABLE"
        assert 0.0 <= rep.extras["prob_positive"] <= 1.0

    def test_balanced_not_strict_raw_only(self, edge_triangle):
        rep = limit_experiment(edge_triangle, ThetaPoint.of("1/2", "1/2", 2), 60, 200, seed=5)
        assert rep.regime == "BALANCED_NOT_STRICT"
        assert rep.distances == {}

    def test_report_dict_schema(self, edge_triangle):
        rep = limit_experiment(edge_triangle, ThetaPoint.of("2/5", "2/5", "1/2"), 40, 150, seed=6)
        d = rep.to_dict()
        assert set(d) == {
            "motif", "n", "p", "reps", "seed", "regime", "samples",
            "exact_mean_inj", "exact_var_inj", "distances",
            "fitted_poisson_mean", "extras",
        }
        assert set(d["samples"]) == {"injections", "copies"}
