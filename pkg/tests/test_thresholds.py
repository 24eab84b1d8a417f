import math
import random
from fractions import Fraction

import pytest

from muxcount import motifs
from muxcount.errors import InfeasibleTheta, NoEdgesError, NotOnThresholdSurface
from muxcount.multiplex import (
    Multiplex,
    Signature,
    enumerate_submultiplexes,
)
from muxcount.thresholds import (
    BalanceLabel,
    ThetaPoint,
    classify_balance,
    core,
    delta,
    ell,
    extremal_set,
    phi,
)

from conftest import random_multiplex


def theta(a, b, c) -> ThetaPoint:
    return ThetaPoint.of(a, b, c)


class TestEll:
    def test_boundary_segment_value(self):
        assert ell(Signature(3, 2, 0, 1), theta("3/4", "3/4", "3/2")) == 0

    def test_double_edge_at_meeting_point(self):
        assert ell(Signature(2, 0, 0, 1), theta("1/2", "1/2", 2)) == 0

    def test_edgeless_signature(self):
        for v in range(5):
            assert ell(Signature(v, 0, 0, 0), theta(1, "2/3", 7)) == v

    def test_exact_rational(self):
        val = ell(Signature(4, 1, 2, 1), theta("1/3", "1/7", "5/2"))
        assert val == Fraction(4) - Fraction(1, 3) - Fraction(2, 7) - Fraction(5, 2)


class TestDelta:
    def test_strictly_balanced_point(self, edge_triangle):
        value, argmins = delta(edge_triangle, theta("3/4", "3/4", "3/2"))
        assert value == 0
        assert [m.key() for m in argmins] == [
            (edge_triangle.layer1, edge_triangle.layer2)
        ]

    def test_unique_double_edge_minimizer(self, edge_triangle):
        value, argmins = delta(edge_triangle, theta("1/4", "1/4", 2))
        assert value == 0
        assert len(argmins) == 1
        assert argmins[0].key() == (((1, 2),), ((1, 2),))
        assert argmins[0].vertices == frozenset({1, 2})

    def test_deep_interior_positive(self, edge_triangle):
        value, _ = delta(edge_triangle, theta("1/10", "1/10", "1/10"))
        assert value > 0

    def test_no_edges_error(self):
        with pytest.raises(NoEdgesError):
            delta(Multiplex.from_edges(3, [], []), theta(1, 1, 1))


class TestPhi:
    def test_single_edge_closed_form(self):
        value, sig = phi(motifs.single_layer1_edge(), 50, (0.3, 0.5, 0.2))
        assert value == pytest.approx(50 * 50 * 0.3, rel=1e-12)
        assert sig == Signature(2, 1, 0, 0)

    def test_double_edge_closed_form(self, double_edge):
        value, sig = phi(double_edge, 100, (0.2, 0.3, 0.1))
        assert value == pytest.approx(100 * 100 * 0.1, rel=1e-12)
        assert sig == Signature(2, 0, 0, 1)

    def test_edge_triangle_minimizer(self, edge_triangle):
        value, sig = phi(edge_triangle, 100, (0.1, 0.1, 0.01))
        assert value == pytest.approx(100.0, rel=1e-9)
        assert sig == Signature(2, 0, 0, 1)

    def test_sign_agrees_with_delta(self):
        # At p_i = n^(-theta_i), log Phi / log n equals delta exactly.
        rng = random.Random(23)
        n = 50
        for _ in range(40):
            host = random_multiplex(rng)
            t = theta(
                Fraction(rng.randint(1, 12), 8),
                Fraction(rng.randint(1, 12), 8),
                Fraction(rng.randint(1, 12), 8),
            )
            if not t.is_feasible:
                continue
            p = tuple(float(n) ** -float(x) for x in t.as_tuple())
            value, _ = phi(host, n, p)
            d, _ = delta(host, t)
            log_phi = math.log(value)
            if abs(log_phi) > 1e-9:
                assert (log_phi > 0) == (d > 0)
            else:
                assert d == 0


class TestExtremalSet:
    def test_meeting_point_has_both(self, edge_triangle):
        subs = extremal_set(edge_triangle, theta("1/2", "1/2", 2))
        keys = {s.key() for s in subs}
        assert keys == {
            (edge_triangle.layer1, edge_triangle.layer2),
            (((1, 2),), ((1, 2),)),
        }

    def test_perfect_correlation_point_has_three(self, edge_triangle):
        subs = extremal_set(edge_triangle, theta(1, 1, 1))
        keys = {s.key() for s in subs}
        assert keys == {
            (edge_triangle.layer1, edge_triangle.layer2),
            (edge_triangle.layer1, ()),
            (((0, 1), (0, 2)), ((1, 2),)),
        }

    def test_tailed_cycle_has_three(self, tailed_cycle):
        subs = extremal_set(tailed_cycle, theta("5/6", "5/6", "5/6"))
        keys = {s.key() for s in subs}
        full1, full2 = tailed_cycle.layer1, tailed_cycle.layer2
        assert keys == {
            (full1, full2),
            (full1, ((0, 2),)),
            (tuple(e for e in full1 if e != (1, 2)), full2),
        }

    def test_off_surface_rejected(self, edge_triangle):
        with pytest.raises(NotOnThresholdSurface):
            extremal_set(edge_triangle, theta("1/10", "1/10", "1/10"))

    def test_infeasible_rejected(self, edge_triangle):
        with pytest.raises(InfeasibleTheta):
            extremal_set(edge_triangle, theta(1, 1, "1/2"))


class TestClassify:
    def test_strictly_balanced(self, edge_triangle):
        assert (
            classify_balance(edge_triangle, theta("3/4", "3/4", "3/2"))
            is BalanceLabel.STRICTLY_BALANCED
        )

    def test_unbalanced(self, edge_triangle):
        assert (
            classify_balance(edge_triangle, theta("1/4", "1/4", 2))
            is BalanceLabel.UNBALANCED
        )

    def test_balanced_not_strict(self, edge_triangle):
        assert (
            classify_balance(edge_triangle, theta("1/2", "1/2", 2))
            is BalanceLabel.BALANCED_NOT_STRICT
        )

    def test_interior_exterior(self, edge_triangle):
        assert (
            classify_balance(edge_triangle, theta("2/5", "2/5", "1/2"))
            is BalanceLabel.INTERIOR_SATISFIABLE
        )
        assert (
            classify_balance(edge_triangle, theta("6/5", "6/5", "13/10"))
            is BalanceLabel.EXTERIOR_UNSATISFIABLE
        )

    def test_strictly_balanced_implies_unique_extremal(self):
        rng = random.Random(31)
        checked = 0
        while checked < 15:
            host = random_multiplex(rng)
            t0 = theta(
                Fraction(rng.randint(1, 8), 8),
                Fraction(rng.randint(1, 8), 8),
                Fraction(rng.randint(8, 16), 8),
            )
            if not t0.is_feasible:
                continue
            t_star = scale_to_boundary(host, t0)
            checked += 1
            if classify_balance(host, t_star) is BalanceLabel.STRICTLY_BALANCED:
                subs = extremal_set(host, t_star)
                assert [s.key() for s in subs] == [(host.layer1, host.layer2)]


def scale_to_boundary(host: Multiplex, t0: ThetaPoint) -> ThetaPoint:
    """Scale t0 radially until delta == 0 (exact rational line search)."""
    best = None
    for sub in enumerate_submultiplexes(host):
        sig = sub.signature()
        rate = sig.a * t0.theta1 + sig.b * t0.theta2 + sig.c * t0.theta12
        ratio = Fraction(sig.v) / rate
        if best is None or ratio < best:
            best = ratio
    return ThetaPoint(t0.theta1 * best, t0.theta2 * best, t0.theta12 * best)


class TestCore:
    def test_unique_extremal_core_is_double_edge(self, edge_triangle):
        sub = core(edge_triangle, theta("1/4", "1/4", 2))
        assert sub.key() == (((1, 2),), ((1, 2),))
        assert sorted(sub.vertices) == [1, 2]

    def test_meeting_point_core_is_host(self, edge_triangle):
        sub = core(edge_triangle, theta("1/2", "1/2", 2))
        assert sub.key() == (edge_triangle.layer1, edge_triangle.layer2)

    def test_strictly_balanced_core_is_host(self, edge_triangle):
        sub = core(edge_triangle, theta("3/4", "3/4", "3/2"))
        assert sub.key() == (edge_triangle.layer1, edge_triangle.layer2)

    def test_canonical_relabels(self, edge_triangle):
        sub = core(edge_triangle, theta("1/4", "1/4", 2))
        canon = sub.canonical_multiplex()
        assert canon == Multiplex.from_edges(2, [(0, 1)], [(0, 1)])

    def test_core_contains_all_extremal_completions(self):
        rng = random.Random(37)
        from muxcount.multiplex import completion

        checked = 0
        while checked < 20:
            host = random_multiplex(rng)
            t0 = theta(
                Fraction(rng.randint(1, 10), 8),
                Fraction(rng.randint(1, 10), 8),
                Fraction(rng.randint(6, 20), 8),
            )
            if not t0.is_feasible:
                continue
            t_star = scale_to_boundary(host, t0)
            checked += 1
            sub = core(host, t_star)
            assert ell(sub.signature(), t_star) == 0
            for ex in extremal_set(host, t_star):
                assert sub.contains(completion(ex))


def test_theta_point_feasibility_predicate():
    assert theta(1, 1, 1).is_feasible
    assert not theta(1, 1, "1/2").is_feasible
    assert not theta(0, 1, 1).is_feasible
    assert not theta(-1, 1, 2).is_feasible
