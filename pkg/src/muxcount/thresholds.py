"""Exact threshold machinery: exponent forms, extremal sets, balance, core.

All boundary arithmetic is exact rational (membership in the threshold
surface is an equality test).  Only phi(), which mixes real probabilities
with the graph size, works in floating point, in log space.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import (
    CoreInvariantError,
    InfeasibleTheta,
    NoEdgesError,
    NotOnThresholdSurface,
    ValidationError,
)
from .multiplex import (
    Multiplex,
    Signature,
    Submultiplex,
    completion,
    edge_class_counts,
    enumerate_submultiplexes,
    submultiplex_union,
)

#: Ties in phi's log-space minimization closer than this are broken
#: structurally (smaller v, then lexicographic (a, b, c)).
PHI_LOG_TIE_TOL = 1e-12

RationalLike = Fraction | int | str | float


def _as_fraction(x: RationalLike) -> Fraction:
    if isinstance(x, float):
        # Exact binary value of the float; callers wanting decimal semantics
        # should pass strings ("0.75") or Fractions.
        return Fraction(x)
    return Fraction(x)


@dataclass(frozen=True)
class ThetaPoint:
    """Exact exponent triple parameterizing p_i = n^(-theta_i)."""

    theta1: Fraction
    theta2: Fraction
    theta12: Fraction

    @classmethod
    def of(cls, theta1: RationalLike, theta2: RationalLike, theta12: RationalLike) -> "ThetaPoint":
        return cls(_as_fraction(theta1), _as_fraction(theta2), _as_fraction(theta12))

    @cached_property
    def is_feasible(self) -> bool:
        """Membership in {theta1, theta2 > 0 and theta12 >= max(theta1, theta2)}."""
        return (
            self.theta1 > 0
            and self.theta2 > 0
            and self.theta12 >= self.theta1
            and self.theta12 >= self.theta2
        )

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.theta1, self.theta2, self.theta12)

    def require_feasible(self) -> "ThetaPoint":
        if not self.is_feasible:
            raise InfeasibleTheta(
                f"theta=({self.theta1}, {self.theta2}, {self.theta12}) violates "
                "theta1, theta2 > 0 and theta12 >= max(theta1, theta2)"
            )
        return self


class BalanceLabel(enum.Enum):
    INTERIOR_SATISFIABLE = "INTERIOR_SATISFIABLE"
    EXTERIOR_UNSATISFIABLE = "EXTERIOR_UNSATISFIABLE"
    STRICTLY_BALANCED = "STRICTLY_BALANCED"
    BALANCED_NOT_STRICT = "BALANCED_NOT_STRICT"
    UNBALANCED = "UNBALANCED"


def ell(sig: Signature, theta: ThetaPoint) -> Fraction:
    """v - a*theta1 - b*theta2 - c*theta12, exactly."""
    return (
        Fraction(sig.v)
        - sig.a * theta.theta1
        - sig.b * theta.theta2
        - sig.c * theta.theta12
    )


def _edge_bearing(host: Multiplex) -> list[Submultiplex]:
    if host.n_edges < 1:
        raise NoEdgesError("the minimization runs over submultiplexes with at least one edge")
    return list(enumerate_submultiplexes(host, min_edges=1))


def delta(host: Multiplex, theta: ThetaPoint) -> tuple[Fraction, list[Submultiplex]]:
    """Minimum of ell over edge-bearing submultiplexes, with all minimizers."""
    best: Fraction | None = None
    argmins: list[Submultiplex] = []
    cache: dict[Signature, Fraction] = {}
    for sub in _edge_bearing(host):
        sig = sub.signature()
        val = cache.get(sig)
        if val is None:
            val = ell(sig, theta)
            cache[sig] = val
        if best is None or val < best:
            best = val
            argmins = [sub]
        elif val == best:
            argmins.append(sub)
    assert best is not None
    return best, argmins


def delta_value(host: Multiplex, theta: ThetaPoint) -> Fraction:
    """delta without materializing the argmin set (same enumeration)."""
    return delta(host, theta)[0]


def phi(host: Multiplex, n: int, p) -> tuple[float, Signature]:
    """Minimum of n^v p1^a p2^b p12^c over submultiplex signatures (log space).

    Ties within PHI_LOG_TIE_TOL of the minimum are resolved toward the
    smallest v, then lexicographic (a, b, c).  Returns (value, argmin
    signature).
    """
    from .sampler import as_prob_triple  # deferred: sampler imports this module's types

    prob = as_prob_triple(p)
    if n < host.n:
        raise ValidationError(f"n={n} is smaller than the motif's vertex count {host.n}")
    logs = (math.log(n), math.log(prob.p1), math.log(prob.p2), math.log(prob.p12))
    seen: set[Signature] = set()
    entries: list[tuple[float, Signature]] = []
    for sub in _edge_bearing(host):
        sig = sub.signature()
        if sig in seen:
            continue
        seen.add(sig)
        logval = sig.v * logs[0] + sig.a * logs[1] + sig.b * logs[2] + sig.c * logs[3]
        entries.append((logval, sig))
    low = min(e[0] for e in entries)
    tied = [sig for logval, sig in entries if logval <= low + PHI_LOG_TIE_TOL]
    argmin = min(tied, key=lambda s: (s.v, s.a, s.b, s.c))
    try:
        value = math.exp(low)
    except OverflowError:
        value = math.inf
    return value, argmin


def extremal_set(host: Multiplex, theta: ThetaPoint) -> list[Submultiplex]:
    """All submultiplexes with ell == 0; theta must lie on the threshold surface."""
    value, argmins = delta(host, theta.require_feasible())
    if value != 0:
        raise NotOnThresholdSurface(
            f"delta(H, theta) = {value} != 0; the extremal set is defined on the surface only"
        )
    return argmins


def classify_balance(host: Multiplex, theta: ThetaPoint) -> BalanceLabel:
    """Position of theta relative to the region, refined on the surface.

    On the surface the label depends on whether the host itself and/or a
    proper submultiplex attains ell == 0.
    """
    theta.require_feasible()
    value, argmins = delta(host, theta)
    if value > 0:
        return BalanceLabel.INTERIOR_SATISFIABLE
    if value < 0:
        return BalanceLabel.EXTERIOR_UNSATISFIABLE
    full_key = (host.layer1, host.layer2)
    ell_host = ell(edge_class_counts(host), theta)
    proper_hit = any(sub.key() != full_key for sub in argmins)
    if ell_host == 0:
        return BalanceLabel.BALANCED_NOT_STRICT if proper_hit else BalanceLabel.STRICTLY_BALANCED
    return BalanceLabel.UNBALANCED


def core(host: Multiplex, theta: ThetaPoint) -> Submultiplex:
    """Largest extremal submultiplex: the union of completions of all of them.

    Postconditions (ell == 0 for the union, every completed extremal is
    contained in it) are verified and raise CoreInvariantError on failure.
    """
    extremals = extremal_set(host, theta)
    completions = [completion(sub) for sub in extremals]
    result = completions[0]
    for comp in completions[1:]:
        result = submultiplex_union(result, comp)
    if ell(result.signature(), theta) != 0:
        raise CoreInvariantError(
            "union of completed extremal submultiplexes is not extremal; "
            f"ell = {ell(result.signature(), theta)}"
        )
    for comp in completions:
        if not result.contains(comp):
            raise CoreInvariantError("a completed extremal submultiplex escapes the core")
    return result
