"""Exact polyhedral description of the satisfiability region.

The region lives in (theta1, theta2, theta12)-space and is cut out by one
open halfspace per distinct submultiplex signature (the main constraints,
a*theta1 + b*theta2 + c*theta12 < v) intersected with the closed feasibility
cone theta12 >= max(theta1, theta2) and the open positive orthant.  All
geometry is computed in rationals via vertex/ray enumeration of the
homogenization cone, so facet membership and redundancy are equality tests,
never tolerance checks.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NoEdgesError
from .multiplex import Multiplex, Signature, enumerate_submultiplexes
from .thresholds import ThetaPoint, delta_value

Vec = tuple[Fraction, ...]


class Relation(enum.Enum):
    STRICT_LESS = "<"
    LESS_EQ = "<="


@dataclass(frozen=True)
class Constraint:
    """Halfspace coeffs . theta (<|<=) rhs with its provenance."""

    coeffs: Vec
    rhs: Fraction
    relation: Relation
    kind: str  # "main" or "feasibility"
    signature: Signature | None = None
    tag: str | None = None

    def value(self, point: Vec) -> Fraction:
        return sum(c * x for c, x in zip(self.coeffs, point))

    def admits(self, point: Vec) -> bool:
        v = self.value(point)
        return v < self.rhs if self.relation is Relation.STRICT_LESS else v <= self.rhs

    def describe(self) -> str:
        terms = []
        for coef, name in zip(self.coeffs, ("theta1", "theta2", "theta12")[: len(self.coeffs)]):
            if coef:
                terms.append(f"{coef}*{name}")
        lhs = " + ".join(terms) if terms else "0"
        return f"{lhs} {self.relation.value} {self.rhs}"


class Membership(enum.Enum):
    SATISFIABLE = "SATISFIABLE"
    BOUNDARY = "BOUNDARY"
    UNSATISFIABLE = "UNSATISFIABLE"
    INFEASIBLE = "INFEASIBLE"


@dataclass(frozen=True)
class Facet:
    constraint_index: int
    vertex_indices: tuple[int, ...]
    ray_indices: tuple[int, ...]
    open: bool


@dataclass(frozen=True)
class RegionDescription:
    constraints: tuple[Constraint, ...]
    vertices: tuple[Vec, ...]
    rays: tuple[Vec, ...]
    facets: tuple[Facet, ...]
    bounded: bool


@dataclass(frozen=True)
class SliceSegment:
    """One edge of the 2D threshold polyline with its main constraint."""

    start: tuple[Fraction, Fraction]
    end: tuple[Fraction, Fraction] | None  # None when the segment is a ray
    ray: tuple[Fraction, Fraction] | None
    signature: Signature


@dataclass(frozen=True)
class SlicePolyline:
    """Threshold curve of the theta1 = theta2 slice, ordered by falling theta."""

    vertices: tuple[tuple[Fraction, Fraction], ...]
    included: tuple[bool, ...]  # vertex lies on the true threshold surface
    segments: tuple[SliceSegment, ...]


# ---------------------------------------------------------------------------
# exact linear algebra on small integer systems


def _det2(m) -> int:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def _det3(m) -> int:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def _cross(rows: list[tuple[int, ...]]) -> tuple[int, ...]:
    """Generalized cross product: for d rows in R^(d+1), the vector of signed
    maximal minors, which spans the nullspace when the rows are independent
    and is zero otherwise."""
    d = len(rows[0])
    det = _det2 if d == 3 else _det3
    out = []
    sign = 1
    for skip in range(d):
        minor = [[row[k] for k in range(d) if k != skip] for row in rows]
        out.append(sign * det(minor))
        sign = -sign
    return tuple(out)


def _int_cone_rows(constraints: list[Constraint], dim: int) -> list[tuple[int, ...]]:
    """Homogenization rows (coeffs, -rhs) scaled to integers, plus t >= 0."""
    rows = []
    for c in constraints:
        entries = list(c.coeffs) + [-c.rhs]
        scale = math.lcm(*(x.denominator for x in entries))
        rows.append(tuple(int(x * scale) for x in entries))
    rows.append(tuple([0] * dim + [-1]))
    return rows


def _enumerate_v_rep(
    constraints: list[Constraint], dim: int
) -> tuple[list[Vec], list[Vec]]:
    """Vertices and extreme rays of the closure, via extreme rays of the
    homogenization cone in R^(dim+1)."""
    rows = _int_cone_rows(constraints, dim)
    d = dim + 1
    vertices: dict[Vec, None] = {}
    rays: dict[Vec, None] = {}
    for combo in itertools.combinations(rows, dim):
        direction = _cross(list(combo))
        if not any(direction):
            continue
        for cand in (direction, tuple(-x for x in direction)):
            if all(
                sum(r[k] * cand[k] for k in range(d)) <= 0 for r in rows
            ):
                t = cand[-1]
                if t > 0:
                    point = tuple(Fraction(x, t) for x in cand[:-1])
                    vertices.setdefault(point)
                else:
                    g = math.gcd(*(abs(x) for x in cand))
                    scaled = tuple(Fraction(x, g) for x in cand[:-1])
                    rays.setdefault(scaled)
                break
    return sorted(vertices), sorted(rays)


def _facet_defining(
    constraints: list[Constraint], dim: int
) -> list[bool]:
    """A constraint is kept iff its active extreme rays of the homogenization
    cone span rank dim (it supports a facet of the full-dimensional closure)."""
    verts, rays = _enumerate_v_rep(constraints, dim)
    cone_pts = [tuple(v) + (Fraction(1),) for v in verts] + [tuple(r) + (Fraction(0),) for r in rays]
    keep = []
    for c in constraints:
        row = tuple(c.coeffs) + (-c.rhs,)
        active = [p for p in cone_pts if sum(r * x for r, x in zip(row, p)) == 0]
        keep.append(_rank(active) == dim)
    return keep


def _rank(vectors: list[Vec]) -> int:
    mat = [list(v) for v in vectors]
    rank = 0
    cols = len(mat[0]) if mat else 0
    for col in range(cols):
        pivot = next((i for i in range(rank, len(mat)) if mat[i][col] != 0), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = mat[rank][col]
        mat[rank] = [x / inv for x in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[rank])]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# constraint assembly


def _main_signatures(host: Multiplex) -> list[Signature]:
    if host.n_edges < 1:
        raise NoEdgesError("the region is defined for hosts with at least one edge")
    seen: set[Signature] = set()
    for sub in enumerate_submultiplexes(host, min_edges=1):
        seen.add(sub.signature())
    return sorted(seen)


def _normalized_main(sig: Signature) -> tuple[Vec, Fraction]:
    from math import gcd

    g = gcd(gcd(sig.a, sig.b), gcd(sig.c, sig.v))
    g = g or 1
    return (
        (Fraction(sig.a, g), Fraction(sig.b, g), Fraction(sig.c, g)),
        Fraction(sig.v, g),
    )


def _base_constraints() -> list[Constraint]:
    zero, one = Fraction(0), Fraction(1)
    return [
        Constraint((-one, zero, zero), zero, Relation.STRICT_LESS, "feasibility", tag="theta1>0"),
        Constraint((zero, -one, zero), zero, Relation.STRICT_LESS, "feasibility", tag="theta2>0"),
        Constraint((zero, zero, -one), zero, Relation.STRICT_LESS, "feasibility", tag="theta12>0"),
        Constraint((one, zero, -one), zero, Relation.LESS_EQ, "feasibility", tag="theta12>=theta1"),
        Constraint((zero, one, -one), zero, Relation.LESS_EQ, "feasibility", tag="theta12>=theta2"),
    ]


def constraints(host: Multiplex) -> list[Constraint]:
    """Irredundant main constraints followed by the five feasibility ones.

    A main constraint survives iff it supports a facet of the closed region
    (re-adding a pruned one never changes the vertex/ray sets).  Duplicate
    halfplanes from proportional signatures are merged on the smallest
    signature.
    """
    mains: dict[tuple[Vec, Fraction], Signature] = {}
    for sig in _main_signatures(host):
        key = _normalized_main(sig)
        if key not in mains or sig < mains[key]:
            mains[key] = sig
    main_list = [
        Constraint(
            (Fraction(sig.a), Fraction(sig.b), Fraction(sig.c)),
            Fraction(sig.v),
            Relation.STRICT_LESS,
            "main",
            signature=sig,
        )
        for key, sig in sorted(mains.items(), key=lambda kv: kv[1])
    ]
    base = _base_constraints()
    keep = _facet_defining(main_list + base, 3)
    kept_main = [c for c, k in zip(main_list, keep[: len(main_list)]) if k]
    return kept_main + base


def polyhedron(host: Multiplex) -> RegionDescription:
    """Full V-representation of the closed region with per-facet open flags."""
    cons = constraints(host)
    verts, rays = _enumerate_v_rep(cons, 3)
    facets = []
    for idx, c in enumerate(cons):
        v_idx = tuple(i for i, v in enumerate(verts) if c.value(v) == c.rhs)
        r_idx = tuple(
            i for i, r in enumerate(rays) if sum(a * x for a, x in zip(c.coeffs, r)) == 0
        )
        facets.append(
            Facet(
                constraint_index=idx,
                vertex_indices=v_idx,
                ray_indices=r_idx,
                open=c.relation is Relation.STRICT_LESS,
            )
        )
    return RegionDescription(
        constraints=tuple(cons),
        vertices=tuple(verts),
        rays=tuple(rays),
        facets=tuple(facets),
        bounded=not rays,
    )


# ---------------------------------------------------------------------------
# the theta1 = theta2 slice


def _slice_constraints(host: Multiplex) -> list[Constraint]:
    zero, one = Fraction(0), Fraction(1)
    mains: dict[tuple[Vec, Fraction], Signature] = {}
    for sig in _main_signatures(host):
        coeffs = (Fraction(sig.a + sig.b), Fraction(sig.c))
        rhs = Fraction(sig.v)
        from math import gcd

        g = gcd(gcd(sig.a + sig.b, sig.c), sig.v) or 1
        key = (tuple(x / g for x in coeffs), rhs / g)
        if key not in mains or sig < mains[key]:
            mains[key] = sig
    main_list = [
        Constraint(
            (Fraction(sig.a + sig.b), Fraction(sig.c)),
            Fraction(sig.v),
            Relation.STRICT_LESS,
            "main",
            signature=sig,
        )
        for key, sig in sorted(mains.items(), key=lambda kv: kv[1])
    ]
    base = [
        Constraint((-one, zero), zero, Relation.STRICT_LESS, "feasibility", tag="theta>0"),
        Constraint((zero, -one), zero, Relation.STRICT_LESS, "feasibility", tag="theta12>0"),
        Constraint((one, -one), zero, Relation.LESS_EQ, "feasibility", tag="theta12>=theta"),
    ]
    keep = _facet_defining(main_list + base, 2)
    kept_main = [c for c, k in zip(main_list, keep[: len(main_list)]) if k]
    return kept_main + base


def slice2d(host: Multiplex) -> SlicePolyline:
    """Threshold polyline of the region sliced at theta1 = theta2.

    Vertices are ordered by decreasing theta; each carries a flag saying
    whether it lies on the true threshold surface (a vertex on the theta = 0
    axis does not).  Segments keep the signature of their main constraint;
    an unbounded final segment is reported as a ray.
    """
    cons = _slice_constraints(host)
    verts, rays = _enumerate_v_rep(cons, 2)
    segments: list[SliceSegment] = []
    for c in cons:
        if c.kind != "main":
            continue
        active_v = [v for v in verts if c.value(v) == c.rhs]
        active_r = [
            r for r in rays if sum(a * x for a, x in zip(c.coeffs, r)) == 0
        ]
        active_v.sort(key=lambda v: (-v[0], v[1]))
        if len(active_v) == 2:
            segments.append(
                SliceSegment(start=active_v[0], end=active_v[1], ray=None, signature=c.signature)
            )
        elif len(active_v) == 1 and active_r:
            segments.append(
                SliceSegment(start=active_v[0], end=None, ray=active_r[0], signature=c.signature)
            )
    segments.sort(key=lambda s: (-s.start[0], -(s.end or s.start)[0]))
    ordered: list[tuple[Fraction, Fraction]] = []
    for seg in segments:
        for pt in (seg.start, seg.end):
            if pt is not None and pt not in ordered:
                ordered.append(pt)
    ordered.sort(key=lambda v: (-v[0], v[1]))
    included = tuple(v[0] > 0 and v[1] > 0 and v[1] >= v[0] for v in ordered)
    return SlicePolyline(vertices=tuple(ordered), included=included, segments=tuple(segments))


def membership(host: Multiplex, theta: ThetaPoint) -> Membership:
    """Exact sign of delta mapped to a region label; INFEASIBLE outside Theta."""
    if not theta.is_feasible:
        return Membership.INFEASIBLE
    value = delta_value(host, theta)
    if value > 0:
        return Membership.SATISFIABLE
    if value < 0:
        return Membership.UNSATISFIABLE
    return Membership.BOUNDARY
