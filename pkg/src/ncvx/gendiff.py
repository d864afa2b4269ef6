"""Generalized differentiation over the punctured-polyhedron model.

Normal cones depend only on closures, so the normal cone of a punctured
set is the normal cone of its carrier: the conic hull of the active
inequality normals plus the span of the equality normals at the base
point.  Coderivatives are slices of graph normal cones, subdifferentials
are slices of epigraph normal cones, and every calculus rule below
computes its left side directly, realizes the right side of the
corresponding identity as an exact polyhedral construction, and certifies
equality through dual-representation set comparison.

Each rule checks its relative-interior qualification first and refuses to
certify without it; the counterexamples live in the set layer, not here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from . import ncfunc, ncset, svmap
from .errors import (
    DimensionMismatch,
    InternalCheckError,
    PointNotInDomainError,
    PointNotInGraphError,
    PointNotInSetError,
    QualificationFailedError,
)
from .ncfunc import NCFunction
from .ncset import EXACT, PuncturedPolyhedron
from .polyhedron import Polyhedron, ri_meet
from .rational import ONE, Rat, Vec, ZERO, dot, rat, unit, vec, vscale, zeros
from .svmap import SVMap


class PolyCone:
    """A polyhedral cone with apex at the origin, both descriptions on demand."""

    def __init__(self, poly: Polyhedron):
        self.poly = poly
        self.n = poly.n

    @staticmethod
    def from_generators(rays, lines, n: int) -> "PolyCone":
        return PolyCone(
            Polyhedron.from_genrep([zeros(n)], tuple(rays), tuple(lines), n=n)
        )

    @staticmethod
    def zero(n: int) -> "PolyCone":
        return PolyCone.from_generators((), (), n)

    def contains(self, v) -> bool:
        return self.poly.contains(v)

    def rays_and_lines(self):
        g = self.poly.canonical_genrep()
        return g.rays, g.lines

    def minkowski_sum(self, other: "PolyCone") -> "PolyCone":
        r1, l1 = self.poly.genrep.rays, self.poly.genrep.lines
        r2, l2 = other.poly.genrep.rays, other.poly.genrep.lines
        return PolyCone.from_generators(r1 + r2, l1 + l2, self.n)

    def set_equal(self, other: "PolyCone") -> bool:
        return self.poly.set_equal(other.poly)

    def is_zero(self) -> bool:
        return self.poly.set_equal(Polyhedron.singleton(zeros(self.n)))

    def validate(self) -> None:
        if not self.poly.contains(zeros(self.n)):
            raise InternalCheckError("cone misses the origin")
        c = self.poly.canonical_hrep()
        if any(b != 0 for b in c.ineq_rhs) or any(d != 0 for d in c.eq_rhs):
            raise InternalCheckError("cone constraint system is not homogeneous")

    def __repr__(self):
        return f"PolyCone(n={self.n})"


def _weak_membership(omega: PuncturedPolyhedron, x: Vec) -> bool:
    """Pointwise membership at EXACT fidelity, carrier membership otherwise."""
    if omega.fidelity == EXACT:
        return ncset.membership(omega, x)
    return omega.carrier.contains(x)


def carrier_normal_cone(p: Polyhedron, xbar: Vec) -> PolyCone:
    """Active-constraint normal cone of a polyhedron at a member point.

    Valid for redundant descriptions too: every valid inequality active at
    the point contributes a true normal vector.
    """
    c = p.reduced_hrep()
    rays = [a for a, b in zip(c.ineq_mat, c.ineq_rhs) if dot(a, xbar) == b]
    return PolyCone.from_generators(rays, c.eq_mat, p.n)


def normal_cone(omega: PuncturedPolyhedron, xbar) -> PolyCone:
    """Normal cone at a point of the set; depends only on the closure."""
    xbar = vec(xbar)
    if not _weak_membership(omega, xbar):
        raise PointNotInSetError(f"{xbar} is not in the set")
    return carrier_normal_cone(omega.carrier, xbar)


def normal_cone_oracle(cone: PolyCone, carrier: Polyhedron, xbar: Vec) -> bool:
    """Finite generator check that ``cone`` is exactly the normal cone.

    Soundness: every cone generator must weakly separate the carrier's
    generators from the base point.  Maximality: the active-constraint
    cone must be contained back, which set equality already certifies;
    here the containment is rechecked from raw generator inequalities.
    """
    g = carrier.genrep
    rays, lines = cone.rays_and_lines()
    for v in list(rays) + list(lines) + [vscale(-1, l) for l in lines]:
        for p in g.points:
            if dot(v, p) > dot(v, xbar):
                return False
        for r in list(g.rays) + list(g.lines) + [vscale(-1, l) for l in g.lines]:
            if dot(v, r) > 0:
                return False
    return cone.set_equal(carrier_normal_cone(carrier, xbar))


def _substitute_last_block(poly: Polyhedron, fixed: Vec) -> Polyhedron:
    """``{u : (u, fixed) in poly}`` as a polyhedron over the leading block."""
    k = poly.n - len(fixed)
    m_rows = [unit(k, i) for i in range(k)] + [zeros(k) for _ in fixed]
    return poly.linear_preimage(m_rows, zeros(k) + tuple(fixed))


def coderivative(f: SVMap, xbar, ybar, v) -> Polyhedron:
    """``{u : (u, -v)`` normal to the graph at ``(xbar, ybar)}``.

    Normal cones depend only on the closure of the graph, so the base pair
    is admitted anywhere on the graph carrier, punctured or not.
    """
    xbar, ybar, v = vec(xbar), vec(ybar), vec(v)
    if len(xbar) != f.n or len(ybar) != f.p or len(v) != f.p:
        raise DimensionMismatch("coderivative arguments have wrong dimensions")
    point = xbar + ybar
    if not f.graph.carrier.contains(point):
        raise PointNotInGraphError(f"({xbar}, {ybar}) is not on the graph closure")
    cone = carrier_normal_cone(f.graph.carrier, point)
    return _substitute_last_block(cone.poly, tuple(-x for x in v))


def subdifferential(f: NCFunction, xbar) -> Polyhedron:
    """Subgradients at ``xbar``, via the epigraph normal cone at height f(xbar)."""
    xbar = vec(xbar)
    if f.dom.fidelity == EXACT:
        if not ncset.membership(f.dom, xbar):
            raise PointNotInDomainError(f"{xbar} is not in the domain")
    elif not f.dom.carrier.contains(xbar):
        raise PointNotInDomainError(f"{xbar} is not in the domain carrier")
    epi = ncfunc.epigraph_set(f)
    cone = carrier_normal_cone(epi.carrier, xbar + (f.base(xbar),))
    return _substitute_last_block(cone.poly, (-ONE,))


def subgradient_oracle(f: NCFunction, xbar, v) -> bool:
    """Definitional LP test: ``v`` supports ``f`` globally at ``xbar``.

    Minimizes ``lambda - <v, x>`` over the epigraph carrier; ``v`` is a
    subgradient exactly when the minimum equals ``f(xbar) - <v, xbar>``.
    """
    from . import lp

    xbar, v = vec(xbar), vec(v)
    epi = ncfunc.epigraph_set(f)
    h = epi.carrier.hrep
    objective = tuple(-c for c in v) + (ONE,)
    res = lp.lp_solve(
        lp.LPProblem(objective, lp.MIN, h.ineq_mat, h.ineq_rhs, h.eq_mat, h.eq_rhs)
    )
    target = f.base(xbar) - dot(v, xbar)
    return isinstance(res, lp.Optimal) and res.value == target


@dataclass(frozen=True)
class ConeRuleReport:
    lhs: PolyCone
    rhs: PolyCone
    equal: bool


def normal_cone_intersection(
    o1: PuncturedPolyhedron, o2: PuncturedPolyhedron, xbar
) -> ConeRuleReport:
    """Certified identity: normals to the intersection split as a cone sum."""
    xbar = vec(xbar)
    if ri_meet([o1.carrier, o2.carrier]) is None:
        raise QualificationFailedError("relative interiors of the operands are disjoint")
    if not (_weak_membership(o1, xbar) and _weak_membership(o2, xbar)):
        raise PointNotInSetError(f"{xbar} must belong to both sets")
    inter, _ = ncset.intersect(o1, o2)
    lhs = normal_cone(inter, xbar)
    rhs = normal_cone(o1, xbar).minkowski_sum(normal_cone(o2, xbar))
    return ConeRuleReport(lhs=lhs, rhs=rhs, equal=lhs.set_equal(rhs))


def _find_two_members(pp: PuncturedPolyhedron):
    """Up to two distinct exact members, deterministic order."""
    first = ncset.find_member(pp)
    candidates = [first]
    g = pp.carrier.genrep
    targets = list(g.points) + [tuple(a + b for a, b in zip(first, r)) for r in g.rays]
    steps = [Rat(1, 2), Rat(1, 4), Rat(3, 4)]
    for target in targets:
        for t in steps:
            cand = tuple(a + t * (b - a) for a, b in zip(first, target))
            if cand != first and ncset.membership(pp, cand):
                return first, cand
        if target != first and ncset.membership(pp, target):
            return first, target
    return (first,)


@dataclass(frozen=True)
class CoderivSumReport:
    lhs: Polyhedron
    rhs: Polyhedron
    s_points: tuple
    equal: bool
    decomposition_independent: bool


def coderivative_sum_rule(f1: SVMap, f2: SVMap, xbar, ybar, v) -> CoderivSumReport:
    """Coderivative of a sum against the sum of coderivatives.

    A decomposition ``ybar = y1 + y2`` with ``yi`` in the pointwise values
    is found inside the punctured decomposition set; when a second
    decomposition exists the right side is recomputed there and must not
    change.
    """
    xbar, ybar, v = vec(xbar), vec(ybar), vec(v)
    if ri_meet([svmap.domain(f1).carrier, svmap.domain(f2).carrier]) is None:
        raise QualificationFailedError("relative interiors of the domains are disjoint")
    total, _ = svmap.sum_maps(f1, f2)
    if not _weak_membership(total.graph, xbar + ybar):
        raise PointNotInGraphError(f"({xbar}, {ybar}) is not on the sum's graph")
    p = f1.p
    val1 = svmap.value(f1, xbar)
    val2 = svmap.value(f2, xbar)
    pair_space = ncset.product(val1, val2)
    diag = Polyhedron.from_hrep(
        (),
        (),
        [tuple(ONE if j == i or j == p + i else ZERO for j in range(2 * p)) for i in range(p)],
        ybar,
        n=2 * p,
    )
    s_set, _ = ncset.intersect(pair_space, PuncturedPolyhedron(diag))
    decomps = _find_two_members(s_set)
    s_points = tuple((d[:p], d[p:]) for d in decomps)
    y1, y2 = s_points[0]
    lhs = coderivative(total, xbar, ybar, v)
    rhs = coderivative(f1, xbar, y1, v).minkowski_sum(coderivative(f2, xbar, y2, v))
    independent = True
    if len(s_points) > 1:
        z1, z2 = s_points[1]
        rhs2 = coderivative(f1, xbar, z1, v).minkowski_sum(
            coderivative(f2, xbar, z2, v)
        )
        independent = rhs.set_equal(rhs2)
    return CoderivSumReport(
        lhs=lhs,
        rhs=rhs,
        s_points=s_points,
        equal=lhs.set_equal(rhs),
        decomposition_independent=independent,
    )


@dataclass(frozen=True)
class CoderivChainReport:
    lhs: Polyhedron
    rhs: Polyhedron
    m_point: Vec
    equal: bool


def coderivative_chain_rule(g: SVMap, f: SVMap, xbar, zbar, w) -> CoderivChainReport:
    """Coderivative of a composition against the composed coderivatives.

    The right side is the projection onto ``u`` of one homogeneous system
    coupling the two graph normal cones through the intermediate dual
    variable.
    """
    xbar, zbar, w = vec(xbar), vec(zbar), vec(w)
    if ri_meet([svmap.range_of(f).carrier, svmap.domain(g).carrier]) is None:
        raise QualificationFailedError(
            "relative interior of the inner range misses the outer domain"
        )
    composed, _ = svmap.compose(g, f)
    if not _weak_membership(composed.graph, xbar + zbar):
        raise PointNotInGraphError(f"({xbar}, {zbar}) is not on the composition's graph")
    middle, _ = ncset.intersect(
        svmap.value(f, xbar), svmap.value(svmap.inverse(g), zbar)
    )
    ybar = ncset.find_member(middle)
    lhs = coderivative(composed, xbar, zbar, w)

    n, p = f.n, f.p
    nf = carrier_normal_cone(f.graph.carrier, xbar + ybar).poly.hrep
    ng = carrier_normal_cone(g.graph.carrier, ybar + zbar).poly.hrep
    ineq, rhs, eq, eq_rhs = [], [], [], []
    for a, b in zip(nf.ineq_mat, nf.ineq_rhs):
        ineq.append(tuple(a[:n]) + tuple(-x for x in a[n:]))
        rhs.append(b)
    for a, b in zip(nf.eq_mat, nf.eq_rhs):
        eq.append(tuple(a[:n]) + tuple(-x for x in a[n:]))
        eq_rhs.append(b)
    for a, b in zip(ng.ineq_mat, ng.ineq_rhs):
        ineq.append(zeros(n) + tuple(a[:p]))
        rhs.append(b + dot(a[p:], w))
    for a, b in zip(ng.eq_mat, ng.eq_rhs):
        eq.append(zeros(n) + tuple(a[:p]))
        eq_rhs.append(b + dot(a[p:], w))
    coupled = Polyhedron.from_hrep(ineq, rhs, eq, eq_rhs, n=n + p)
    rhs_poly = coupled.project(list(range(n)))
    return CoderivChainReport(
        lhs=lhs, rhs=rhs_poly, m_point=ybar, equal=lhs.set_equal(rhs_poly)
    )


@dataclass(frozen=True)
class CoderivIntersectReport:
    lhs: Polyhedron
    rhs: Polyhedron
    equal: bool


def coderivative_intersection_rule(
    maps: Sequence[SVMap], xbar, ybar, ystar
) -> CoderivIntersectReport:
    """Coderivative of an intersection mapping against split dual sums.

    The right side realizes the union over decompositions
    ``ystar = sum y*_i`` exactly: one polyhedron over all blocks
    ``(u, u_i, y*_i)`` with each pair in its graph normal cone, projected
    onto ``u``.
    """
    maps = list(maps)
    xbar, ybar, ystar = vec(xbar), vec(ybar), vec(ystar)
    if ri_meet([m.graph.carrier for m in maps]) is None:
        raise QualificationFailedError("relative interiors of the graphs are disjoint")
    for m in maps:
        if not _weak_membership(m.graph, xbar + ybar):
            raise PointNotInGraphError(f"({xbar}, {ybar}) must be on every graph")
    inter, _ = svmap.intersection_mapping(maps)
    lhs = coderivative(inter, xbar, ybar, ystar)

    n, p, k = maps[0].n, maps[0].p, len(maps)
    total = n + k * (n + p)
    u_of = lambda i, j: n + i * n + j
    y_of = lambda i, j: n + k * n + i * p + j
    ineq, rhs, eq, eq_rhs = [], [], [], []
    for i, m in enumerate(maps):
        cone = carrier_normal_cone(m.graph.carrier, xbar + ybar).poly.hrep
        for a, b in zip(cone.ineq_mat, cone.ineq_rhs):
            row = [ZERO] * total
            for j in range(n):
                row[u_of(i, j)] = a[j]
            for j in range(p):
                row[y_of(i, j)] = -a[n + j]
            ineq.append(tuple(row))
            rhs.append(b)
        for a, b in zip(cone.eq_mat, cone.eq_rhs):
            row = [ZERO] * total
            for j in range(n):
                row[u_of(i, j)] = a[j]
            for j in range(p):
                row[y_of(i, j)] = -a[n + j]
            eq.append(tuple(row))
            eq_rhs.append(b)
    for j in range(n):
        row = [ZERO] * total
        row[j] = -ONE
        for i in range(k):
            row[u_of(i, j)] = ONE
        eq.append(tuple(row))
        eq_rhs.append(ZERO)
    for j in range(p):
        row = [ZERO] * total
        for i in range(k):
            row[y_of(i, j)] = ONE
        eq.append(tuple(row))
        eq_rhs.append(ystar[j])
    big = Polyhedron.from_hrep(ineq, rhs, eq, eq_rhs, n=total)
    rhs_poly = big.project(list(range(n)))
    return CoderivIntersectReport(
        lhs=lhs, rhs=rhs_poly, equal=lhs.set_equal(rhs_poly)
    )


@dataclass(frozen=True)
class EpiNormalReport:
    """Outcome of the epigraph normal-cone checks at one base point."""

    descent_signs: bool
    subdiff_nonempty: Optional[bool]
    above_graph_trivial: Optional[bool]
    horizontal_matches_domain: bool
    scaled_matches_subdifferential: bool

    def all_pass(self) -> bool:
        return all(
            flag is not False
            for flag in (
                self.descent_signs,
                self.subdiff_nonempty,
                self.above_graph_trivial,
                self.horizontal_matches_domain,
                self.scaled_matches_subdifferential,
            )
        )


def epi_normal_properties(f: NCFunction, xbar, probe=1) -> EpiNormalReport:
    """Verify the structural facts about epigraph normals at ``xbar``.

    ``probe`` is a positive rational used both as the scaling factor and
    as the height offset for the above-graph check.
    """
    xbar = vec(xbar)
    alpha = rat(probe)
    if alpha <= 0:
        raise DimensionMismatch("probe must be positive")
    ncfunc.require_nearly_convex(f)
    if f.dom.fidelity == EXACT and not ncset.membership(f.dom, xbar):
        raise PointNotInDomainError(f"{xbar} is not in the domain")
    epi = ncfunc.epigraph_set(f)
    cone = carrier_normal_cone(epi.carrier, xbar + (f.base(xbar),))
    rays, lines = cone.rays_and_lines()
    descent = all(r[-1] <= 0 for r in rays) and all(l[-1] == 0 for l in lines)

    sub = subdifferential(f, xbar)
    subdiff_nonempty = None
    if f.dom.carrier.ri_contains(xbar):
        subdiff_nonempty = not sub.is_empty()

    above_trivial = None
    if f.dom.carrier.dim() == f.n and f.dom.carrier.ri_contains(xbar):
        above = carrier_normal_cone(epi.carrier, xbar + (f.base(xbar) + alpha,))
        above_trivial = above.is_zero()

    horizontal = _substitute_last_block(cone.poly, (ZERO,))
    dom_cone = normal_cone(f.dom, xbar) if f.dom.fidelity == EXACT else carrier_normal_cone(
        f.dom.carrier, xbar
    )
    horizontal_ok = horizontal.set_equal(dom_cone.poly)

    slice_alpha = _substitute_last_block(cone.poly, (-alpha,))
    scaled = sub.linear_image(
        [[alpha if j == i else ZERO for j in range(f.n)] for i in range(f.n)]
    )
    scaled_ok = slice_alpha.set_equal(scaled)

    return EpiNormalReport(
        descent_signs=descent,
        subdiff_nonempty=subdiff_nonempty,
        above_graph_trivial=above_trivial,
        horizontal_matches_domain=horizontal_ok,
        scaled_matches_subdifferential=scaled_ok,
    )


@dataclass(frozen=True)
class SubdiffRuleReport:
    lhs: Polyhedron
    rhs: Polyhedron
    equal: bool
    active_set: tuple = ()


def subdiff_sum_rule(fs: Sequence[NCFunction], xbar) -> SubdiffRuleReport:
    """Subdifferential of a sum against the Minkowski sum of subdifferentials."""
    fs = list(fs)
    xbar = vec(xbar)
    if ri_meet([f.dom.carrier for f in fs]) is None:
        raise QualificationFailedError("relative interiors of the domains are disjoint")
    for f in fs:
        if f.dom.fidelity == EXACT and not ncset.membership(f.dom, xbar):
            raise PointNotInDomainError(f"{xbar} must be in every domain")
    total = fs[0]
    for f in fs[1:]:
        total, _ = ncfunc.add(total, f)
    lhs = subdifferential(total, xbar)
    rhs = subdifferential(fs[0], xbar)
    for f in fs[1:]:
        rhs = rhs.minkowski_sum(subdifferential(f, xbar))
    return SubdiffRuleReport(lhs=lhs, rhs=rhs, equal=lhs.set_equal(rhs))


def subdiff_chain_affine(g: NCFunction, a, b, xbar) -> SubdiffRuleReport:
    """Affine precomposition: subgradients pull back through the adjoint."""
    xbar = vec(xbar)
    rows = [vec(r) for r in a]
    b = vec(b)
    composed, report = ncfunc.precompose_affine(g, rows, b)
    if not report.holds:
        raise QualificationFailedError("affine range misses the relative interior of the domain")
    if composed.dom.fidelity == EXACT and not ncset.membership(composed.dom, xbar):
        raise PointNotInDomainError(f"{xbar} is not in the composed domain")
    lhs = subdifferential(composed, xbar)
    image_point = tuple(dot(r, xbar) for r in rows)
    target = tuple(x + y for x, y in zip(image_point, b))
    inner = subdifferential(g, target)
    adjoint = list(zip(*rows)) if rows else []
    rhs = inner.linear_image(adjoint)
    return SubdiffRuleReport(lhs=lhs, rhs=rhs, equal=lhs.set_equal(rhs))


def normal_cone_inverse_image(
    f: SVMap, theta: PuncturedPolyhedron, xbar, ybar
) -> ConeRuleReport:
    """Normals to an inverse image against the coderivative of target normals."""
    xbar, ybar = vec(xbar), vec(ybar)
    if ri_meet([svmap.range_of(f).carrier, theta.carrier]) is None:
        raise QualificationFailedError(
            "relative interior of the range misses the target set"
        )
    if not _weak_membership(f.graph, xbar + ybar):
        raise PointNotInGraphError(f"({xbar}, {ybar}) is not on the graph")
    if not _weak_membership(theta, ybar):
        raise PointNotInSetError(f"{ybar} is not in the target set")
    pre, _ = svmap.preimage(f, theta)
    lhs = normal_cone(pre, xbar)

    n, p = f.n, f.p
    ntheta = normal_cone(theta, ybar).poly.hrep
    ngraph = carrier_normal_cone(f.graph.carrier, xbar + ybar).poly.hrep
    ineq, rhs, eq, eq_rhs = [], [], [], []
    for a, b in zip(ntheta.ineq_mat, ntheta.ineq_rhs):
        ineq.append(zeros(n) + tuple(a))
        rhs.append(b)
    for a, b in zip(ntheta.eq_mat, ntheta.eq_rhs):
        eq.append(zeros(n) + tuple(a))
        eq_rhs.append(b)
    for a, b in zip(ngraph.ineq_mat, ngraph.ineq_rhs):
        ineq.append(tuple(a[:n]) + tuple(-x for x in a[n:]))
        rhs.append(b)
    for a, b in zip(ngraph.eq_mat, ngraph.eq_rhs):
        eq.append(tuple(a[:n]) + tuple(-x for x in a[n:]))
        eq_rhs.append(b)
    coupled = Polyhedron.from_hrep(ineq, rhs, eq, eq_rhs, n=n + p)
    rhs_poly = coupled.project(list(range(n)))
    return ConeRuleReport(
        lhs=lhs, rhs=PolyCone(rhs_poly), equal=lhs.poly.set_equal(rhs_poly)
    )


def subdiff_max_rule(fs: Sequence[NCFunction], xbar) -> SubdiffRuleReport:
    """Subdifferential of a maximum against the hull of active subdifferentials.

    Continuity of each operand at the base point is certified by a
    full-dimensional domain containing the point in its interior.
    """
    fs = list(fs)
    xbar = vec(xbar)
    n = fs[0].n
    for f in fs:
        if f.dom.carrier.dim() != n or not f.dom.carrier.ri_contains(xbar):
            raise QualificationFailedError(
                "an operand is not certified continuous at the base point"
            )
    top, _ = ncfunc.max_fn(fs)
    lhs = subdifferential(top, xbar)
    values = [f.base(xbar) for f in fs]
    peak = max(values)
    active = tuple(i for i, val in enumerate(values) if val == peak)
    points, rays, lines = [], [], []
    for i in active:
        g = subdifferential(fs[i], xbar).genrep
        points.extend(g.points)
        rays.extend(g.rays)
        lines.extend(g.lines)
    rhs = Polyhedron.from_genrep(points, rays, lines, n=n)
    return SubdiffRuleReport(
        lhs=lhs, rhs=rhs, equal=lhs.set_equal(rhs), active_set=active
    )
