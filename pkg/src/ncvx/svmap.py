"""Set-valued mappings stored as graphs in product space.

A mapping from R^n to subsets of R^p is represented by its graph, a
punctured polyhedron in R^(n+p); the mapping is nearly convex exactly when
its graph is.  Domains, ranges, and values are block projections and slices
of the graph, and the preservation constructions (sum, composition,
intersection, direct and inverse images) are built literally as linear
images of intersections of cylinder liftings, so counterexample inputs
flow through and are judged by the checker rather than rejected.

Cylinder liftings and slices are linear preimages, which are pointwise
exact on punctured sets; fidelity can only drop at the final projection
step, following the image rules of :mod:`ncvx.ncset`.
"""

from __future__ import annotations

from typing import Optional, Sequence

from . import ncset
from .errors import DimensionMismatch, FidelityError
from .ncset import EXACT, PuncturedPolyhedron, QualificationReport
from .polyhedron import Polyhedron, ri_meet
from .rational import ONE, Vec, ZERO, mat, unit, vec, zeros


class SVMap:
    """A set-valued mapping ``R^n -> subsets of R^p`` given by its graph."""

    def __init__(self, n: int, p: int, graph: PuncturedPolyhedron):
        if graph.ambient_dim != n + p:
            raise DimensionMismatch("graph ambient dimension differs from n + p")
        self.n = n
        self.p = p
        self.graph = graph

    @staticmethod
    def from_linear(m, dom: Optional[Polyhedron] = None) -> "SVMap":
        """Single-valued mapping ``x -> {M x}``, optionally domain-restricted."""
        rows = mat(m)
        p = len(rows)
        n = len(rows[0]) if rows else 0
        eq = [tuple(row) + tuple(-ONE if j == i else ZERO for j in range(p)) for i, row in enumerate(rows)]
        ineq, ineq_rhs, eq_extra, eq_extra_rhs = (), (), (), ()
        if dom is not None:
            h = dom.hrep
            ineq = tuple(tuple(r) + zeros(p) for r in h.ineq_mat)
            ineq_rhs = h.ineq_rhs
            eq_extra = tuple(tuple(r) + zeros(p) for r in h.eq_mat)
            eq_extra_rhs = h.eq_rhs
        carrier = Polyhedron.from_hrep(
            ineq, ineq_rhs, tuple(eq) + eq_extra, zeros(p) + eq_extra_rhs, n=n + p
        )
        return SVMap(n, p, PuncturedPolyhedron(carrier))

    @staticmethod
    def constant(theta: PuncturedPolyhedron, source_dim: int = 1) -> "SVMap":
        """Mapping with domain ``{0}`` and constant value ``theta``."""
        origin = PuncturedPolyhedron(Polyhedron.singleton(zeros(source_dim)))
        return SVMap(source_dim, theta.ambient_dim, ncset.product(origin, theta))

    def nearly_convex(self) -> bool:
        return ncset.check_nearly_convex(self.graph).kind == "yes"

    def __repr__(self):
        return f"SVMap(n={self.n}, p={self.p}, graph={self.graph!r})"


def _proj_first(n: int, p: int):
    """Matrix of ``(x, y) -> x``."""
    return tuple(unit(n + p, i) for i in range(n))


def _proj_last(n: int, p: int):
    return tuple(unit(n + p, n + i) for i in range(p))


def domain(f: SVMap) -> PuncturedPolyhedron:
    ncset.require_nearly_convex(f.graph)
    return ncset.linear_image(_proj_first(f.n, f.p), f.graph)


def range_of(f: SVMap) -> PuncturedPolyhedron:
    ncset.require_nearly_convex(f.graph)
    return ncset.linear_image(_proj_last(f.n, f.p), f.graph)


def value(f: SVMap, x) -> PuncturedPolyhedron:
    """The slice ``{y : (x, y) in graph}``; exact, empty outside the domain."""
    if f.graph.fidelity != EXACT:
        raise FidelityError("pointwise value of a near-equality graph")
    x = vec(x)
    if len(x) != f.n:
        raise DimensionMismatch("argument dimension differs from the source")
    embed = tuple(zeros(f.p) for _ in range(f.n)) + tuple(
        unit(f.p, i) for i in range(f.p)
    )
    shift = x + zeros(f.p)
    return ncset.linear_preimage(embed, f.graph, shift)


def inverse(f: SVMap) -> SVMap:
    """Coordinate-block swap of the graph; involutive and exact."""
    swap = tuple(unit(f.n + f.p, f.p + i) for i in range(f.n)) + tuple(
        unit(f.n + f.p, i) for i in range(f.p)
    )
    return SVMap(f.p, f.n, ncset.linear_preimage(swap, f.graph))


def ri_graph_member(f: SVMap, x, y) -> bool:
    """Graph relative-interior test via the domain/value characterization."""
    ncset.require_nearly_convex(f.graph)
    x, y = vec(x), vec(y)
    dom = domain(f)
    if not dom.carrier.ri_contains(x):
        return False
    slice_carrier = _carrier_slice(f, x)
    return slice_carrier.ri_contains(y)


def _carrier_slice(f: SVMap, x: Vec) -> Polyhedron:
    embed = tuple(zeros(f.p) for _ in range(f.n)) + tuple(
        unit(f.p, i) for i in range(f.p)
    )
    return f.graph.carrier.linear_preimage(embed, x + zeros(f.p))


def _cylinder(pp: PuncturedPolyhedron, before: int, after: int) -> PuncturedPolyhedron:
    """Lift to ``R^before x (ambient) x R^after``; exact at any fidelity."""
    amb = pp.ambient_dim
    total = before + amb + after
    proj = tuple(unit(total, before + i) for i in range(amb))
    return ncset.linear_preimage(proj, pp)


def sum_maps(f1: SVMap, f2: SVMap):
    """Pointwise Minkowski sum, built as a linear image of an intersection.

    In coordinates ``(x, y1, y2)`` the two cylinder liftings of the graphs
    are intersected and pushed through ``(x, y1, y2) -> (x, y1 + y2)``.
    The qualification asks the relative interiors of the domains to meet;
    the object is built either way.
    """
    if f1.n != f2.n or f1.p != f2.p:
        raise DimensionMismatch("summands have different source or target dimensions")
    n, p = f1.n, f1.p
    total = n + 2 * p
    lift1 = ncset.linear_preimage(
        tuple(unit(total, i) for i in range(n)) + tuple(unit(total, n + i) for i in range(p)),
        f1.graph,
    )
    lift2 = ncset.linear_preimage(
        tuple(unit(total, i) for i in range(n)) + tuple(unit(total, n + p + i) for i in range(p)),
        f2.graph,
    )
    inter, _ = ncset.intersect(lift1, lift2)
    add = tuple(unit(total, i) for i in range(n)) + tuple(
        tuple(
            ONE if j == n + i or j == n + p + i else ZERO for j in range(total)
        )
        for i in range(p)
    )
    graph = ncset.linear_image(add, inter)
    report = _domain_qualification(f1, f2)
    return SVMap(n, p, graph), report


def _domain_qualification(f1: SVMap, f2: SVMap) -> QualificationReport:
    d1 = domain(f1)
    d2 = domain(f2)
    witness = ri_meet([d1.carrier, d2.carrier])
    return QualificationReport(
        holds=witness is not None,
        witness=witness,
        detail="relative interiors of the domains intersect"
        if witness is not None
        else "relative interiors of the domains are disjoint",
    )


def compose(g: SVMap, f: SVMap):
    """Composition ``g after f`` via cylinder intersection in ``(x, y, z)``."""
    if f.p != g.n:
        raise DimensionMismatch("target of the inner mapping differs from source of the outer")
    n, p, q = f.n, f.p, g.p
    total = n + p + q
    lift_f = _cylinder(f.graph, 0, q)
    lift_g = _cylinder(g.graph, n, 0)
    inter, _ = ncset.intersect(lift_f, lift_g)
    select = tuple(unit(total, i) for i in range(n)) + tuple(
        unit(total, n + p + i) for i in range(q)
    )
    graph = ncset.linear_image(select, inter)
    rge = range_of(f)
    dom_g = domain(g)
    witness = ri_meet([rge.carrier, dom_g.carrier])
    report = QualificationReport(
        holds=witness is not None,
        witness=witness,
        detail="relative interior of the range meets the outer domain"
        if witness is not None
        else "relative interior of the range misses the outer domain",
    )
    return SVMap(n, q, graph), report


def intersection_mapping(maps: Sequence[SVMap]):
    """Pointwise intersection; the graph is the intersection of the graphs."""
    if not maps:
        raise DimensionMismatch("intersection of no mappings")
    first = maps[0]
    if any(m.n != first.n or m.p != first.p for m in maps):
        raise DimensionMismatch("intersection of mappings with different dimensions")
    graph = maps[0].graph
    for m in maps[1:]:
        graph, _ = ncset.intersect(graph, m.graph)
    witness = ri_meet([m.graph.carrier for m in maps])
    report = QualificationReport(
        holds=witness is not None,
        witness=witness,
        detail="relative interiors of the graphs intersect"
        if witness is not None
        else "relative interiors of the graphs are disjoint",
    )
    return SVMap(first.n, first.p, graph), report


def image(g: SVMap, omega: PuncturedPolyhedron):
    """Direct image ``g(omega)`` with its qualification report.

    Unrolled constant-composition device: intersect the graph with the
    cylinder over ``omega`` and project to the target block.
    """
    ncset.require_nearly_convex(g.graph)
    ncset.require_nearly_convex(omega)
    if omega.ambient_dim != g.n:
        raise DimensionMismatch("argument dimension differs from the source")
    cyl = _cylinder(omega, 0, g.p)
    inter, _ = ncset.intersect(g.graph, cyl)
    result = ncset.linear_image(_proj_last(g.n, g.p), inter)
    dom_g = domain(g)
    witness = ri_meet([dom_g.carrier, omega.carrier])
    report = QualificationReport(
        holds=witness is not None,
        witness=witness,
        detail="relative interior of the domain meets the set"
        if witness is not None
        else "relative interior of the domain misses the set",
    )
    return result, report


def preimage(g: SVMap, theta: PuncturedPolyhedron):
    """Inverse image ``g^{-1}(theta)``: the direct image under the inverse."""
    ncset.require_nearly_convex(g.graph)
    ncset.require_nearly_convex(theta)
    if theta.ambient_dim != g.p:
        raise DimensionMismatch("argument dimension differs from the target")
    result, _ = image(inverse(g), theta)
    rge = range_of(g)
    witness = ri_meet([rge.carrier, theta.carrier])
    report = QualificationReport(
        holds=witness is not None,
        witness=witness,
        detail="relative interior of the range meets the set"
        if witness is not None
        else "relative interior of the range misses the set",
    )
    return result, report
