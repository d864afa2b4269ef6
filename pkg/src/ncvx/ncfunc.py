"""Nearly convex functions: piecewise-linear convex bases on punctured domains.

A function is ``max_i <c_i, x> + beta_i`` on a punctured polyhedral domain
and ``+inf`` outside, so it is always proper and every construction stays
inside exact rational arithmetic.  The epigraph is itself a punctured
polyhedron whose removed pieces are vertical cylinders over the domain
punctures, truncated at the carrier; each fiber of the epigraph set is
therefore empty or the full closed half-line above the base value, and the
function is nearly convex exactly when its epigraph set passes the checker.

Piece lists are canonicalized at construction: duplicates are removed and
pieces that never rise strictly above the others on the closed domain are
pruned by one LP each, in deterministic order.
"""

from __future__ import annotations

import math
from typing import Sequence

from . import lp, ncset, svmap
from .errors import (
    DimensionMismatch,
    EmptyInputError,
    EmptySetError,
    FidelityError,
    InternalCheckError,
    MalformedEpigraphError,
    NotNearlyConvexError,
)
from .ncset import EXACT, NEAR_EQUAL, PuncturedPolyhedron, QualificationReport
from .polyhedron import Polyhedron, ri_meet
from .rational import ONE, Rat, ZERO, dot, rat, vadd, vec, zeros

INF = math.inf


class NCFunction:
    """``f(x) = max_i <c_i, x> + beta_i`` on ``dom``, ``+inf`` elsewhere."""

    def __init__(self, n: int, pieces: Sequence, dom: PuncturedPolyhedron):
        if dom.ambient_dim != n:
            raise DimensionMismatch("domain dimension differs from n")
        if dom.carrier.is_empty():
            raise EmptySetError("a function needs a nonempty domain")
        cleaned = []
        for c, beta in pieces:
            cleaned.append((vec(c), rat(beta)))
            if len(cleaned[-1][0]) != n:
                raise DimensionMismatch("piece width differs from n")
        if not cleaned:
            raise EmptyInputError("a function needs at least one piece")
        self.n = n
        self.dom = dom
        self.pieces = _canonical_pieces(cleaned, dom.carrier)
        self._episet = None

    def base(self, x) -> Rat:
        x = vec(x)
        return max(dot(c, x) + beta for c, beta in self.pieces)

    def __repr__(self):
        return f"NCFunction(n={self.n}, pieces={len(self.pieces)}, dom={self.dom!r})"


def _canonical_pieces(pieces, carrier: Polyhedron):
    uniq = sorted(set(pieces))
    if len(uniq) == 1:
        return tuple(uniq)
    h = carrier.hrep
    n = carrier.n
    kept = list(uniq)
    i = 0
    while i < len(kept) and len(kept) > 1:
        c_i, beta_i = kept[i]
        others = kept[:i] + kept[i + 1:]
        # max over the carrier of piece_i minus the running maximum, via an
        # epigraph variable s for the other pieces
        rows = [tuple(c) + (-ONE,) for c, _ in others]
        rhs = [-beta for _, beta in others]
        rows.extend(tuple(a) + (ZERO,) for a in h.ineq_mat)
        rhs.extend(h.ineq_rhs)
        eq_rows = [tuple(e) + (ZERO,) for e in h.eq_mat]
        res = lp.lp_solve(
            lp.LPProblem(
                tuple(c_i) + (-ONE,),
                lp.MAX,
                tuple(rows),
                tuple(rhs),
                tuple(eq_rows),
                h.eq_rhs,
            )
        )
        if isinstance(res, lp.Optimal) and res.value + beta_i <= 0:
            kept.pop(i)
        else:
            i += 1
    return tuple(kept)


def evaluate(f: NCFunction, x):
    """Exact value: the base maximum on the domain, ``math.inf`` outside."""
    if f.dom.fidelity != EXACT:
        raise FidelityError("pointwise evaluation with a near-equality domain")
    x = vec(x)
    if not ncset.membership(f.dom, x):
        return INF
    return f.base(x)


def epigraph_set(f: NCFunction) -> PuncturedPolyhedron:
    """The epigraph as a punctured polyhedron in ``R^(n+1)``."""
    if f._episet is not None:
        return f._episet
    n = f.n
    ch = f.dom.carrier.hrep
    ineq = [tuple(a) + (ZERO,) for a in ch.ineq_mat]
    rhs = list(ch.ineq_rhs)
    for c, beta in f.pieces:
        ineq.append(tuple(c) + (-ONE,))
        rhs.append(-beta)
    eq = [tuple(e) + (ZERO,) for e in ch.eq_mat]
    carrier = Polyhedron.from_hrep(ineq, rhs, eq, ch.eq_rhs, n=n + 1)
    pieces = []
    for piece in f.dom.removed:
        ph = piece.hrep
        pieces.append(
            Polyhedron.from_hrep(
                [tuple(a) + (ZERO,) for a in ph.ineq_mat],
                ph.ineq_rhs,
                [tuple(e) + (ZERO,) for e in ph.eq_mat],
                ph.eq_rhs,
                n=n + 1,
            )
        )
    fidelity = EXACT if f.dom.fidelity == EXACT else NEAR_EQUAL
    out = PuncturedPolyhedron(carrier, pieces, fidelity)
    f._episet = out
    return out


def epigraph_mapping(f: NCFunction) -> svmap.SVMap:
    """The mapping ``x -> [f(x), inf)``, whose graph is the epigraph."""
    return svmap.SVMap(f.n, 1, epigraph_set(f))


def validate_epigraph(pp: PuncturedPolyhedron) -> None:
    """Reject sets in epigraph position that are not upward closed.

    The carrier's recession cone must contain the upward direction, and
    every removed piece must be the full vertical cylinder over its own
    projection, truncated at the carrier, so fibers of the set are empty or
    closed half-lines.
    """
    n = pp.ambient_dim - 1
    up = zeros(n) + (ONE,)
    if not pp.carrier.is_empty() and not pp.carrier.recession_cone().contains(up):
        raise MalformedEpigraphError("carrier is not upward closed")
    for piece in pp.removed:
        shadow = piece.project(list(range(n)))
        cyl_rows = [tuple(a) + (ZERO,) for a in shadow.hrep.ineq_mat]
        cyl = Polyhedron.from_hrep(
            cyl_rows,
            shadow.hrep.ineq_rhs,
            [tuple(e) + (ZERO,) for e in shadow.hrep.eq_mat],
            shadow.hrep.eq_rhs,
            n=n + 1,
        )
        if not piece.set_equal(cyl.intersect(pp.carrier)):
            raise MalformedEpigraphError(
                "a removed piece is not a full vertical cylinder inside the carrier"
            )


def nearly_convex(f: NCFunction) -> bool:
    return ncset.check_nearly_convex(epigraph_set(f)).kind == "yes"


def require_nearly_convex(f: NCFunction) -> None:
    verdict = ncset.check_nearly_convex(epigraph_set(f))
    if verdict.kind != "yes":
        raise NotNearlyConvexError("function is not nearly convex")


def aff_epi(f: NCFunction):
    """Affine hull of the epigraph; checked to be aff(dom) x R."""
    epi = epigraph_set(f)
    e_mat, e_rhs = epi.carrier.affine_hull()
    de_mat, de_rhs = f.dom.carrier.affine_hull()
    expected = Polyhedron.from_hrep(
        (),
        (),
        [tuple(r) + (ZERO,) for r in de_mat],
        de_rhs,
        n=f.n + 1,
    )
    actual = Polyhedron.from_hrep((), (), e_mat, e_rhs, n=f.n + 1)
    if not actual.set_equal(expected):
        raise InternalCheckError("affine hull of the epigraph is not aff(dom) x R")
    return e_mat, e_rhs


def ri_epi_member(f: NCFunction, x, lam) -> bool:
    """Epigraph relative-interior test, cross-checked against the carrier."""
    require_nearly_convex(f)
    x = vec(x)
    lam = rat(lam)
    direct = f.dom.carrier.ri_contains(x) and lam > f.base(x)
    carrier_side = epigraph_set(f).carrier.ri_contains(x + (lam,))
    if direct != carrier_side:
        raise InternalCheckError("epigraph relative-interior routes disagree")
    return direct


def co_f(f: NCFunction) -> NCFunction:
    """Near-equality representative of the convex hull function.

    Same base pieces on the unpunctured carrier; the result only stands
    for its near-equality class, so its domain is flagged accordingly.
    """
    require_nearly_convex(f)
    hull_dom = PuncturedPolyhedron(f.dom.carrier, (), NEAR_EQUAL)
    out = NCFunction(f.n, f.pieces, hull_dom)
    if not ncset.near_equal(epigraph_set(f), epigraph_set(out)):
        raise InternalCheckError("convex hull representative is not nearly equal")
    return out


def lift_alpha(f: NCFunction) -> NCFunction:
    """The function ``(x, a) -> f(x) + a`` on ``dom f x R``."""
    require_nearly_convex(f)
    pieces = [(tuple(c) + (ONE,), beta) for c, beta in f.pieces]
    free_line = PuncturedPolyhedron(Polyhedron.whole_space(1))
    dom = ncset.product(f.dom, free_line)
    out = NCFunction(f.n + 1, pieces, dom)
    if ncset.check_nearly_convex(epigraph_set(out)).kind != "yes":
        raise InternalCheckError("vertical lift lost near convexity")
    return out


def add(f1: NCFunction, f2: NCFunction):
    """Pointwise sum with the domain-qualification report."""
    if f1.n != f2.n:
        raise DimensionMismatch("summands live in different dimensions")
    pieces = [
        (vadd(c1, c2), b1 + b2) for c1, b1 in f1.pieces for c2, b2 in f2.pieces
    ]
    dom, _ = ncset.intersect(f1.dom, f2.dom)
    if dom.carrier.is_empty():
        raise EmptySetError("summands have disjoint domains")
    witness = ri_meet([f1.dom.carrier, f2.dom.carrier])
    report = QualificationReport(
        holds=witness is not None,
        witness=witness,
        detail="relative interiors of the domains intersect"
        if witness is not None
        else "relative interiors of the domains are disjoint",
    )
    out = NCFunction(f1.n, pieces, dom)
    if report.holds:
        if ncset.check_nearly_convex(epigraph_set(out)).kind != "yes":
            raise InternalCheckError("qualified sum lost near convexity")
    return out, report


def precompose_affine(f: NCFunction, a, b):
    """``x -> f(A x + b)`` with the range qualification report."""
    rows = [vec(r) for r in a]
    if len(rows) != f.n:
        raise DimensionMismatch("matrix height differs from the function dimension")
    b = vec(b)
    in_n = len(rows[0]) if rows else 0
    cols = list(zip(*rows)) if rows else []
    pieces = []
    for c, beta in f.pieces:
        composed = tuple(dot(c, col) for col in cols)
        pieces.append((composed, dot(c, b) + beta))
    dom = ncset.linear_preimage(rows, f.dom, b)
    if dom.carrier.is_empty():
        raise EmptySetError("affine image misses the domain entirely")
    witness = _affine_range_meets_ri(rows, b, f.dom.carrier)
    report = QualificationReport(
        holds=witness is not None,
        witness=witness,
        detail="affine range meets the relative interior of the domain"
        if witness is not None
        else "affine range misses the relative interior of the domain",
    )
    return NCFunction(in_n, pieces, dom), report


def _affine_range_meets_ri(rows, b, carrier: Polyhedron):
    """A point x with ``A x + b`` in ``ri(carrier)``, or None (slack LP)."""
    if carrier.is_empty():
        return None
    c = carrier.reduced_hrep()
    in_n = len(rows[0]) if rows else 0
    ineq = []
    rhs = []
    for a_row, bb in zip(c.ineq_mat, c.ineq_rhs):
        composed = tuple(dot(a_row, col) for col in zip(*rows)) if rows else zeros(in_n)
        ineq.append(composed + (ONE,))
        rhs.append(bb - dot(a_row, b))
    ineq.append(zeros(in_n) + (ONE,))
    rhs.append(ONE)
    eq_rows = []
    eq_rhs = []
    for e_row, dd in zip(c.eq_mat, c.eq_rhs):
        composed = tuple(dot(e_row, col) for col in zip(*rows)) if rows else zeros(in_n)
        eq_rows.append(composed + (ZERO,))
        eq_rhs.append(dd - dot(e_row, b))
    res = lp.lp_solve(
        lp.LPProblem(
            zeros(in_n) + (ONE,),
            lp.MAX,
            tuple(ineq),
            tuple(rhs),
            tuple(eq_rows),
            tuple(eq_rhs),
        )
    )
    if isinstance(res, lp.Optimal) and res.value > 0:
        return res.x[:in_n]
    return None


def max_fn(fs: Sequence[NCFunction]):
    """Pointwise maximum, computed twice and reconciled.

    Piece route: union of the piece lists on the intersected domain.
    Epigraph route: intersection mapping of the epigraphical mappings.
    The two epigraph carriers must coincide exactly.
    """
    fs = list(fs)
    if not fs:
        raise EmptyInputError("maximum of no functions")
    n = fs[0].n
    if any(f.n != n for f in fs):
        raise DimensionMismatch("maximum across different dimensions")
    pieces = [piece for f in fs for piece in f.pieces]
    dom = fs[0].dom
    for f in fs[1:]:
        dom, _ = ncset.intersect(dom, f.dom)
    if dom.carrier.is_empty():
        raise EmptySetError("domains of the maximum do not meet")
    witness = ri_meet([f.dom.carrier for f in fs])
    report = QualificationReport(
        holds=witness is not None,
        witness=witness,
        detail="relative interiors of the domains intersect"
        if witness is not None
        else "relative interiors of the domains are disjoint",
    )
    out = NCFunction(n, pieces, dom)
    mapping, _ = svmap.intersection_mapping([epigraph_mapping(f) for f in fs])
    if not epigraph_set(out).carrier.set_equal(mapping.graph.carrier):
        raise InternalCheckError("piece and epigraph routes to the maximum disagree")
    return out, report


def indicator(omega: PuncturedPolyhedron) -> NCFunction:
    """Zero on the set, ``+inf`` outside."""
    if omega.carrier.is_empty():
        raise EmptyInputError("indicator of an empty set")
    return NCFunction(omega.ambient_dim, [(zeros(omega.ambient_dim), ZERO)], omega)


def affine(c, beta, n=None) -> NCFunction:
    """The globally finite affine function ``<c, x> + beta``."""
    c = vec(c)
    n = len(c) if n is None else n
    return NCFunction(n, [(c, rat(beta))], PuncturedPolyhedron(Polyhedron.whole_space(n)))


def abs_value() -> NCFunction:
    """``|x|`` on the line."""
    return NCFunction(
        1,
        [((ONE,), ZERO), ((-ONE,), ZERO)],
        PuncturedPolyhedron(Polyhedron.whole_space(1)),
    )
