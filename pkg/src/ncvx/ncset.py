"""Punctured polyhedra: the computable model of nearly convex sets.

A punctured polyhedron is a closed convex polyhedral carrier ``P`` minus a
finite list of closed polyhedral pieces.  The set is nearly convex exactly
when every piece stays inside the relative boundary of the carrier; then
``ri P`` is a convex core witnessing the sandwich ``core <= set <= P``, the
closure is ``P``, and the relative interior is ``ri P``.

The near-convexity checker is complete on the decidable regime: pieces
whose intersection with the carrier is full-dimensional in the carrier make
the closure potentially non-convex and yield an ``unsupported`` verdict
instead of a guess.

Objects carry a fidelity flag.  ``EXACT`` means pointwise membership is
decidable; ``NEAR_EQUAL`` means only the near-equality class (relative
interior and closure) is trustworthy, which is all the preservation and
differentiation machinery ever needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from . import lp
from .errors import (
    DimensionMismatch,
    EmptyInputError,
    EmptySetError,
    FidelityError,
    InternalCheckError,
    NotNearlyConvexError,
    UnsupportedClosureError,
)
from .polyhedron import HRep, Polyhedron, lex_min_point, ri_meet
from .rational import ONE, Rat, Vec, ZERO, dot, primitive, vadd, vec, vscale, vsub, zeros

EXACT = "exact"
NEAR_EQUAL = "near"


@dataclass(frozen=True)
class RiDescription:
    """Relative interior as an affine system plus strict inequalities."""

    eq_mat: tuple
    eq_rhs: tuple
    strict_mat: tuple
    strict_rhs: tuple

    def satisfied_by(self, x: Vec) -> bool:
        return all(dot(e, x) == d for e, d in zip(self.eq_mat, self.eq_rhs)) and all(
            dot(a, x) < b for a, b in zip(self.strict_mat, self.strict_rhs)
        )


@dataclass(frozen=True)
class VerdictYes:
    core: RiDescription

    kind = "yes"


@dataclass(frozen=True)
class VerdictNo:
    witness: Vec

    kind = "no"


@dataclass(frozen=True)
class VerdictUnsupported:
    reason: str

    kind = "unsupported"


Verdict = Union[VerdictYes, VerdictNo, VerdictUnsupported]


@dataclass(frozen=True)
class Separable:
    v: Vec
    sup1: Rat
    inf2: Rat
    strict_pair: tuple

    separable = True


@dataclass(frozen=True)
class NotSeparable:
    common_ri_point: Vec

    separable = False


SeparationResult = Union[Separable, NotSeparable]


@dataclass(frozen=True)
class QualificationReport:
    """Outcome of a relative-interior qualification condition."""

    holds: bool
    witness: Optional[Vec]
    detail: str


def _raw_key(piece: Polyhedron):
    h = piece.hrep
    return (h.ineq_mat, h.ineq_rhs, h.eq_mat, h.eq_rhs)


class PuncturedPolyhedron:
    """Carrier polyhedron minus a finite list of removed polyhedral pieces."""

    def __init__(self, carrier: Polyhedron, removed: Sequence[Polyhedron] = (), fidelity: str = EXACT):
        if fidelity not in (EXACT, NEAR_EQUAL):
            raise FidelityError(f"unknown fidelity {fidelity!r}")
        pieces = []
        for piece in removed:
            if piece.n != carrier.n:
                raise DimensionMismatch("removed piece dimension differs from carrier")
            cut = piece.intersect(carrier)
            if not cut.is_empty():
                pieces.append(cut)
        if fidelity == NEAR_EQUAL and pieces:
            raise FidelityError("near-equality objects cannot carry removed pieces")
        # sort and dedupe on the raw constraint signature: cheap and
        # deterministic (full canonicalization would cost one LP per row)
        pieces.sort(key=_raw_key)
        deduped = []
        last_key = None
        for piece in pieces:
            key = _raw_key(piece)
            if key != last_key:
                deduped.append(piece)
                last_key = key
        self.carrier = carrier
        self.removed = tuple(deduped)
        self.fidelity = fidelity
        self.ambient_dim = carrier.n
        self._verdict: Optional[Verdict] = None

    @staticmethod
    def convex(carrier: Polyhedron) -> "PuncturedPolyhedron":
        return PuncturedPolyhedron(carrier, (), EXACT)

    def __repr__(self):
        return (
            f"PuncturedPolyhedron(n={self.ambient_dim}, pieces={len(self.removed)}, "
            f"fidelity={self.fidelity})"
        )


def membership(omega: PuncturedPolyhedron, x) -> bool:
    """Exact pointwise membership; only meaningful at EXACT fidelity."""
    if omega.fidelity != EXACT:
        raise FidelityError("membership query on a near-equality object")
    x = vec(x)
    if not omega.carrier.contains(x):
        return False
    return not any(piece.contains(x) for piece in omega.removed)


def check_nearly_convex(omega: PuncturedPolyhedron) -> Verdict:
    """Decide near convexity with a certificate.

    ``yes``: every removed piece avoids the carrier's relative interior, so
    ``ri(carrier)`` is a convex core of the sandwich.  ``no``: a rational
    witness in ``ri(carrier)`` and some piece (the lexicographically
    smallest point of the slack-optimal region, so output is
    deterministic).  ``unsupported``: some piece is full-dimensional in the
    carrier and the closure may be non-convex.
    """
    if omega._verdict is not None:
        return omega._verdict
    carrier = omega.carrier
    if carrier.is_empty():
        omega._verdict = VerdictYes(core=RiDescription((), (), (), ()))
        return omega._verdict
    cdim = carrier.dim()
    for piece in omega.removed:
        if piece.dim() == cdim:
            omega._verdict = VerdictUnsupported(
                reason="a removed piece is full-dimensional in the carrier"
            )
            return omega._verdict
    c = carrier.reduced_hrep()
    for piece in omega.removed:
        witness = _piece_ri_witness(piece, c)
        if witness is not None:
            omega._verdict = VerdictNo(witness=witness)
            return omega._verdict
    omega._verdict = VerdictYes(core=ri_description(omega))
    return omega._verdict


def _piece_ri_witness(piece: Polyhedron, c: HRep) -> Optional[Vec]:
    """Lex-smallest point of ``piece`` inside the strict carrier system, if any."""
    n = c.n
    ph = piece.hrep
    rows = [tuple(a) + (ONE,) for a in c.ineq_mat]
    rhs = list(c.ineq_rhs)
    rows.extend(tuple(a) + (ZERO,) for a in ph.ineq_mat)
    rhs.extend(ph.ineq_rhs)
    rows.append(zeros(n) + (ONE,))
    rhs.append(ONE)
    eq_rows = [tuple(e) + (ZERO,) for e in c.eq_mat]
    eq_rhs = list(c.eq_rhs)
    eq_rows.extend(tuple(e) + (ZERO,) for e in ph.eq_mat)
    eq_rhs.extend(ph.eq_rhs)
    res = lp.lp_solve(
        lp.LPProblem(
            zeros(n) + (ONE,), lp.MAX, tuple(rows), tuple(rhs), tuple(eq_rows), tuple(eq_rhs)
        )
    )
    if not isinstance(res, lp.Optimal) or not res.value > 0:
        return None
    tstar = res.value
    ineq = [tuple(a) for a in c.ineq_mat]
    ineq_rhs = [b - tstar for b in c.ineq_rhs]
    ineq.extend(tuple(a) for a in ph.ineq_mat)
    ineq_rhs.extend(ph.ineq_rhs)
    eqs = list(c.eq_mat) + list(ph.eq_mat)
    eqd = list(c.eq_rhs) + list(ph.eq_rhs)
    return lex_min_point(ineq, ineq_rhs, eqs, eqd, n, anchor=res.x[:n])


def require_nearly_convex(omega: PuncturedPolyhedron) -> Verdict:
    verdict = check_nearly_convex(omega)
    if verdict.kind == "no":
        raise NotNearlyConvexError(f"set is not nearly convex; witness {verdict.witness}")
    if verdict.kind == "unsupported":
        raise NotNearlyConvexError(f"near convexity undecidable: {verdict.reason}")
    return verdict


def closure(omega: PuncturedPolyhedron) -> Polyhedron:
    """The carrier, valid whenever no removed piece is full-dimensional in it."""
    carrier = omega.carrier
    if carrier.is_empty() or not omega.removed:
        return carrier
    cdim = carrier.dim()
    for piece in omega.removed:
        if piece.dim() == cdim:
            raise UnsupportedClosureError(
                "closure undecidable: a removed piece is full-dimensional in the carrier"
            )
    return carrier


def ri_member(omega: PuncturedPolyhedron, x) -> bool:
    require_nearly_convex(omega)
    return omega.carrier.ri_contains(vec(x))


def ri_description(omega: PuncturedPolyhedron) -> RiDescription:
    if omega.carrier.is_empty():
        return RiDescription((), (), (), ())
    c = omega.carrier.reduced_hrep()
    return RiDescription(c.eq_mat, c.eq_rhs, c.ineq_mat, c.ineq_rhs)


def hull_near_equal(omega: PuncturedPolyhedron) -> Polyhedron:
    """Closed convex hull; represents the convex hull up to near equality."""
    require_nearly_convex(omega)
    return closure(omega)


def near_equal(o1: PuncturedPolyhedron, o2: PuncturedPolyhedron) -> bool:
    """Equality of closures (hence of relative interiors) for nearly convex sets."""
    require_nearly_convex(o1)
    require_nearly_convex(o2)
    return closure(o1).set_equal(closure(o2))


def product(o1: PuncturedPolyhedron, o2: PuncturedPolyhedron) -> PuncturedPolyhedron:
    carrier = o1.carrier.product(o2.carrier)
    if o1.fidelity != EXACT or o2.fidelity != EXACT:
        return PuncturedPolyhedron(carrier, (), NEAR_EQUAL)
    pieces = [piece.product(o2.carrier) for piece in o1.removed]
    pieces.extend(o1.carrier.product(piece) for piece in o2.removed)
    return PuncturedPolyhedron(carrier, pieces, EXACT)


def intersect(o1: PuncturedPolyhedron, o2: PuncturedPolyhedron):
    """Intersection plus a report on the qualification ``ri o1 meets ri o2``.

    The object is built regardless of the qualification; when it fails the
    checker is the arbiter, mirroring the counterexamples where the
    intersection genuinely stops being nearly convex.
    """
    if o1.ambient_dim != o2.ambient_dim:
        raise DimensionMismatch("intersection across ambient dimensions")
    carrier = o1.carrier.intersect(o2.carrier)
    witness = ri_meet([o1.carrier, o2.carrier])
    report = QualificationReport(
        holds=witness is not None,
        witness=witness,
        detail="relative interiors intersect"
        if witness is not None
        else "relative interiors are disjoint",
    )
    if o1.fidelity != EXACT or o2.fidelity != EXACT:
        return PuncturedPolyhedron(carrier, (), NEAR_EQUAL), report
    return (
        PuncturedPolyhedron(carrier, o1.removed + o2.removed, EXACT),
        report,
    )


def linear_image(m, omega: PuncturedPolyhedron) -> PuncturedPolyhedron:
    """Image under ``x -> M x``.

    The carrier maps by generators.  A removed piece maps to a removed
    piece exactly when its whole preimage slab inside the carrier is
    covered by a single removed piece; a point piece whose slab meets no
    piece full-dimensionally is dropped with the image still exact.  These
    tests are pure set arithmetic, so an exact image is returned without
    convexity hypotheses (the preservation constructions feed
    counterexample sets through here on purpose).  Any other configuration
    only represents the near-equality class, which is meaningful just for
    nearly convex input; the downgrade therefore checks the verdict.
    """
    carrier_img = omega.carrier.linear_image(m)
    if omega.fidelity != EXACT:
        return PuncturedPolyhedron(carrier_img, (), NEAR_EQUAL)
    if not omega.removed:
        return PuncturedPolyhedron(carrier_img, (), EXACT)
    pieces = []
    exact = True
    for piece in omega.removed:
        img_piece = piece.linear_image(m)
        slab = img_piece.linear_preimage(m).intersect(omega.carrier)
        if any(slab.subset_of(other) for other in omega.removed):
            pieces.append(img_piece)
            continue
        if piece.dim() == 0 and all(
            other.intersect(slab).dim() < slab.dim() for other in omega.removed
        ):
            continue
        exact = False
        break
    if exact:
        return PuncturedPolyhedron(carrier_img, pieces, EXACT)
    require_nearly_convex(omega)
    return PuncturedPolyhedron(carrier_img, (), NEAR_EQUAL)


def linear_preimage(m, omega: PuncturedPolyhedron, shift=None) -> PuncturedPolyhedron:
    """Preimage ``{x : M x + shift in omega}``; pointwise exact at any fidelity."""
    carrier = omega.carrier.linear_preimage(m, shift)
    if omega.fidelity != EXACT:
        return PuncturedPolyhedron(carrier, (), NEAR_EQUAL)
    pieces = [piece.linear_preimage(m, shift) for piece in omega.removed]
    return PuncturedPolyhedron(carrier, pieces, EXACT)


def properly_separate(o1: PuncturedPolyhedron, o2: PuncturedPolyhedron) -> SeparationResult:
    """Proper separation decision with an exact two-sided certificate.

    Separation holds exactly when the relative interiors of the carriers
    are disjoint; the separating vector comes from a slack-maximizing LP
    over the generators of the difference body, and the strict pair is
    constructed inside the relative interiors so it is immune to punctures.
    """
    if o1.carrier.is_empty() or o2.carrier.is_empty():
        raise EmptyInputError("separation of an empty set")
    require_nearly_convex(o1)
    require_nearly_convex(o2)
    p1, p2 = o1.carrier, o2.carrier
    n = p1.n
    if p2.n != n:
        raise DimensionMismatch("separation across ambient dimensions")
    common = ri_meet([p1, p2])
    if common is not None:
        return NotSeparable(common_ri_point=common)

    neg = tuple(tuple(-ONE if j == i else ZERO for j in range(n)) for i in range(n))
    diff = p1.minkowski_sum(p2.linear_image(neg))
    g = diff.genrep
    rows = []
    rhs = []
    slack_row = [ZERO] * (n + 1)
    for gen in list(g.points) + list(g.rays):
        rows.append(tuple(gen) + (ZERO,))
        rhs.append(ZERO)
        for i in range(n):
            slack_row[i] += gen[i]
    slack_row[n] = ONE
    rows.append(tuple(slack_row))
    rhs.append(ZERO)
    eq_rows = [tuple(l) + (ZERO,) for l in g.lines]
    eq_rhs = [ZERO] * len(g.lines)
    for i in range(n):
        e = [ZERO] * (n + 1)
        e[i] = ONE
        rows.append(tuple(e))
        rhs.append(ONE)
        e2 = [ZERO] * (n + 1)
        e2[i] = -ONE
        rows.append(tuple(e2))
        rhs.append(ONE)
    t_cap = [ZERO] * (n + 1)
    t_cap[n] = ONE
    rows.append(tuple(t_cap))
    rhs.append(ONE)
    res = lp.lp_solve(
        lp.LPProblem(
            zeros(n) + (ONE,), lp.MAX, tuple(rows), tuple(rhs), tuple(eq_rows), tuple(eq_rhs)
        )
    )
    if not isinstance(res, lp.Optimal) or not res.value > 0:
        raise InternalCheckError("disjoint relative interiors admit no separating slack")
    v = primitive(res.x[:n])

    g1, g2 = p1.genrep, p2.genrep
    if any(dot(v, r) > 0 for r in g1.rays) or any(dot(v, l) != 0 for l in g1.lines):
        raise InternalCheckError("separating vector unbounded above on the first set")
    if any(dot(v, r) < 0 for r in g2.rays) or any(dot(v, l) != 0 for l in g2.lines):
        raise InternalCheckError("separating vector unbounded below on the second set")
    sup1 = max(dot(v, p) for p in g1.points)
    inf2 = min(dot(v, p) for p in g2.points)
    if sup1 > inf2:
        raise InternalCheckError("separating vector fails the weak inequality")

    a0 = p1.ri_point()
    b0 = p2.ri_point()
    pair = _strict_pair(v, p1, p2, a0, b0)
    return Separable(v=v, sup1=sup1, inf2=inf2, strict_pair=pair)


def _strict_pair(v: Vec, p1: Polyhedron, p2: Polyhedron, a0: Vec, b0: Vec):
    """Points of the two relative interiors with strictly ordered values."""
    if dot(v, a0) < dot(v, b0):
        return (a0, b0)
    h1 = p1.hrep
    res = lp.lp_solve(lp.LPProblem(v, lp.MIN, h1.ineq_mat, h1.ineq_rhs, h1.eq_mat, h1.eq_rhs))
    if isinstance(res, lp.Unbounded):
        cand = vadd(a0, res.ray)
        if dot(v, cand) < dot(v, b0):
            return (cand, b0)
    elif isinstance(res, lp.Optimal) and res.value < dot(v, a0):
        cand = vscale(ONE / 2, vadd(a0, res.x))
        if dot(v, cand) < dot(v, b0):
            return (cand, b0)
    h2 = p2.hrep
    res = lp.lp_solve(lp.LPProblem(v, lp.MAX, h2.ineq_mat, h2.ineq_rhs, h2.eq_mat, h2.eq_rhs))
    if isinstance(res, lp.Unbounded):
        cand = vadd(b0, res.ray)
        if dot(v, a0) < dot(v, cand):
            return (a0, cand)
    elif isinstance(res, lp.Optimal) and res.value > dot(v, b0):
        cand = vscale(ONE / 2, vadd(b0, res.x))
        if dot(v, a0) < dot(v, cand):
            return (a0, cand)
    raise InternalCheckError("proper separation lacks a strict witness pair")


def translate(omega: PuncturedPolyhedron, v) -> PuncturedPolyhedron:
    """Shift the whole punctured set by ``v``; exact at any fidelity."""
    v = vec(v)
    carrier = omega.carrier.translate(v)
    if omega.fidelity != EXACT:
        return PuncturedPolyhedron(carrier, (), NEAR_EQUAL)
    return PuncturedPolyhedron(
        carrier, [piece.translate(v) for piece in omega.removed], EXACT
    )


def is_convex(omega: PuncturedPolyhedron) -> bool:
    """Pointwise convexity test by segment refutation.

    A punctured set fails to be convex exactly when some removed point lies
    strictly between two members.  The search reflects carrier generators
    and dyadic steps about relative-interior points of each piece, which
    settles every configuration of point punctures and removed faces; a set
    that survives the search is reported convex.
    """
    if omega.fidelity != EXACT:
        raise FidelityError("convexity query on a near-equality object")
    if not omega.removed or omega.carrier.is_empty():
        return True
    carrier = omega.carrier
    gens = carrier.genrep
    steps = [Rat(1, 2), Rat(1, 4), Rat(1, 8)]
    for piece in omega.removed:
        anchors = [piece.ri_point()]
        anchors.extend(piece.genrep.points)
        for z in anchors:
            for x in gens.points:
                y = vsub(vscale(2, z), x)
                if (
                    x != z
                    and carrier.contains(y)
                    and membership(omega, x)
                    and membership(omega, y)
                ):
                    return False
            for v in list(gens.points) + [vadd(z, r) for r in gens.rays]:
                direction = vsub(v, z)
                for t in steps:
                    x = vadd(z, vscale(t, direction))
                    y = vsub(z, vscale(t, direction))
                    if (
                        x != z
                        and carrier.contains(x)
                        and carrier.contains(y)
                        and membership(omega, x)
                        and membership(omega, y)
                    ):
                        return False
    return True


def find_member(omega: PuncturedPolyhedron) -> Vec:
    """An exact member of the punctured set.

    Starts from the carrier's relative-interior point and walks dyadically
    toward carrier generators until the point clears every removed piece.
    """
    if omega.fidelity != EXACT:
        raise FidelityError("member search on a near-equality object")
    if omega.carrier.is_empty():
        raise EmptySetError("member of an empty set")
    x = omega.carrier.ri_point()
    if membership(omega, x):
        return x
    g = omega.carrier.genrep
    targets = list(g.points)
    targets.extend(vadd(x, r) for r in g.rays)
    targets.extend(vadd(x, l) for l in g.lines)
    steps = [Rat(1, 2), Rat(3, 4), Rat(7, 8), Rat(15, 16), Rat(31, 32)]
    for target in targets:
        direction = vsub(target, x)
        for t in steps:
            cand = vadd(x, vscale(t, direction))
            if membership(omega, cand):
                return cand
        if membership(omega, target):
            return target
    raise EmptySetError("no member found: removed pieces may cover the carrier")
