"""Closed convex polyhedra with exact dual representations.

A polyhedron carries an inequality description (``A x <= b``, ``E x = d``)
and a generator description (points, rays, lines); either may be given and
the other is derived on demand.  Both conversion directions reduce to one
primitive, the double description of a homogeneous cone, run over exact
rationals.

Relative-interior machinery rests on implicit-equality detection: an
inequality row is implicit when it holds with equality over the whole set,
decided by one linear program per row.  The canonical constraint form folds
implicit equalities into the equality system, reduces inequality normals
modulo the affine hull, prunes redundant rows by LP, and orders rows
lexicographically, so serialized output is reproducible.

All values are immutable; derived data is cached on first use.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from . import lp
from .errors import DimensionMismatch, EmptySetError, InternalCheckError
from .rational import (
    Mat,
    ONE,
    Vec,
    ZERO,
    dot,
    is_zero_vec,
    mat_rank,
    primitive,
    primitive_signed,
    rat,
    rref,
    unit,
    vadd,
    vec,
    vneg,
    vscale,
    vsub,
    zeros,
)


@dataclass(frozen=True)
class HRep:
    """Constraint description ``A x <= b``, ``E x = d`` in ambient dimension ``n``."""

    ineq_mat: Mat
    ineq_rhs: Vec
    eq_mat: Mat
    eq_rhs: Vec
    n: int

    def __post_init__(self):
        for row in self.ineq_mat:
            if len(row) != self.n:
                raise DimensionMismatch("inequality row width differs from ambient dim")
        for row in self.eq_mat:
            if len(row) != self.n:
                raise DimensionMismatch("equality row width differs from ambient dim")
        if len(self.ineq_mat) != len(self.ineq_rhs) or len(self.eq_mat) != len(self.eq_rhs):
            raise DimensionMismatch("constraint rows and right-hand sides differ in count")


@dataclass(frozen=True)
class GenRep:
    """Generator description: conv(points) + cone(rays) + span(lines).

    Empty if and only if ``points`` is empty.
    """

    points: tuple
    rays: tuple
    lines: tuple
    n: int

    def __post_init__(self):
        for group in (self.points, self.rays, self.lines):
            for v in group:
                if len(v) != self.n:
                    raise DimensionMismatch("generator width differs from ambient dim")


# ---------------------------------------------------------------------------
# cone double description
# ---------------------------------------------------------------------------


def _lines_rref(lines: Sequence[Vec], n: int):
    """Canonical basis (RREF rows) of the span of ``lines`` plus pivot columns."""
    if not lines:
        return (), ()
    pivots, reduced, _, _ = rref(lines)
    return tuple(reduced), tuple(pivots)


def _reduce_mod_lines(v: Vec, lines: Sequence[Vec], pivots: Sequence[int]) -> Vec:
    for row, p in zip(lines, pivots):
        if v[p] != 0:
            c = v[p]
            v = tuple(x - c * y for x, y in zip(v, row))
    return v


def cone_generators(ineq_rows: Sequence[Vec], eq_rows: Sequence[Vec], n: int):
    """Minimal generators (rays, lines) of ``{x : R x <= 0, E x = 0}``.

    Constraints are added one at a time; each addition either converts a
    line into a ray (when some line leaves the new halfspace) or runs the
    classical double-description step, combining adjacent rays across the
    hyperplane.  Adjacency and final extremity use the exact rank test, so
    the output is minimal and independent of redundant input rows.
    """
    eq_rows = [vec(r) for r in eq_rows if not is_zero_vec(r)]
    if eq_rows:
        pivots, reduced, _, _ = rref(eq_rows)
        kernel = []
        pivot_set = set(pivots)
        for free in range(n):
            if free in pivot_set:
                continue
            v = [ZERO] * n
            v[free] = ONE
            for r, p in enumerate(pivots):
                v[p] = -reduced[r][free]
            kernel.append(tuple(v))
        lines, lpivots = _lines_rref(kernel, n)
    else:
        lines, lpivots = _lines_rref([unit(n, i) for i in range(n)], n)

    rays: list = []
    processed: list = []

    def active_rows(r: Vec):
        rows = list(eq_rows)
        rows.extend(m for m in processed if dot(m, r) == 0)
        return rows

    def adjacent(r1: Vec, r2: Vec) -> bool:
        rows = list(eq_rows)
        rows.extend(m for m in processed if dot(m, r1) == 0 and dot(m, r2) == 0)
        return mat_rank(rows) == n - len(lines) - 2

    def canon_ray(r: Vec) -> Optional[Vec]:
        r = _reduce_mod_lines(r, lines, lpivots)
        if is_zero_vec(r):
            return None
        return primitive(r)

    for raw in ineq_rows:
        m = vec(raw)
        if is_zero_vec(m):
            continue
        line_vals = [dot(m, l) for l in lines]
        if any(v != 0 for v in line_vals):
            idx = next(i for i, v in enumerate(line_vals) if v != 0)
            l0 = lines[idx]
            v0 = line_vals[idx]
            if v0 > 0:
                l0, v0 = vneg(l0), -v0
            new_lines = [
                vsub(l, vscale(dot(m, l) / v0, l0))
                for i, l in enumerate(lines)
                if i != idx
            ]
            lines, lpivots = _lines_rref(new_lines, n)
            moved = [vsub(r, vscale(dot(m, r) / v0, l0)) for r in rays]
            moved.append(l0)
            rays = []
            seen = set()
            for r in moved:
                c = canon_ray(r)
                if c is not None and c not in seen:
                    seen.add(c)
                    rays.append(c)
        else:
            vals = [dot(m, r) for r in rays]
            keep = [r for r, v in zip(rays, vals) if v <= 0]
            pos = [(r, v) for r, v in zip(rays, vals) if v > 0]
            neg = [(r, v) for r, v in zip(rays, vals) if v < 0]
            fresh = []
            for rp, vp in pos:
                for rn, vn in neg:
                    if adjacent(rp, rn):
                        fresh.append(vadd(vscale(vp, rn), vscale(-vn, rp)))
            seen = set(keep)
            rays = list(keep)
            for r in fresh:
                c = canon_ray(r)
                if c is not None and c not in seen:
                    seen.add(c)
                    rays.append(c)
        processed.append(m)

    final = []
    for r in rays:
        rows = active_rows(r)
        if mat_rank(rows) == n - len(lines) - 1:
            final.append(r)
    final.sort()
    out_lines = sorted(primitive_signed(l) for l in lines)
    return tuple(final), tuple(out_lines)


def _hrep_to_genrep(h: HRep) -> GenRep:
    """Homogenize, run the cone double description, and de-homogenize."""
    n = h.n
    ineq = [tuple(row) + (-b,) for row, b in zip(h.ineq_mat, h.ineq_rhs)]
    ineq.append(zeros(n) + (-ONE,))  # t >= 0
    eq = [tuple(row) + (-d,) for row, d in zip(h.eq_mat, h.eq_rhs)]
    rays, lines = cone_generators(ineq, eq, n + 1)
    points = []
    out_rays = []
    out_lines = []
    for r in rays:
        t = r[n]
        if t > 0:
            points.append(tuple(x / t for x in r[:n]))
        else:
            out_rays.append(primitive(r[:n]))
    for l in lines:
        if l[n] != 0:
            raise InternalCheckError("homogenization line with nonzero scale")
        out_lines.append(primitive_signed(l[:n]))
    if not points:
        return GenRep((), (), (), n)
    return GenRep(
        tuple(sorted(set(points))),
        tuple(sorted(set(out_rays))),
        tuple(sorted(set(out_lines))),
        n,
    )


def _genrep_to_hrep(g: GenRep) -> HRep:
    """Polar-cone construction: generators of the polar give constraint rows."""
    n = g.n
    if not g.points:
        return HRep((zeros(n),), (-ONE,), (), (), n)
    ineq = [tuple(p) + (ONE,) for p in g.points]
    ineq.extend(tuple(r) + (ZERO,) for r in g.rays)
    eq = [tuple(l) + (ZERO,) for l in g.lines]
    rays, lines = cone_generators(ineq, eq, n + 1)
    ineq_mat, ineq_rhs, eq_mat, eq_rhs = [], [], [], []
    for a in rays:
        normal = a[:n]
        if is_zero_vec(normal):
            continue  # 0 <= -beta with beta <= 0: trivially true
        ineq_mat.append(normal)
        ineq_rhs.append(-a[n])
    for a in lines:
        normal = a[:n]
        if is_zero_vec(normal):
            continue
        eq_mat.append(normal)
        eq_rhs.append(-a[n])
    return HRep(tuple(ineq_mat), tuple(ineq_rhs), tuple(eq_mat), tuple(eq_rhs), n)


# ---------------------------------------------------------------------------
# polyhedron
# ---------------------------------------------------------------------------


class Polyhedron:
    """A closed convex polyhedron with lazily synchronized dual descriptions."""

    def __init__(self, hrep: Optional[HRep] = None, genrep: Optional[GenRep] = None):
        if hrep is None and genrep is None:
            raise DimensionMismatch("a polyhedron needs at least one description")
        if hrep is not None and genrep is not None and hrep.n != genrep.n:
            raise DimensionMismatch("descriptions disagree on ambient dimension")
        self._hrep = hrep
        self._genrep = genrep
        self.n = hrep.n if hrep is not None else genrep.n
        self._empty: Optional[bool] = None
        self._implicit = None
        self._reduced: Optional[HRep] = None
        self._canonical: Optional[HRep] = None
        self._canonical_gen: Optional[GenRep] = None
        self._dim: Optional[int] = None
        self._ri_point = None

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_hrep(ineq_mat, ineq_rhs, eq_mat=(), eq_rhs=(), n=None) -> "Polyhedron":
        rows = [vec(r) for r in ineq_mat]
        eqs = [vec(r) for r in eq_mat]
        if n is None:
            if rows:
                n = len(rows[0])
            elif eqs:
                n = len(eqs[0])
            else:
                raise DimensionMismatch("cannot infer ambient dimension")
        return Polyhedron(hrep=HRep(tuple(rows), vec(ineq_rhs), tuple(eqs), vec(eq_rhs), n))

    @staticmethod
    def from_genrep(points, rays=(), lines=(), n=None) -> "Polyhedron":
        pts = [vec(p) for p in points]
        rs = [vec(r) for r in rays]
        ls = [vec(l) for l in lines]
        if n is None:
            for group in (pts, rs, ls):
                if group:
                    n = len(group[0])
                    break
            else:
                raise DimensionMismatch("cannot infer ambient dimension")
        return Polyhedron(genrep=GenRep(tuple(pts), tuple(rs), tuple(ls), n))

    @staticmethod
    def from_points(points) -> "Polyhedron":
        return Polyhedron.from_genrep(points)

    @staticmethod
    def singleton(p) -> "Polyhedron":
        return Polyhedron.from_genrep([p])

    @staticmethod
    def box(bounds) -> "Polyhedron":
        """Axis-aligned box from ``[(lo, hi), ...]``."""
        n = len(bounds)
        rows, rhs = [], []
        for i, (lo, hi) in enumerate(bounds):
            rows.append(unit(n, i))
            rhs.append(rat(hi))
            rows.append(vneg(unit(n, i)))
            rhs.append(-rat(lo))
        return Polyhedron.from_hrep(rows, rhs, n=n)

    @staticmethod
    def whole_space(n: int) -> "Polyhedron":
        return Polyhedron.from_hrep((), (), n=n)

    @staticmethod
    def empty(n: int) -> "Polyhedron":
        return Polyhedron.from_hrep([zeros(n)], [-ONE], n=n)

    # -- representations -----------------------------------------------------

    @property
    def hrep(self) -> HRep:
        if self._hrep is None:
            self._hrep = _genrep_to_hrep(self._genrep)
        return self._hrep

    @property
    def genrep(self) -> GenRep:
        if self._genrep is None:
            g = _hrep_to_genrep(self._hrep)
            for p in g.points:
                if not self.contains(p):
                    raise InternalCheckError("derived generator point escapes constraints")
            self._genrep = g
        return self._genrep

    def is_empty(self) -> bool:
        if self._empty is None:
            if self._genrep is not None:
                self._empty = not self._genrep.points
            else:
                h = self._hrep
                self._empty = (
                    lp.feasible_point(h.ineq_mat, h.ineq_rhs, h.eq_mat, h.eq_rhs, n=h.n)
                    is None
                )
        return self._empty

    def contains(self, x) -> bool:
        x = vec(x)
        if len(x) != self.n:
            raise DimensionMismatch("point dimension differs from ambient dimension")
        h = self.hrep
        return all(dot(a, x) <= b for a, b in zip(h.ineq_mat, h.ineq_rhs)) and all(
            dot(e, x) == d for e, d in zip(h.eq_mat, h.eq_rhs)
        )

    # -- implicit equalities and canonical constraints -----------------------

    def implicit_equalities(self) -> tuple:
        """Indices of inequality rows holding with equality over the whole set.

        Decided by repeated joint-slack LPs: while the maximal common slack
        of the remaining candidate rows is zero, the rows carrying positive
        dual weight are certified implicit (a nonnegative combination of
        valid inequalities that is tight over the set makes each weighted
        row tight), move to the equality side, and the slack LP repeats.
        """
        if self.is_empty():
            raise EmptySetError("implicit equalities of the empty set")
        if self._implicit is not None:
            return self._implicit
        h = self.hrep
        if not h.ineq_mat:
            self._implicit = ()
            return self._implicit
        candidates = list(range(len(h.ineq_mat)))
        implicit: list = []
        eq_rows = [tuple(row) + (ZERO,) for row in h.eq_mat]
        eq_rhs = list(h.eq_rhs)
        while candidates:
            rows = [tuple(h.ineq_mat[i]) + (ONE,) for i in candidates]
            rhs = [h.ineq_rhs[i] for i in candidates]
            rows.append(zeros(h.n) + (ONE,))
            rhs.append(ONE)
            res = lp.lp_solve(
                lp.LPProblem(
                    zeros(h.n) + (ONE,),
                    lp.MAX,
                    tuple(rows),
                    tuple(rhs),
                    tuple(eq_rows),
                    tuple(eq_rhs),
                )
            )
            if not isinstance(res, lp.Optimal):
                raise InternalCheckError("slack program on a nonempty set failed")
            if res.value > 0:
                break
            newly = [
                idx
                for pos, idx in enumerate(candidates)
                if res.dual[pos] > 0
            ]
            if not newly:
                raise InternalCheckError("zero slack without an implicit-row certificate")
            for idx in newly:
                implicit.append(idx)
                candidates.remove(idx)
                eq_rows.append(tuple(h.ineq_mat[idx]) + (ZERO,))
                eq_rhs.append(h.ineq_rhs[idx])
        self._implicit = tuple(sorted(implicit))
        return self._implicit

    def reduced_hrep(self) -> HRep:
        """Constraint form with implicit equalities folded into the equality
        system (RREF), inequality normals reduced modulo the affine hull,
        deduplicated, and sorted.

        Redundant inequality rows may remain: every valid non-implicit row
        is strict on the relative interior and its normal is a legitimate
        normal-cone generator where active, so the strictness and
        active-row machinery is insensitive to redundancy.  Use
        :meth:`canonical_hrep` where minimality matters.
        """
        if self._reduced is not None:
            return self._reduced
        n = self.n
        if self.is_empty():
            self._reduced = HRep((zeros(n),), (-ONE,), (), (), n)
            return self._reduced
        h = self.hrep
        implicit = set(self.implicit_equalities())
        eq_rows = list(h.eq_mat)
        eq_rhs = list(h.eq_rhs)
        for i in implicit:
            eq_rows.append(h.ineq_mat[i])
            eq_rhs.append(h.ineq_rhs[i])
        if eq_rows:
            pivots, reduced, reduced_rhs, consistent = rref(eq_rows, eq_rhs)
            if not consistent:
                raise InternalCheckError("inconsistent equalities on a nonempty set")
            eq_pairs = sorted(
                primitive_signed(tuple(r) + (c,)) for r, c in zip(reduced, reduced_rhs)
            )
            eq_rows = [p[:n] for p in eq_pairs]
            eq_rhs = [p[n] for p in eq_pairs]
            red_rows, red_pivots, red_rhs = list(reduced), list(pivots), list(reduced_rhs)
        else:
            red_rows, red_pivots, red_rhs = [], [], []
        kept = {}
        for i, (row, b) in enumerate(zip(h.ineq_mat, h.ineq_rhs)):
            if i in implicit:
                continue
            a = tuple(row)
            for rrow, p, rc in zip(red_rows, red_pivots, red_rhs):
                if a[p] != 0:
                    c = a[p]
                    a = tuple(x - c * y for x, y in zip(a, rrow))
                    b = b - c * rc
            if is_zero_vec(a):
                continue
            scaled = primitive(a + (b,))
            key = scaled[:n]
            if key not in kept or scaled[n] < kept[key]:
                kept[key] = scaled[n]
        rows = sorted(kept.items())
        self._reduced = HRep(
            tuple(a for a, _ in rows),
            tuple(b for _, b in rows),
            tuple(eq_rows),
            tuple(eq_rhs),
            n,
        )
        return self._reduced

    def canonical_hrep(self) -> HRep:
        """The reduced form with redundant inequality rows pruned by exact LPs."""
        if self._canonical is not None:
            return self._canonical
        base = self.reduced_hrep()
        if self.is_empty():
            self._canonical = base
            return self._canonical
        pruned = list(zip(base.ineq_mat, base.ineq_rhs))
        i = 0
        while i < len(pruned):
            a, b = pruned[i]
            others = pruned[:i] + pruned[i + 1:]
            res = lp.lp_solve(
                lp.LPProblem(
                    a,
                    lp.MAX,
                    tuple(r for r, _ in others),
                    tuple(c for _, c in others),
                    base.eq_mat,
                    base.eq_rhs,
                )
            )
            if isinstance(res, lp.Optimal) and res.value <= b:
                pruned.pop(i)
            else:
                i += 1
        self._canonical = HRep(
            tuple(a for a, _ in pruned),
            tuple(b for _, b in pruned),
            base.eq_mat,
            base.eq_rhs,
            self.n,
        )
        return self._canonical

    def canonical_genrep(self) -> GenRep:
        """Generator form with lines reduced to an RREF basis, rays and points
        reduced modulo the line span, redundant generators pruned by LP, and
        entries sorted."""
        if self._canonical_gen is not None:
            return self._canonical_gen
        g = self.genrep
        n = self.n
        if not g.points:
            self._canonical_gen = GenRep((), (), (), n)
            return self._canonical_gen
        lines, pivots = _lines_rref(g.lines, n)
        rays = sorted(
            {
                primitive(r)
                for r in (_reduce_mod_lines(v, lines, pivots) for v in g.rays)
                if not is_zero_vec(r)
            }
        )
        points = sorted({_reduce_mod_lines(p, lines, pivots) for p in g.points})
        rays = self._prune_rays(points, rays, lines)
        points = self._prune_points(points, rays, lines)
        self._canonical_gen = GenRep(
            tuple(points),
            tuple(rays),
            tuple(sorted(primitive_signed(l) for l in lines)),
            n,
        )
        return self._canonical_gen

    def _prune_rays(self, points, rays, lines):
        kept = list(rays)
        i = 0
        while i < len(kept):
            target = kept[i]
            others = kept[:i] + kept[i + 1:]
            if _in_cone(target, others, lines):
                kept.pop(i)
            else:
                i += 1
        return kept

    def _prune_points(self, points, rays, lines):
        kept = list(points)
        i = 0
        while i < len(kept):
            if len(kept) == 1:
                break
            target = kept[i]
            others = kept[:i] + kept[i + 1:]
            if _in_hull(target, others, rays, lines):
                kept.pop(i)
            else:
                i += 1
        return kept

    # -- geometry ------------------------------------------------------------

    def dim(self) -> int:
        if self._dim is None:
            if self.is_empty():
                self._dim = -1
            else:
                c = self.reduced_hrep()
                self._dim = self.n - mat_rank(c.eq_mat)
        return self._dim

    def affine_hull(self):
        """Equality system ``(E, d)`` describing the affine hull."""
        if self.is_empty():
            raise EmptySetError("affine hull of the empty set")
        c = self.reduced_hrep()
        return c.eq_mat, c.eq_rhs

    def ri_contains(self, x) -> bool:
        x = vec(x)
        if len(x) != self.n:
            raise DimensionMismatch("point dimension differs from ambient dimension")
        if self.is_empty():
            return False
        c = self.reduced_hrep()
        return all(dot(e, x) == d for e, d in zip(c.eq_mat, c.eq_rhs)) and all(
            dot(a, x) < b for a, b in zip(c.ineq_mat, c.ineq_rhs)
        )

    def ri_point(self) -> Vec:
        """A rational point of the relative interior, by maximizing a joint slack."""
        if self._ri_point is not None:
            return self._ri_point
        if self.is_empty():
            raise EmptySetError("relative interior point of the empty set")
        c = self.reduced_hrep()
        n = self.n
        rows = [tuple(a) + (ONE,) for a in c.ineq_mat]
        rows.append(zeros(n) + (ONE,))
        rhs = list(c.ineq_rhs) + [ONE]
        eqs = [tuple(e) + (ZERO,) for e in c.eq_mat]
        res = lp.lp_solve(
            lp.LPProblem(
                zeros(n) + (ONE,), lp.MAX, tuple(rows), tuple(rhs), tuple(eqs), c.eq_rhs
            )
        )
        if not isinstance(res, lp.Optimal) or not res.value > 0:
            raise InternalCheckError("nonempty set admits no strict slack point")
        point = res.x[:n]
        if not self.ri_contains(point):
            raise InternalCheckError("slack point escapes the relative interior")
        self._ri_point = point
        return point

    # -- operations ----------------------------------------------------------

    def intersect(self, other: "Polyhedron") -> "Polyhedron":
        if self.n != other.n:
            raise DimensionMismatch("intersection of different ambient dimensions")
        a, b = self.hrep, other.hrep
        return Polyhedron(
            hrep=HRep(
                a.ineq_mat + b.ineq_mat,
                a.ineq_rhs + b.ineq_rhs,
                a.eq_mat + b.eq_mat,
                a.eq_rhs + b.eq_rhs,
                self.n,
            )
        )

    def product(self, other: "Polyhedron") -> "Polyhedron":
        a, b = self.hrep, other.hrep
        n, m = self.n, other.n
        pad_left = lambda row: tuple(row) + zeros(m)
        pad_right = lambda row: zeros(n) + tuple(row)
        return Polyhedron(
            hrep=HRep(
                tuple(pad_left(r) for r in a.ineq_mat)
                + tuple(pad_right(r) for r in b.ineq_mat),
                a.ineq_rhs + b.ineq_rhs,
                tuple(pad_left(r) for r in a.eq_mat)
                + tuple(pad_right(r) for r in b.eq_mat),
                a.eq_rhs + b.eq_rhs,
                n + m,
            )
        )

    def linear_image(self, m: Mat) -> "Polyhedron":
        """Image under ``x -> M x`` (closed; computed on generators)."""
        rows = [vec(r) for r in m]
        if rows and len(rows[0]) != self.n:
            raise DimensionMismatch("matrix width differs from ambient dimension")
        out_n = len(rows)
        g = self.genrep
        if not g.points:
            return Polyhedron.empty(out_n)
        apply = lambda v: tuple(dot(r, v) for r in rows)
        points = sorted({apply(p) for p in g.points})
        rays = sorted({primitive(apply(r)) for r in g.rays} - {zeros(out_n)})
        lines = sorted({primitive_signed(apply(l)) for l in g.lines} - {zeros(out_n)})
        return Polyhedron.from_genrep(points, rays, lines, n=out_n)

    def linear_preimage(self, m: Mat, shift=None) -> "Polyhedron":
        """Preimage ``{x : M x + shift in self}``; exact constraint substitution."""
        rows = [vec(r) for r in m]
        if len(rows) != self.n:
            raise DimensionMismatch("matrix height differs from ambient dimension")
        in_n = len(rows[0]) if rows else 0
        shift = vec(shift) if shift is not None else zeros(self.n)
        h = self.hrep
        columns = list(zip(*rows)) if rows else []

        def compose(a):
            return tuple(dot(a, col) for col in columns)

        ineq = tuple(compose(a) for a in h.ineq_mat)
        ineq_rhs = tuple(b - dot(a, shift) for a, b in zip(h.ineq_mat, h.ineq_rhs))
        eq = tuple(compose(e) for e in h.eq_mat)
        eq_rhs = tuple(d - dot(e, shift) for e, d in zip(h.eq_mat, h.eq_rhs))
        return Polyhedron(hrep=HRep(ineq, ineq_rhs, eq, eq_rhs, in_n))

    def project(self, coords: Sequence[int]) -> "Polyhedron":
        """Coordinate projection by Fourier-Motzkin elimination.

        Equality rows eliminate variables by substitution first; each
        elimination round ends with exact LP redundancy pruning to keep the
        intermediate systems small.
        """
        coords = list(coords)
        if len(set(coords)) != len(coords) or any(
            c < 0 or c >= self.n for c in coords
        ):
            raise DimensionMismatch("projection coordinates must be distinct and in range")
        if self.is_empty():
            return Polyhedron.empty(len(coords))
        h = self.hrep
        ineq = [list(r) + [b] for r, b in zip(h.ineq_mat, h.ineq_rhs)]
        eq = [list(r) + [d] for r, d in zip(h.eq_mat, h.eq_rhs)]
        alive = list(range(self.n))
        for k in sorted(set(range(self.n)) - set(coords)):
            col = alive.index(k)
            pivot_eq = next((row for row in eq if row[col] != 0), None)
            if pivot_eq is not None:
                eq.remove(pivot_eq)
                inv = ONE / pivot_eq[col]
                pivot_eq = [x * inv for x in pivot_eq]
                for rows in (ineq, eq):
                    for row in rows:
                        if row[col] != 0:
                            f = row[col]
                            for j in range(len(row)):
                                row[j] -= f * pivot_eq[j]
            else:
                pos = [row for row in ineq if row[col] > 0]
                negv = [row for row in ineq if row[col] < 0]
                zero = [row for row in ineq if row[col] == 0]
                combos = []
                for p in pos:
                    for q in negv:
                        combos.append(
                            [p[j] * (-q[col]) + q[j] * p[col] for j in range(len(p))]
                        )
                ineq = zero + combos
            for row in ineq:
                del row[col]
            for row in eq:
                del row[col]
            alive.remove(k)
            ineq = _clean_rows(ineq)
            if ineq is None:
                return Polyhedron.empty(len(coords))
            kept_eq = []
            for row in eq:
                if all(x == 0 for x in row[:-1]):
                    if row[-1] != 0:
                        return Polyhedron.empty(len(coords))
                else:
                    kept_eq.append(row)
            eq = kept_eq
            if len(ineq) > 2 * (len(alive) + 2):
                ineq = _lp_prune(ineq, eq)
        ineq = _clean_rows(ineq)
        if ineq is None:
            return Polyhedron.empty(len(coords))
        ineq = _lp_prune(ineq, eq)
        perm = [alive.index(c) for c in coords]
        sel = lambda row: tuple(row[j] for j in perm) + (row[-1],)
        ineq = [sel(r) for r in ineq]
        eq = [sel(r) for r in eq]
        return Polyhedron(
            hrep=HRep(
                tuple(r[:-1] for r in ineq),
                tuple(r[-1] for r in ineq),
                tuple(r[:-1] for r in eq),
                tuple(r[-1] for r in eq),
                len(coords),
            )
        )

    def recession_cone(self) -> "Polyhedron":
        h = self.hrep
        return Polyhedron(
            hrep=HRep(
                h.ineq_mat,
                zeros(len(h.ineq_mat)),
                h.eq_mat,
                zeros(len(h.eq_mat)),
                self.n,
            )
        )

    def minkowski_sum(self, other: "Polyhedron") -> "Polyhedron":
        if self.n != other.n:
            raise DimensionMismatch("sum of different ambient dimensions")
        if self.is_empty() or other.is_empty():
            return Polyhedron.empty(self.n)
        a, b = self.genrep, other.genrep
        points = sorted({vadd(p, q) for p in a.points for q in b.points})
        rays = sorted(set(a.rays) | set(b.rays))
        lines = sorted(set(a.lines) | set(b.lines))
        return Polyhedron.from_genrep(points, rays, lines, n=self.n)

    def translate(self, v) -> "Polyhedron":
        v = vec(v)
        h = self.hrep
        return Polyhedron(
            hrep=HRep(
                h.ineq_mat,
                tuple(b + dot(a, v) for a, b in zip(h.ineq_mat, h.ineq_rhs)),
                h.eq_mat,
                tuple(d + dot(e, v) for e, d in zip(h.eq_mat, h.eq_rhs)),
                self.n,
            )
        )

    # -- comparisons ---------------------------------------------------------

    def subset_of(self, other: "Polyhedron") -> bool:
        """Exact containment test: generators of self against other's constraints."""
        if self.n != other.n:
            raise DimensionMismatch("containment across different ambient dimensions")
        if self.is_empty():
            return True
        if other.is_empty():
            return False
        g = self.genrep
        h = other.hrep
        for p in g.points:
            if not other.contains(p):
                return False
        for r in g.rays:
            if any(dot(a, r) > 0 for a in h.ineq_mat) or any(
                dot(e, r) != 0 for e in h.eq_mat
            ):
                return False
        for l in g.lines:
            if any(dot(a, l) != 0 for a in h.ineq_mat) or any(
                dot(e, l) != 0 for e in h.eq_mat
            ):
                return False
        return True

    def set_equal(self, other: "Polyhedron") -> bool:
        return self.subset_of(other) and other.subset_of(self)

    def vertices(self) -> tuple:
        return self.canonical_genrep().points

    def validate(self) -> None:
        """Mutual-containment audit of the two descriptions."""
        g = self.genrep
        h = self.hrep
        if not Polyhedron(genrep=g).subset_of(Polyhedron(hrep=h)):
            raise InternalCheckError("generator description escapes constraints")
        if not Polyhedron(hrep=h).subset_of(Polyhedron(genrep=g)):
            raise InternalCheckError("constraint description exceeds generators")

    def canonical_key(self):
        c = self.canonical_hrep()
        return (self.n, c.ineq_mat, c.ineq_rhs, c.eq_mat, c.eq_rhs)

    def __repr__(self):
        h = self._hrep
        g = self._genrep
        parts = [f"n={self.n}"]
        if h is not None:
            parts.append(f"{len(h.ineq_mat)} ineq, {len(h.eq_mat)} eq")
        if g is not None:
            parts.append(f"{len(g.points)} pts, {len(g.rays)} rays, {len(g.lines)} lines")
        return f"Polyhedron({', '.join(parts)})"


def ri_meet(polys: Sequence[Polyhedron]) -> Optional[Vec]:
    """A point in the intersection of the relative interiors, or ``None``.

    One joint LP: maximize a slack shared by every non-implicit inequality
    of every operand; the intersection of relative interiors is nonempty
    exactly when the optimal slack is positive.
    """
    if not polys:
        raise EmptySetError("relative-interior meet of no sets")
    n = polys[0].n
    if any(p.n != n for p in polys):
        raise DimensionMismatch("relative-interior meet across dimensions")
    if any(p.is_empty() for p in polys):
        return None
    rows = [zeros(n) + (ONE,)]
    rhs = [ONE]
    eq_rows: list = []
    eq_rhs: list = []
    for p in polys:
        c = p.reduced_hrep()
        rows.extend(tuple(a) + (ONE,) for a in c.ineq_mat)
        rhs.extend(c.ineq_rhs)
        eq_rows.extend(tuple(e) + (ZERO,) for e in c.eq_mat)
        eq_rhs.extend(c.eq_rhs)
    res = lp.lp_solve(
        lp.LPProblem(
            zeros(n) + (ONE,), lp.MAX, tuple(rows), tuple(rhs), tuple(eq_rows), tuple(eq_rhs)
        )
    )
    if isinstance(res, lp.Optimal) and res.value > 0:
        return res.x[:n]
    return None


def lex_min_point(ineq_mat, ineq_rhs, eq_mat, eq_rhs, n: int, anchor: Vec) -> Vec:
    """Lexicographically smallest point of a nonempty system.

    ``anchor`` must be feasible; it fixes a box clamp so every coordinate
    LP is bounded, keeping the output deterministic even for unbounded
    regions.
    """
    bound = max((abs(x) for x in anchor), default=ZERO) + ONE
    rows = [list(r) for r in ineq_mat]
    rhs = list(ineq_rhs)
    for i in range(n):
        rows.append(list(unit(n, i)))
        rhs.append(bound)
        rows.append(list(vneg(unit(n, i))))
        rhs.append(bound)
    eqs = [list(r) for r in eq_mat]
    eqd = list(eq_rhs)
    point = []
    for i in range(n):
        res = lp.lp_solve(
            lp.LPProblem(
                unit(n, i),
                lp.MIN,
                tuple(tuple(r) for r in rows),
                tuple(rhs),
                tuple(tuple(r) for r in eqs),
                tuple(eqd),
            )
        )
        if not isinstance(res, lp.Optimal):
            raise InternalCheckError("lexicographic minimization on an infeasible system")
        point.append(res.value)
        eqs.append(list(unit(n, i)))
        eqd.append(res.value)
    return tuple(point)


def dd_convert(p: Polyhedron) -> Polyhedron:
    """Realize both descriptions of ``p``; idempotent.

    The derived generators are checked against the constraints on the spot;
    the full mutual-containment audit is :meth:`Polyhedron.validate`.
    """
    p.hrep
    p.genrep
    return p


def _clean_rows(rows):
    """Drop trivial rows ``0 <= b`` (b >= 0); return None when some ``0 <= b < 0``."""
    out = []
    seen = set()
    for row in rows:
        body = row[:-1]
        if all(x == 0 for x in body):
            if row[-1] < 0:
                return None
            continue
        scaled = primitive(tuple(row))
        if scaled not in seen:
            seen.add(scaled)
            out.append(list(scaled))
    return out


def _lp_prune(ineq, eq):
    """Remove inequality rows implied by the remaining system (exact LPs)."""
    pruned = [list(r) for r in ineq]
    i = 0
    while i < len(pruned):
        a = tuple(pruned[i][:-1])
        b = pruned[i][-1]
        others = pruned[:i] + pruned[i + 1:]
        res = lp.lp_solve(
            lp.LPProblem(
                a,
                lp.MAX,
                tuple(tuple(r[:-1]) for r in others),
                tuple(r[-1] for r in others),
                tuple(tuple(r[:-1]) for r in eq),
                tuple(r[-1] for r in eq),
            )
        )
        if isinstance(res, lp.Optimal) and res.value <= b:
            pruned.pop(i)
        else:
            i += 1
    return pruned


def _in_cone(target, rays, lines) -> bool:
    """Is ``target`` a conic combination of ``rays`` plus a line-span element?"""
    n = len(target)
    k, l = len(rays), len(lines)
    if k + l == 0:
        return is_zero_vec(target)
    eq_rows = []
    for i in range(n):
        eq_rows.append(tuple(r[i] for r in rays) + tuple(v[i] for v in lines))
    ineq = [tuple(-ONE if j == i else ZERO for j in range(k + l)) for i in range(k)]
    return (
        lp.feasible_point(ineq, zeros(k), eq_rows, target, n=k + l) is not None
    )


def _in_hull(target, points, rays, lines) -> bool:
    """Is ``target`` in conv(points) + cone(rays) + span(lines)?"""
    n = len(target)
    np_, nr, nl = len(points), len(rays), len(lines)
    total = np_ + nr + nl
    if np_ == 0:
        return False
    eq_rows = []
    eq_rhs = []
    for i in range(n):
        eq_rows.append(
            tuple(p[i] for p in points)
            + tuple(r[i] for r in rays)
            + tuple(v[i] for v in lines)
        )
        eq_rhs.append(target[i])
    eq_rows.append((ONE,) * np_ + zeros(nr + nl))
    eq_rhs.append(ONE)
    ineq = [
        tuple(-ONE if j == i else ZERO for j in range(total)) for i in range(np_ + nr)
    ]
    return (
        lp.feasible_point(ineq, zeros(np_ + nr), eq_rows, eq_rhs, n=total) is not None
    )
