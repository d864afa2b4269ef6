"""Randomized instance generation and the named theorem battery.

Every claim of the underlying calculus is re-derived on desk-scale random
instances: generators produce punctured polyhedra, graph mappings, and
piecewise-linear functions from a seed (byte-identical across runs), each
theorem id has a checker that draws instances, tests the hypothesis, skips
draws whose qualification fails, and asserts the conclusion exactly, and
failures carry the replayable serialized instances.

Instances are biased toward qualified draws: carriers contain the origin
in their relative interior and punctures are projected onto facets when a
nearly convex instance is required, so skip ratios stay informative.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

from . import gendiff, ncfunc, ncset, serialize, svmap
from .errors import EmptySetError, FidelityError, UnknownTheoremIdError
from .ncfunc import NCFunction
from .ncset import EXACT, PuncturedPolyhedron
from .polyhedron import Polyhedron, ri_meet
from .rational import ONE, Rat, Vec, ZERO, dot, rat, vadd, vec, vscale, vsub, zeros
from .svmap import SVMap


@dataclass(frozen=True)
class InstanceSpec:
    """Deterministic generation parameters; same spec, same instances."""

    seed: int = 0
    n: int = 2
    p: int = 1
    max_ineqs: int = 6
    max_punctures: int = 2
    coeff_bound: int = 3
    force_yes: bool = True


@dataclass
class TheoremReport:
    theorem_id: str
    trials: int
    passes: int = 0
    failures: List[str] = field(default_factory=list)
    skips: int = 0

    def ok(self) -> bool:
        return not self.failures

    def skip_ratio(self) -> float:
        return self.skips / self.trials if self.trials else 0.0

    def summary(self) -> str:
        return (
            f"{self.theorem_id}: trials={self.trials} passes={self.passes} "
            f"skips={self.skips} failures={len(self.failures)}"
        )


class CheckFailure(Exception):
    def __init__(self, message: str, instances: Optional[dict] = None):
        super().__init__(message)
        self.instances = instances or {}


def _rng(spec: InstanceSpec, salt: str) -> random.Random:
    return random.Random(f"{spec.seed}:{salt}")


def _nonzero_vec(rng: random.Random, n: int, bound: int):
    while True:
        v = tuple(rat(rng.randint(-bound, bound)) for _ in range(n))
        if any(x != 0 for x in v):
            return v


def gen_carrier(spec: InstanceSpec, rng: random.Random, dim: int) -> Polyhedron:
    """Random carrier with the origin in its relative interior."""
    rows, rhs = [], []
    for i in range(dim):
        e = [ZERO] * dim
        e[i] = ONE
        rows.append(tuple(e))
        rhs.append(rat(rng.randint(1, 2)))
        e2 = [ZERO] * dim
        e2[i] = -ONE
        rows.append(tuple(e2))
        rhs.append(rat(rng.randint(1, 2)))
    extra = rng.randint(0, max(0, spec.max_ineqs - 2 * dim))
    for _ in range(extra):
        a = _nonzero_vec(rng, dim, spec.coeff_bound)
        rows.append(a)
        rhs.append(rat(rng.randint(1, spec.coeff_bound)))
    eqs, eq_rhs = [], []
    if dim >= 2 and rng.random() < 0.25:
        eqs.append(_nonzero_vec(rng, dim, 2))
        eq_rhs.append(ZERO)
    return Polyhedron.from_hrep(rows, rhs, eqs, eq_rhs, n=dim)


def gen_set(
    spec: InstanceSpec,
    rng: Optional[random.Random] = None,
    dim: Optional[int] = None,
    force_yes: Optional[bool] = None,
) -> PuncturedPolyhedron:
    """Random punctured polyhedron.

    With ``force_yes`` punctures are projected onto carrier facets (points
    or whole faces), so the instance is nearly convex by construction;
    otherwise punctures may land in the relative interior.
    """
    if rng is None:
        rng = _rng(spec, "set")
    dim = spec.n if dim is None else dim
    force = spec.force_yes if force_yes is None else force_yes
    carrier = gen_carrier(spec, rng, dim)
    count = rng.randint(0, spec.max_punctures)
    pieces = []
    c = carrier.reduced_hrep()
    for _ in range(count):
        if force or rng.random() < 0.5:
            if not c.ineq_mat:
                continue
            idx = rng.randrange(len(c.ineq_mat))
            face = carrier.intersect(
                Polyhedron.from_hrep((), (), [c.ineq_mat[idx]], [c.ineq_rhs[idx]], n=dim)
            )
            if face.is_empty():
                continue
            if rng.random() < 0.3:
                pieces.append(face)
            else:
                pieces.append(Polyhedron.singleton(face.ri_point()))
        else:
            anchor = carrier.ri_point()
            target = rng.choice(carrier.canonical_genrep().points)
            t = Rat(rng.randint(0, 3), 7)
            inside = vadd(anchor, vscale(t, vsub(target, anchor)))
            pieces.append(Polyhedron.singleton(inside))
    return PuncturedPolyhedron(carrier, pieces, EXACT)


def gen_map(
    spec: InstanceSpec,
    rng: Optional[random.Random] = None,
    n: Optional[int] = None,
    p: Optional[int] = None,
    force_yes: Optional[bool] = None,
) -> SVMap:
    if rng is None:
        rng = _rng(spec, "map")
    n = spec.n if n is None else n
    p = spec.p if p is None else p
    graph = gen_set(spec, rng, dim=n + p, force_yes=force_yes)
    return SVMap(n, p, graph)


def gen_fn(
    spec: InstanceSpec,
    rng: Optional[random.Random] = None,
    dim: Optional[int] = None,
    force_yes: Optional[bool] = None,
    full_dim: bool = False,
) -> NCFunction:
    if rng is None:
        rng = _rng(spec, "fn")
    dim = spec.n if dim is None else dim
    count = rng.randint(1, 2)
    pieces = [
        (
            tuple(rat(rng.randint(-spec.coeff_bound, spec.coeff_bound)) for _ in range(dim)),
            rat(rng.randint(-spec.coeff_bound, spec.coeff_bound)),
        )
        for _ in range(count)
    ]
    dom = gen_set(spec, rng, dim=dim, force_yes=force_yes)
    if full_dim:
        while dom.carrier.dim() != dim:
            dom = gen_set(spec, rng, dim=dim, force_yes=force_yes)
    return NCFunction(dim, pieces, dom)


def _rand_vec(rng: random.Random, n: int, bound: int = 2):
    return tuple(rat(rng.randint(-bound, bound)) for _ in range(n))


def _rand_matrix(rng: random.Random, rows: int, cols: int, bound: int = 2):
    return tuple(_rand_vec(rng, cols, bound) for _ in range(rows))


def _dims(spec: InstanceSpec, rng: random.Random):
    return rng.randint(1, max(1, spec.n)), rng.randint(1, max(1, spec.p))


def _serialize_all(instances: dict) -> str:
    parts = []
    for name, obj in instances.items():
        try:
            parts.append(serialize.render(obj, name))
        except TypeError:
            parts.append(f"# {name}: {obj!r}")
    return "\n".join(parts)


def _require(cond: bool, message: str, instances: dict):
    if not cond:
        raise CheckFailure(message, instances)


# ---------------------------------------------------------------------------
# individual theorem checkers; each returns "pass" or "skip"
# ---------------------------------------------------------------------------


def _check_ri_linear_image(spec, rng):
    n, p = _dims(spec, rng)
    omega = gen_set(spec, rng, dim=n, force_yes=True)
    m = _rand_matrix(rng, p, n)
    ctx = {"omega": omega}
    img = ncset.linear_image(m, omega)
    ctx["image"] = img
    x0 = omega.carrier.ri_point()
    fx0 = tuple(dot(row, x0) for row in m)
    _require(img.carrier.ri_contains(fx0), "image of an ri point left the ri", ctx)
    y0 = img.carrier.ri_point()
    c = omega.carrier.reduced_hrep()
    from . import lp

    rows = [tuple(a) + (ONE,) for a in c.ineq_mat]
    rhs = list(c.ineq_rhs)
    rows.append(zeros(n) + (ONE,))
    rhs.append(ONE)
    eq_rows = [tuple(e) + (ZERO,) for e in c.eq_mat]
    eq_rhs = list(c.eq_rhs)
    for row, target in zip(m, y0):
        eq_rows.append(tuple(row) + (ZERO,))
        eq_rhs.append(target)
    res = lp.lp_solve(
        lp.LPProblem(
            zeros(n) + (ONE,), lp.MAX, tuple(rows), tuple(rhs), tuple(eq_rows), tuple(eq_rhs)
        )
    )
    _require(
        isinstance(res, lp.Optimal) and res.value > 0,
        "ri point of the image has no ri preimage",
        ctx,
    )
    return "pass"


def _check_ri_intersection(spec, rng):
    n, _ = _dims(spec, rng)
    o1 = gen_set(spec, rng, dim=n, force_yes=True)
    o2 = gen_set(spec, rng, dim=n, force_yes=True)
    witness = ri_meet([o1.carrier, o2.carrier])
    if witness is None:
        return "skip"
    inter, report = ncset.intersect(o1, o2)
    ctx = {"first": o1, "second": o2, "intersection": inter}
    _require(report.holds, "meet witness exists but report disagrees", ctx)
    _require(
        ncset.check_nearly_convex(inter).kind == "yes",
        "qualified intersection is not nearly convex",
        ctx,
    )
    probes = [witness, inter.carrier.ri_point(), o1.carrier.ri_point(), o2.carrier.ri_point()]
    probes.extend(inter.carrier.genrep.points[:2])
    for x in probes:
        both = o1.carrier.ri_contains(x) and o2.carrier.ri_contains(x)
        _require(
            inter.carrier.ri_contains(x) == both,
            "relative interior of the intersection mismatches the conjunction",
            ctx,
        )
    return "pass"


def _check_segment(spec, rng):
    n, _ = _dims(spec, rng)
    omega = gen_set(spec, rng, dim=n, force_yes=True)
    ctx = {"omega": omega}
    a = omega.carrier.ri_point()
    points = omega.carrier.genrep.points
    b = points[rng.randrange(len(points))]
    for t in (ZERO, Rat(1, 3), Rat(9, 10), Rat(rng.randint(0, 15), 16)):
        x = vadd(vscale(ONE - t, a), vscale(t, b))
        _require(ncset.ri_member(omega, x), "half-open segment left the ri", ctx)
    return "pass"


def _check_ri_characterization(spec, rng):
    n, _ = _dims(spec, rng)
    omega = gen_set(spec, rng, dim=n, force_yes=True)
    ctx = {"omega": omega}
    y0 = omega.carrier.ri_point()
    points = omega.carrier.genrep.points
    x = points[rng.randrange(len(points))]
    if x == y0:
        return "pass"
    t = ONE
    for _ in range(14):
        z = vadd(y0, vscale(t, vsub(y0, x)))
        if omega.carrier.ri_contains(z):
            lam = t / (ONE + t)
            mid = vadd(vscale(lam, x), vscale(ONE - lam, z))
            _require(mid == y0, "constructed point is not strictly between", ctx)
            return "pass"
        t = t / 2
    raise CheckFailure("no stretched point inside the ri", ctx)


def _check_separation_iff(spec, rng):
    n, _ = _dims(spec, rng)
    o1 = gen_set(spec, rng, dim=n, force_yes=True)
    o2 = gen_set(spec, rng, dim=n, force_yes=True)
    shift = tuple(rat(rng.randint(-4, 4)) for _ in range(n))
    o2 = ncset.translate(o2, shift)
    ctx = {"first": o1, "second": o2}
    disjoint = ri_meet([o1.carrier, o2.carrier]) is None
    result = ncset.properly_separate(o1, o2)
    _require(result.separable == disjoint, "separability mismatches disjointness", ctx)
    if result.separable:
        v = result.v
        g1 = o1.carrier.genrep
        g2 = o2.carrier.genrep
        sup1 = max(dot(v, p) for p in g1.points)
        inf2 = min(dot(v, p) for p in g2.points)
        _require(sup1 == result.sup1 and inf2 == result.inf2, "certificate bounds drift", ctx)
        _require(sup1 <= inf2, "weak inequality fails on generators", ctx)
        xh, yh = result.strict_pair
        _require(dot(v, xh) < dot(v, yh), "strict pair is not strict", ctx)
        _require(
            ncset.membership(o1, xh) and ncset.membership(o2, yh),
            "strict pair left the sets",
            ctx,
        )
    else:
        x = result.common_ri_point
        _require(
            o1.carrier.ri_contains(x) and o2.carrier.ri_contains(x),
            "common point is not in both relative interiors",
            ctx,
        )
    return "pass"


def _check_graph_ri(spec, rng):
    n, p = _dims(spec, rng)
    f = gen_map(spec, rng, n=n, p=p, force_yes=True)
    ctx = {"mapping": f}
    probes = []
    carrier = f.graph.carrier
    probes.append(carrier.ri_point())
    probes.extend(carrier.genrep.points[:2])
    anchor = carrier.ri_point()
    for q in carrier.genrep.points[:2]:
        probes.append(vscale(Rat(1, 2), vadd(anchor, q)))
    for point in probes:
        x, y = point[:n], point[n:]
        _require(
            svmap.ri_graph_member(f, x, y) == carrier.ri_contains(point),
            "graph ri formula mismatches the carrier test",
            ctx,
        )
    return "pass"


def _check_epi_ri(spec, rng):
    n, _ = _dims(spec, rng)
    f = gen_fn(spec, rng, dim=n, force_yes=True)
    ctx = {"function": f}
    epi = ncfunc.epigraph_set(f)
    x0 = f.dom.carrier.ri_point()
    base = f.base(x0)
    for lam, expected in ((base + 1, True), (base, False), (base - 1, False)):
        got = ncfunc.ri_epi_member(f, x0, lam)
        _require(got == expected, "epigraph ri formula fails at an ri point", ctx)
    boundary = f.dom.carrier.genrep.points[0]
    if not f.dom.carrier.ri_contains(boundary):
        _require(
            not ncfunc.ri_epi_member(f, boundary, f.base(boundary) + 1),
            "epigraph ri formula accepts a boundary point",
            ctx,
        )
    _require(
        epi.carrier.ri_contains(x0 + (base + 1,)),
        "epigraph carrier rejects a strict point",
        ctx,
    )
    return "pass"


def _check_value_nearly_convex(spec, rng):
    n, p = _dims(spec, rng)
    f = gen_map(spec, rng, n=n, p=p, force_yes=True)
    ctx = {"mapping": f}
    x = f.graph.carrier.ri_point()[:n]
    val = svmap.value(f, x)
    ctx["value"] = val
    _require(
        ncset.check_nearly_convex(val).kind == "yes",
        "value at an ri domain point is not nearly convex",
        ctx,
    )
    _require(not val.carrier.is_empty(), "value at an ri domain point is empty", ctx)
    return "pass"


def _check_dim1_convex(spec, rng):
    f = gen_fn(spec, rng, dim=1, force_yes=True)
    ctx = {"function": f}
    epi = ncfunc.epigraph_set(f)
    if ncset.check_nearly_convex(epi).kind != "yes":
        raise CheckFailure("forced instance is not nearly convex", ctx)
    hull = ncfunc.co_f(f)
    _require(
        ncset.near_equal(epi, ncfunc.epigraph_set(hull)),
        "line function is not nearly equal to its hull",
        ctx,
    )
    members = [ncset.find_member(f.dom)]
    for pt in f.dom.carrier.genrep.points:
        if ncset.membership(f.dom, pt):
            members.append(pt)
    for x in members:
        for u in members:
            for t in (Rat(1, 3), Rat(1, 2), Rat(3, 4)):
                mid = vadd(vscale(t, x), vscale(ONE - t, u))
                fx = ncfunc.evaluate(f, x)
                fu = ncfunc.evaluate(f, u)
                fm = ncfunc.evaluate(f, mid)
                _require(
                    fm <= t * fx + (ONE - t) * fu,
                    "convexity inequality fails on the line",
                    ctx,
                )
    return "pass"


def _check_co_sandwich(spec, rng):
    n, _ = _dims(spec, rng)
    f = gen_fn(spec, rng, dim=n, force_yes=True)
    ctx = {"function": f}
    hull = ncfunc.co_f(f)
    _require(
        ncfunc.epigraph_set(f).carrier.set_equal(ncfunc.epigraph_set(hull).carrier),
        "hull epigraph carrier drifted",
        ctx,
    )
    return "pass"


def _check_f_near_co(spec, rng):
    n, _ = _dims(spec, rng)
    f = gen_fn(spec, rng, dim=n, force_yes=True)
    ctx = {"function": f}
    hull = ncfunc.co_f(f)
    _require(
        ncset.near_equal(ncfunc.epigraph_set(f), ncfunc.epigraph_set(hull)),
        "function is not nearly equal to its convex hull",
        ctx,
    )
    return "pass"


def _check_lift(spec, rng):
    n, _ = _dims(spec, rng)
    f = gen_fn(spec, rng, dim=n, force_yes=True)
    ctx = {"function": f}
    lifted = ncfunc.lift_alpha(f)
    x = ncset.find_member(f.dom)
    for alpha in (rat(-1), Rat(1, 2)):
        _require(
            ncfunc.evaluate(lifted, x + (alpha,)) == ncfunc.evaluate(f, x) + alpha,
            "vertical lift changes values",
            ctx,
        )
    _require(
        ncset.check_nearly_convex(ncfunc.epigraph_set(lifted)).kind == "yes",
        "vertical lift is not nearly convex",
        ctx,
    )
    return "pass"


def _check_sum_map(spec, rng):
    n, p = _dims(spec, rng)
    f1 = gen_map(spec, rng, n=n, p=p, force_yes=True)
    f2 = gen_map(spec, rng, n=n, p=p, force_yes=True)
    if ri_meet([svmap.domain(f1).carrier, svmap.domain(f2).carrier]) is None:
        return "skip"
    total, report = svmap.sum_maps(f1, f2)
    ctx = {"first": f1, "second": f2, "sum": total}
    _require(report.holds, "qualification report disagrees with the meet", ctx)
    _require(
        ncset.check_nearly_convex(total.graph).kind == "yes",
        "qualified sum graph is not nearly convex",
        ctx,
    )
    from . import lp

    g1 = f1.graph.carrier.hrep
    g2 = f2.graph.carrier.hrep
    for gen in total.graph.carrier.genrep.points[:3]:
        x, y = gen[:n], gen[n:]
        rows, rhs, eqs, eq_rhs = [], [], [], []
        for a, b in zip(g1.ineq_mat, g1.ineq_rhs):
            rows.append(tuple(a[n:]) + zeros(p))
            rhs.append(b - dot(a[:n], x))
        for a, b in zip(g1.eq_mat, g1.eq_rhs):
            eqs.append(tuple(a[n:]) + zeros(p))
            eq_rhs.append(b - dot(a[:n], x))
        for a, b in zip(g2.ineq_mat, g2.ineq_rhs):
            rows.append(zeros(p) + tuple(a[n:]))
            rhs.append(b - dot(a[:n], x))
        for a, b in zip(g2.eq_mat, g2.eq_rhs):
            eqs.append(zeros(p) + tuple(a[n:]))
            eq_rhs.append(b - dot(a[:n], x))
        for i in range(p):
            row = [ZERO] * (2 * p)
            row[i] = ONE
            row[p + i] = ONE
            eqs.append(tuple(row))
            eq_rhs.append(y[i])
        from .lp import feasible_point

        _require(
            feasible_point(rows, rhs, eqs, eq_rhs, n=2 * p) is not None,
            "sum graph generator admits no decomposition",
            ctx,
        )
    return "pass"


def _check_sum_fn(spec, rng):
    n, _ = _dims(spec, rng)
    f1 = gen_fn(spec, rng, dim=n, force_yes=True)
    f2 = gen_fn(spec, rng, dim=n, force_yes=True)
    if ri_meet([f1.dom.carrier, f2.dom.carrier]) is None:
        return "skip"
    total, report = ncfunc.add(f1, f2)
    ctx = {"first": f1, "second": f2, "sum": total}
    _require(report.holds, "qualification report disagrees with the meet", ctx)
    _require(
        ncset.check_nearly_convex(ncfunc.epigraph_set(total)).kind == "yes",
        "qualified sum is not nearly convex",
        ctx,
    )
    x = ncset.find_member(total.dom)
    _require(
        ncfunc.evaluate(total, x)
        == ncfunc.evaluate(f1, x) + ncfunc.evaluate(f2, x),
        "sum values drift",
        ctx,
    )
    return "pass"


def _check_chain_map(spec, rng):
    n, p = _dims(spec, rng)
    q = rng.randint(1, max(1, spec.p))
    f = gen_map(spec, rng, n=n, p=p, force_yes=True)
    g = gen_map(spec, rng, n=p, p=q, force_yes=True)
    if ri_meet([svmap.range_of(f).carrier, svmap.domain(g).carrier]) is None:
        return "skip"
    comp, report = svmap.compose(g, f)
    ctx = {"inner": f, "outer": g, "composition": comp}
    _require(report.holds, "qualification report disagrees with the meet", ctx)
    _require(
        ncset.check_nearly_convex(comp.graph).kind == "yes",
        "qualified composition is not nearly convex",
        ctx,
    )
    from .lp import feasible_point

    hf = f.graph.carrier.hrep
    hg = g.graph.carrier.hrep
    for gen in comp.graph.carrier.genrep.points[:3]:
        x, z = gen[:n], gen[n:]
        rows, rhs, eqs, eq_rhs = [], [], [], []
        for a, b in zip(hf.ineq_mat, hf.ineq_rhs):
            rows.append(tuple(a[n:]))
            rhs.append(b - dot(a[:n], x))
        for a, b in zip(hf.eq_mat, hf.eq_rhs):
            eqs.append(tuple(a[n:]))
            eq_rhs.append(b - dot(a[:n], x))
        for a, b in zip(hg.ineq_mat, hg.ineq_rhs):
            rows.append(tuple(a[:p]))
            rhs.append(b - dot(a[p:], z))
        for a, b in zip(hg.eq_mat, hg.eq_rhs):
            eqs.append(tuple(a[:p]))
            eq_rhs.append(b - dot(a[p:], z))
        _require(
            feasible_point(rows, rhs, eqs, eq_rhs, n=p) is not None,
            "composition generator admits no middle point",
            ctx,
        )
    return "pass"


def _check_affine_pre(spec, rng):
    n, p = _dims(spec, rng)
    f = gen_fn(spec, rng, dim=p, force_yes=True)
    a = _rand_matrix(rng, p, n)
    b = _rand_vec(rng, p)
    ctx = {"function": f}
    try:
        composed, report = ncfunc.precompose_affine(f, a, b)
    except EmptySetError:
        return "skip"
    if not report.holds:
        return "skip"
    ctx["composed"] = composed
    _require(
        ncset.check_nearly_convex(ncfunc.epigraph_set(composed)).kind == "yes",
        "qualified precomposition is not nearly convex",
        ctx,
    )
    x = ncset.find_member(composed.dom)
    target = tuple(dot(row, x) + bb for row, bb in zip(a, b))
    _require(
        ncfunc.evaluate(composed, x) == ncfunc.evaluate(f, target),
        "precomposition values drift",
        ctx,
    )
    return "pass"


def _check_images(spec, rng):
    n, p = _dims(spec, rng)
    g = gen_map(spec, rng, n=n, p=p, force_yes=True)
    omega = gen_set(spec, rng, dim=n, force_yes=True)
    theta = gen_set(spec, rng, dim=p, force_yes=True)
    ctx = {"mapping": g, "argument": omega, "target": theta}
    img, report = svmap.image(g, omega)
    if report.holds:
        ctx["image"] = img
        _require(
            ncset.check_nearly_convex(img).kind == "yes",
            "qualified direct image is not nearly convex",
            ctx,
        )
    pre, report2 = svmap.preimage(g, theta)
    if report2.holds:
        ctx["preimage"] = pre
        _require(
            ncset.check_nearly_convex(pre).kind == "yes",
            "qualified inverse image is not nearly convex",
            ctx,
        )
    if not report.holds and not report2.holds:
        return "skip"
    return "pass"


def _check_intersect_map(spec, rng):
    n, p = _dims(spec, rng)
    f1 = gen_map(spec, rng, n=n, p=p, force_yes=True)
    f2 = gen_map(spec, rng, n=n, p=p, force_yes=True)
    if ri_meet([f1.graph.carrier, f2.graph.carrier]) is None:
        return "skip"
    inter, report = svmap.intersection_mapping([f1, f2])
    ctx = {"first": f1, "second": f2, "intersection": inter}
    _require(report.holds, "qualification report disagrees with the meet", ctx)
    _require(
        ncset.check_nearly_convex(inter.graph).kind == "yes",
        "qualified intersection mapping is not nearly convex",
        ctx,
    )
    return "pass"


def _check_max_fn(spec, rng):
    n, _ = _dims(spec, rng)
    f1 = gen_fn(spec, rng, dim=n, force_yes=True)
    f2 = gen_fn(spec, rng, dim=n, force_yes=True)
    if ri_meet([f1.dom.carrier, f2.dom.carrier]) is None:
        return "skip"
    top, report = ncfunc.max_fn([f1, f2])
    ctx = {"first": f1, "second": f2, "max": top}
    _require(report.holds, "qualification report disagrees with the meet", ctx)
    _require(
        ncset.check_nearly_convex(ncfunc.epigraph_set(top)).kind == "yes",
        "qualified maximum is not nearly convex",
        ctx,
    )
    x = ncset.find_member(top.dom)
    _require(
        ncfunc.evaluate(top, x)
        == max(ncfunc.evaluate(f1, x), ncfunc.evaluate(f2, x)),
        "maximum values drift",
        ctx,
    )
    return "pass"


def _common_point(o1: PuncturedPolyhedron, o2: PuncturedPolyhedron, rng):
    inter, _ = ncset.intersect(o1, o2)
    candidates = list(inter.carrier.genrep.points)
    rng.shuffle(candidates)
    for cand in candidates:
        if ncset.membership(o1, cand) and ncset.membership(o2, cand):
            return cand
    return ncset.find_member(inter)


def _check_ncone_intersect(spec, rng):
    n, _ = _dims(spec, rng)
    o1 = gen_set(spec, rng, dim=n, force_yes=True)
    o2 = gen_set(spec, rng, dim=n, force_yes=True)
    if ri_meet([o1.carrier, o2.carrier]) is None:
        return "skip"
    ctx = {"first": o1, "second": o2}
    try:
        xbar = _common_point(o1, o2, rng)
    except EmptySetError:
        return "skip"
    report = gendiff.normal_cone_intersection(o1, o2, xbar)
    _require(report.equal, "normal cone of the intersection is not the sum", ctx)
    return "pass"


def _check_coderiv_sum(spec, rng):
    n, p = _dims(spec, rng)
    f1 = gen_map(spec, rng, n=n, p=p, force_yes=True)
    f2 = gen_map(spec, rng, n=n, p=p, force_yes=True)
    witness = ri_meet([svmap.domain(f1).carrier, svmap.domain(f2).carrier])
    if witness is None:
        return "skip"
    ctx = {"first": f1, "second": f2}
    y1 = ncset.find_member(svmap.value(f1, witness))
    y2 = ncset.find_member(svmap.value(f2, witness))
    ybar = vadd(y1, y2)
    v = _rand_vec(rng, p)
    report = gendiff.coderivative_sum_rule(f1, f2, witness, ybar, v)
    _require(report.equal, "coderivative sum rule failed", ctx)
    _require(report.decomposition_independent, "decomposition dependence detected", ctx)
    return "pass"


def _check_subdiff_via_coderiv(spec, rng):
    n, _ = _dims(spec, rng)
    f = gen_fn(spec, rng, dim=n, force_yes=True)
    ctx = {"function": f}
    xbar = ncset.find_member(f.dom)
    sub = gendiff.subdifferential(f, xbar)
    cod = gendiff.coderivative(ncfunc.epigraph_mapping(f), xbar, (f.base(xbar),), (ONE,))
    _require(sub.set_equal(cod), "subdifferential and coderivative routes differ", ctx)
    for point in sub.genrep.points:
        _require(
            gendiff.subgradient_oracle(f, xbar, point),
            "computed subgradient fails the oracle",
            ctx,
        )
    for _ in range(2):
        w = _rand_vec(rng, n, bound=4)
        if not sub.contains(w):
            _require(
                not gendiff.subgradient_oracle(f, xbar, w),
                "exterior vector passes the oracle",
                ctx,
            )
    return "pass"


def _check_epi_normal_props(spec, rng):
    n, _ = _dims(spec, rng)
    f = gen_fn(spec, rng, dim=n, force_yes=True)
    ctx = {"function": f}
    xbar = ncset.find_member(f.dom)
    report = gendiff.epi_normal_properties(f, xbar, probe=Rat(rng.randint(1, 4), 2))
    _require(report.all_pass(), "epigraph normal properties failed", ctx)
    return "pass"


def _check_subdiff_sum(spec, rng):
    n, _ = _dims(spec, rng)
    f1 = gen_fn(spec, rng, dim=n, force_yes=True)
    f2 = gen_fn(spec, rng, dim=n, force_yes=True)
    if ri_meet([f1.dom.carrier, f2.dom.carrier]) is None:
        return "skip"
    ctx = {"first": f1, "second": f2}
    dom, _ = ncset.intersect(f1.dom, f2.dom)
    try:
        xbar = ncset.find_member(dom)
    except EmptySetError:
        return "skip"
    report = gendiff.subdiff_sum_rule([f1, f2], xbar)
    _require(report.equal, "subdifferential sum rule failed", ctx)
    return "pass"


def _check_coderiv_chain(spec, rng):
    n, p = _dims(spec, rng)
    q = rng.randint(1, max(1, spec.p))
    f = gen_map(spec, rng, n=n, p=p, force_yes=True)
    g = gen_map(spec, rng, n=p, p=q, force_yes=True)
    witness = ri_meet([svmap.range_of(f).carrier, svmap.domain(g).carrier])
    if witness is None:
        return "skip"
    ctx = {"inner": f, "outer": g}
    xbar = ncset.find_member(svmap.value(svmap.inverse(f), witness))
    zbar = ncset.find_member(svmap.value(g, witness))
    w = _rand_vec(rng, q)
    report = gendiff.coderivative_chain_rule(g, f, xbar, zbar, w)
    _require(report.equal, "coderivative chain rule failed", ctx)
    return "pass"


def _check_affine_subdiff(spec, rng):
    n, p = _dims(spec, rng)
    g = gen_fn(spec, rng, dim=p, force_yes=True)
    a = _rand_matrix(rng, p, n)
    b = _rand_vec(rng, p)
    ctx = {"function": g}
    try:
        composed, report = ncfunc.precompose_affine(g, a, b)
    except EmptySetError:
        return "skip"
    if not report.holds:
        return "skip"
    xbar = ncset.find_member(composed.dom)
    rule = gendiff.subdiff_chain_affine(g, a, b, xbar)
    _require(rule.equal, "affine subdifferential chain rule failed", ctx)
    return "pass"


def _check_inv_image_ncone(spec, rng):
    n, p = _dims(spec, rng)
    f = gen_map(spec, rng, n=n, p=p, force_yes=True)
    theta = gen_set(spec, rng, dim=p, force_yes=True)
    witness = ri_meet([svmap.range_of(f).carrier, theta.carrier])
    if witness is None:
        return "skip"
    ctx = {"mapping": f, "target": theta}
    xbar = ncset.find_member(svmap.value(svmap.inverse(f), witness))
    report = gendiff.normal_cone_inverse_image(f, theta, xbar, witness)
    _require(report.equal, "inverse image normal cone rule failed", ctx)
    return "pass"


def _check_coderiv_intersect(spec, rng):
    n, p = _dims(spec, rng)
    f1 = gen_map(spec, rng, n=n, p=p, force_yes=True)
    f2 = gen_map(spec, rng, n=n, p=p, force_yes=True)
    witness = ri_meet([f1.graph.carrier, f2.graph.carrier])
    if witness is None:
        return "skip"
    ctx = {"first": f1, "second": f2}
    xbar, ybar = witness[:n], witness[n:]
    ystar = _rand_vec(rng, p)
    report = gendiff.coderivative_intersection_rule([f1, f2], xbar, ybar, ystar)
    _require(report.equal, "coderivative intersection rule failed", ctx)
    return "pass"


def _check_subdiff_max(spec, rng):
    n, _ = _dims(spec, rng)
    f1 = gen_fn(spec, rng, dim=n, force_yes=True, full_dim=True)
    f2 = gen_fn(spec, rng, dim=n, force_yes=True, full_dim=True)
    xbar = zeros(n)
    for f in (f1, f2):
        if not f.dom.carrier.ri_contains(xbar):
            return "skip"
    ctx = {"first": f1, "second": f2}
    report = gendiff.subdiff_max_rule([f1, f2], xbar)
    _require(report.equal, "maximum subdifferential rule failed", ctx)
    return "pass"


def _counterexample_boxes():
    left = PuncturedPolyhedron(
        Polyhedron.box([(-1, 0), (-1, 1)]), [Polyhedron.singleton([0, 0])]
    )
    right = PuncturedPolyhedron(
        Polyhedron.box([(0, 1), (-1, 1)]), [Polyhedron.singleton([0, 0])]
    )
    return left, right


def _check_sum_fn_negative(spec, rng):
    left, right = _counterexample_boxes()
    f1 = ncfunc.indicator(left)
    f2 = ncfunc.indicator(right)
    total, report = ncfunc.add(f1, f2)
    ctx = {"first": f1, "second": f2, "sum": total}
    _require(not report.holds, "counterexample qualification unexpectedly holds", ctx)
    verdict = ncset.check_nearly_convex(total.dom)
    _require(verdict.kind == "no", "counterexample sum domain is nearly convex", ctx)
    _require(verdict.witness == vec([0, 0]), "unexpected witness", ctx)
    epi_verdict = ncset.check_nearly_convex(ncfunc.epigraph_set(total))
    _require(epi_verdict.kind == "no", "counterexample sum epigraph is nearly convex", ctx)
    return "pass"


def _boundary_punctured_map() -> SVMap:
    graph = PuncturedPolyhedron(
        Polyhedron.box([(0, 1), (0, 2)]), [Polyhedron.singleton([1, 1])]
    )
    return SVMap(1, 1, graph)


def _check_value_nearly_convex_negative(spec, rng):
    f = _boundary_punctured_map()
    ctx = {"mapping": f}
    _require(
        ncset.check_nearly_convex(f.graph).kind == "yes",
        "example graph is not nearly convex",
        ctx,
    )
    val = svmap.value(f, (ONE,))
    verdict = ncset.check_nearly_convex(val)
    _require(verdict.kind == "no", "boundary value is nearly convex", ctx)
    _require(verdict.witness == vec([1]), "unexpected witness", ctx)
    return "pass"


CHECKERS: Dict[str, Callable] = {
    "RI_LINEAR_IMAGE": _check_ri_linear_image,
    "RI_INTERSECTION": _check_ri_intersection,
    "SEGMENT": _check_segment,
    "RI_CHARACTERIZATION": _check_ri_characterization,
    "SEPARATION_IFF": _check_separation_iff,
    "GRAPH_RI": _check_graph_ri,
    "EPI_RI": _check_epi_ri,
    "VALUE_NEARLY_CONVEX": _check_value_nearly_convex,
    "DIM1_CONVEX": _check_dim1_convex,
    "CO_SANDWICH": _check_co_sandwich,
    "F_NEAR_CO": _check_f_near_co,
    "LIFT": _check_lift,
    "SUM_MAP": _check_sum_map,
    "SUM_FN": _check_sum_fn,
    "CHAIN_MAP": _check_chain_map,
    "AFFINE_PRE": _check_affine_pre,
    "IMAGES": _check_images,
    "INTERSECT_MAP": _check_intersect_map,
    "MAX_FN": _check_max_fn,
    "NCONE_INTERSECT": _check_ncone_intersect,
    "CODERIV_SUM": _check_coderiv_sum,
    "SUBDIFF_VIA_CODERIV": _check_subdiff_via_coderiv,
    "EPI_NORMAL_PROPS": _check_epi_normal_props,
    "SUBDIFF_SUM": _check_subdiff_sum,
    "CODERIV_CHAIN": _check_coderiv_chain,
    "AFFINE_SUBDIFF": _check_affine_subdiff,
    "INV_IMAGE_NCONE": _check_inv_image_ncone,
    "CODERIV_INTERSECT": _check_coderiv_intersect,
    "SUBDIFF_MAX": _check_subdiff_max,
    "SUM_FN_NEGATIVE": _check_sum_fn_negative,
    "VALUE_NEARLY_CONVEX_NEGATIVE": _check_value_nearly_convex_negative,
}

THEOREM_IDS = tuple(CHECKERS)
POSITIVE_IDS = tuple(i for i in THEOREM_IDS if not i.endswith("_NEGATIVE"))


def theorem_check(theorem_id: str, spec: InstanceSpec, trials: int) -> TheoremReport:
    """Run one battery id; failures carry replayable serialized instances."""
    if theorem_id not in CHECKERS:
        raise UnknownTheoremIdError(f"unknown theorem id {theorem_id!r}")
    checker = CHECKERS[theorem_id]
    report = TheoremReport(theorem_id=theorem_id, trials=trials)
    for trial in range(trials):
        rng = _rng(spec, f"{theorem_id}:{trial}")
        try:
            outcome = checker(spec, rng)
        except CheckFailure as exc:
            payload = _serialize_all(exc.instances)
            report.failures.append(f"trial {trial}: {exc}\n{payload}")
            continue
        except Exception as exc:  # noqa: BLE001 - any crash is a failure
            report.failures.append(f"trial {trial}: {type(exc).__name__}: {exc}")
            continue
        if outcome == "skip":
            report.skips += 1
        else:
            report.passes += 1
    return report


def run_battery(ids: Sequence[str], spec: InstanceSpec, trials: int) -> List[TheoremReport]:
    return [theorem_check(i, spec, trials) for i in ids]


@dataclass
class GridReport:
    members: int
    total: int
    mismatches: List[Vec]


def oracle_membership_grid(omega: PuncturedPolyhedron, resolution: int) -> GridReport:
    """Compare constraint-side and generator-side membership on a grid.

    The grid spans the bounding box of the carrier's canonical points
    (padded by one when rays are present); each point's membership is
    computed twice, from the constraint description and from the generator
    description, and disagreements are reported.
    """
    if omega.fidelity != EXACT:
        raise FidelityError("membership grid on a near-equality object")
    from .polyhedron import _in_hull

    g = omega.carrier.canonical_genrep()
    n = omega.ambient_dim
    if not g.points:
        return GridReport(members=0, total=0, mismatches=[])
    pad = ONE if (g.rays or g.lines) else ZERO
    lows = [min(p[i] for p in g.points) - pad for i in range(n)]
    highs = [max(p[i] for p in g.points) + pad for i in range(n)]
    axes = []
    for lo, hi in zip(lows, highs):
        if lo == hi:
            axes.append([lo])
        else:
            step = (hi - lo) / resolution
            axes.append([lo + k * step for k in range(resolution + 1)])
    points = [()]
    for axis in axes:
        points = [p + (val,) for p in points for val in axis]
    members = 0
    mismatches = []
    for point in points:
        via_h = ncset.membership(omega, point)
        in_carrier_gen = _in_hull(point, g.points, g.rays, g.lines)
        via_v = in_carrier_gen and not any(
            piece.contains(point) for piece in omega.removed
        )
        if via_h != via_v:
            mismatches.append(point)
        if via_h:
            members += 1
    return GridReport(members=members, total=len(points), mismatches=mismatches)
