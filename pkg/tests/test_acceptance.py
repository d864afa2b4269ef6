"""Acceptance suite: one test per criterion, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v -s`` (the battery criterion
covers 300 trials per theorem id and takes a few minutes).
"""

import json
import random
import time
from contextlib import contextmanager

from ncvx import cli, gendiff, harness, lp, ncfunc, ncset, serialize, svmap
from ncvx.gendiff import normal_cone, subdifferential, subgradient_oracle
from ncvx.harness import InstanceSpec, gen_fn, gen_set
from ncvx.ncfunc import abs_value, affine, indicator
from ncvx.ncset import PuncturedPolyhedron
from ncvx.polyhedron import Polyhedron, dd_convert
from ncvx.rational import dot, rat, vec
from ncvx.svmap import SVMap


@contextmanager
def _criterion(number, label):
    try:
        yield
    except BaseException:
        print(f"FAIL criterion {number}: {label}")
        raise
    print(f"PASS criterion {number}: {label}")


def test_criterion_1_paper_example_regressions():
    with _criterion(1, "fixed example regression suite (exact, zero tolerance)"):
        start = time.time()

        # (i) the mapping with value [0,2] on [0,1) and a punctured value at 1
        graph = PuncturedPolyhedron(
            Polyhedron.box([(0, 1), (0, 2)]), [Polyhedron.singleton([1, 1])]
        )
        mapping = SVMap(1, 1, graph)
        assert ncset.check_nearly_convex(mapping.graph).kind == "yes"
        at_one = svmap.value(mapping, [1])
        verdict = ncset.check_nearly_convex(at_one)
        assert verdict.kind == "no"
        assert verdict.witness == vec([1])

        # (ii) constant mapping onto the punctured unit square
        target = PuncturedPolyhedron(
            Polyhedron.box([(0, 1), (0, 1)]),
            [Polyhedron.singleton([rat(1, 2), 1])],
        )
        const = SVMap(
            1, 2, ncset.product(PuncturedPolyhedron(Polyhedron.whole_space(1)), target)
        )
        assert ncset.check_nearly_convex(const.graph).kind == "yes"
        for x in ([-2], [0], [rat(1, 3)], [5]):
            val = svmap.value(const, x)
            assert ncset.check_nearly_convex(val).kind == "yes"
            assert not ncset.is_convex(val)

        # (iii) the indicator pair with touching boxes punctured at the origin
        left = indicator(
            PuncturedPolyhedron(
                Polyhedron.box([(-1, 0), (-1, 1)]), [Polyhedron.singleton([0, 0])]
            )
        )
        right = indicator(
            PuncturedPolyhedron(
                Polyhedron.box([(0, 1), (-1, 1)]), [Polyhedron.singleton([0, 0])]
            )
        )
        total, report = ncfunc.add(left, right)
        assert not report.holds
        verdict = ncset.check_nearly_convex(total.dom)
        assert verdict.kind == "no"
        assert verdict.witness == vec([0, 0])
        assert ncset.check_nearly_convex(ncfunc.epigraph_set(total)).kind == "no"

        elapsed = time.time() - start
        assert elapsed < 1.0, f"regression suite took {elapsed:.2f}s"


def test_criterion_2_theorem_battery():
    with _criterion(2, "verify all --trials 300 --seed 42: zero failures, skips < 50%"):
        import io
        from contextlib import redirect_stdout

        out = io.StringIO()
        with redirect_stdout(out):
            code = cli.main(
                ["verify", "all", "--trials", "300", "--seed", "42", "--dims", "3,2", "--json"]
            )
        assert code == 0
        payload = json.loads(out.getvalue())
        assert payload["total_failures"] == 0
        assert len(payload["reports"]) == len(harness.THEOREM_IDS)
        for report in payload["reports"]:
            ratio = report["skips"] / report["trials"]
            assert ratio < 0.5, f"{report['theorem_id']} skipped {ratio:.0%}"
            assert not report["failures"], report["theorem_id"]


def test_criterion_3_oracle_equivalence():
    with _criterion(3, "normal-cone and subgradient oracles (exact finite checks)"):
        spec = InstanceSpec(seed=2024, n=3)
        rng = random.Random(2024)
        for trial in range(200):
            omega = gen_set(spec, harness._rng(spec, f"acc3:{trial}"), force_yes=True)
            xbar = ncset.find_member(omega)
            cone = normal_cone(omega, xbar)
            g = omega.carrier.genrep
            rays, lines = cone.rays_and_lines()
            directions = list(rays) + list(lines) + [tuple(-x for x in l) for l in lines]
            for v in directions:
                assert all(dot(v, p) <= dot(v, xbar) for p in g.points)
                assert all(dot(v, r) <= 0 for r in g.rays)
                assert all(dot(v, l) == 0 for l in g.lines)
            # oracle equivalence on random probes: membership in the cone is
            # exactly the generator-inequality test
            n = omega.ambient_dim
            for _ in range(3):
                w = tuple(rat(rng.randint(-4, 4)) for _ in range(n))
                functional_ok = (
                    all(dot(w, p) <= dot(w, xbar) for p in g.points)
                    and all(dot(w, r) <= 0 for r in g.rays)
                    and all(dot(w, l) == 0 for l in g.lines)
                )
                assert cone.contains(w) == functional_ok

        exterior_failures = 0
        trial = 0
        while trial < 100 or exterior_failures < 100:
            f = gen_fn(spec, harness._rng(spec, f"acc3f:{trial}"), force_yes=True)
            trial += 1
            xbar = ncset.find_member(f.dom)
            sub = subdifferential(f, xbar)
            for point in sub.genrep.points:
                assert subgradient_oracle(f, xbar, point)
            for _ in range(4):
                w = tuple(rat(rng.randint(-6, 6)) for _ in range(f.n))
                if not sub.contains(w):
                    assert not subgradient_oracle(f, xbar, w)
                    exterior_failures += 1
        assert trial >= 100 and exterior_failures >= 100


def test_criterion_4_calculus_rule_equality():
    with _criterion(4, "calculus rules equal=true on 100 qualified instances each"):
        # fixed instances first, exact values
        two_abs = gendiff.subdiff_sum_rule([abs_value(), abs_value()], [0])
        assert two_abs.equal
        assert two_abs.lhs.set_equal(Polyhedron.box([(-2, 2)]))
        peak = gendiff.subdiff_max_rule([affine([1], 0), affine([-1], 0)], [0])
        assert peak.equal
        assert peak.lhs.set_equal(Polyhedron.box([(-1, 1)]))

        spec = InstanceSpec(seed=7, n=2, p=1)
        rule_ids = (
            "CODERIV_SUM",
            "CODERIV_CHAIN",
            "CODERIV_INTERSECT",
            "SUBDIFF_SUM",
            "AFFINE_SUBDIFF",
            "SUBDIFF_MAX",
        )
        for theorem_id in rule_ids:
            trials = 110
            report = harness.theorem_check(theorem_id, spec, trials)
            while report.ok() and report.passes < 100:
                trials += 60
                report = harness.theorem_check(theorem_id, spec, trials)
            assert report.ok(), report.failures[:1]
            assert report.passes >= 100, report.summary()


def test_criterion_5_kernel_soundness():
    with _criterion(5, "dd round-trip, LP certificates, projection/product laws, determinism"):
        rng = random.Random(90125)

        def random_poly(n):
            rows, rhs = [], []
            for i in range(n):
                e = [0] * n
                e[i] = 1
                rows.append(list(e))
                rhs.append(rng.randint(1, 4))
                rows.append([-x for x in e])
                rhs.append(rng.randint(1, 4))
            for _ in range(rng.randint(0, 2)):
                a = [rng.randint(-4, 4) for _ in range(n)]
                if any(a):
                    rows.append(a)
                    rhs.append(rng.randint(-1, 4))
            eqs, eq_rhs = [], []
            if rng.random() < 0.25:
                a = [rng.randint(-2, 2) for _ in range(n)]
                if any(a):
                    eqs.append(a)
                    eq_rhs.append(0)
            return Polyhedron.from_hrep(rows, rhs, eqs, eq_rhs, n=n)

        for trial in range(1000):
            n = rng.randint(1, 4)
            p = random_poly(n)
            q = Polyhedron(genrep=dd_convert(p).genrep)
            assert p.set_equal(dd_convert(q))

            objective = tuple(rat(rng.randint(-4, 4)) for _ in range(n))
            h = p.hrep
            problem = lp.LPProblem(
                objective,
                rng.choice((lp.MIN, lp.MAX)),
                h.ineq_mat,
                h.ineq_rhs,
                h.eq_mat,
                h.eq_rhs,
            )
            result = lp.lp_solve(problem)
            lp.verify_result(problem, result)

            if trial % 5 == 0 and not p.is_empty():
                other = random_poly(rng.randint(1, 2))
                prod = p.product(other)
                if other.is_empty():
                    assert prod.is_empty()
                else:
                    assert prod.project(list(range(n))).set_equal(p)
                    assert prod.project(list(range(n, n + other.n))).set_equal(other)

        # determinism: equal seeds give byte-identical serialized JSON
        spec = InstanceSpec(seed=11, n=3, p=2)
        for salt in range(50):
            a = gen_set(spec, harness._rng(spec, f"det:{salt}"))
            b = gen_set(spec, harness._rng(spec, f"det:{salt}"))
            assert json.dumps(serialize.pp_json(a)) == json.dumps(serialize.pp_json(b))

        import io
        from contextlib import redirect_stdout

        outputs = []
        for _ in range(2):
            out = io.StringIO()
            with redirect_stdout(out):
                code = cli.main(
                    ["verify", "SEGMENT", "--trials", "20", "--seed", "9", "--json"]
                )
            assert code == 0
            outputs.append(out.getvalue())
        assert outputs[0] == outputs[1]
