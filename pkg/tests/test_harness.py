import pytest

from ncvx import harness, ncset, serialize
from ncvx.errors import UnknownTheoremIdError
from ncvx.harness import InstanceSpec, gen_fn, gen_map, gen_set, theorem_check
from ncvx.ncset import PuncturedPolyhedron
from ncvx.polyhedron import Polyhedron


def test_generation_determinism():
    spec = InstanceSpec(seed=1, n=2)
    first = gen_set(spec, harness._rng(spec, "x"), dim=2)
    second = gen_set(spec, harness._rng(spec, "x"), dim=2)
    assert serialize.render(first) == serialize.render(second)
    m1 = gen_map(spec, harness._rng(spec, "m"))
    m2 = gen_map(spec, harness._rng(spec, "m"))
    assert serialize.render(m1) == serialize.render(m2)
    f1 = gen_fn(spec, harness._rng(spec, "f"))
    f2 = gen_fn(spec, harness._rng(spec, "f"))
    assert serialize.render(f1) == serialize.render(f2)


def test_force_yes_instances_are_nearly_convex():
    spec = InstanceSpec(seed=7, n=2)
    for salt in range(25):
        omega = gen_set(spec, harness._rng(spec, f"yes{salt}"), force_yes=True)
        assert ncset.check_nearly_convex(omega).kind == "yes"


def test_unforced_instances_sometimes_fail():
    spec = InstanceSpec(seed=3, n=2, force_yes=False)
    kinds = set()
    for salt in range(40):
        omega = gen_set(spec, harness._rng(spec, f"any{salt}"), force_yes=False)
        kinds.add(ncset.check_nearly_convex(omega).kind)
    assert "no" in kinds and "yes" in kinds


def test_unknown_theorem_id():
    with pytest.raises(UnknownTheoremIdError):
        theorem_check("NOT_A_THEOREM", InstanceSpec(seed=0), 1)


def test_negative_ids():
    spec = InstanceSpec(seed=0)
    for theorem_id in ("SUM_FN_NEGATIVE", "VALUE_NEARLY_CONVEX_NEGATIVE"):
        report = theorem_check(theorem_id, spec, 1)
        assert report.ok()
        assert report.passes == 1


@pytest.mark.parametrize("theorem_id", harness.POSITIVE_IDS)
def test_battery_smoke(theorem_id):
    spec = InstanceSpec(seed=42, n=2, p=1)
    report = theorem_check(theorem_id, spec, 12)
    assert report.ok(), "\n".join(report.failures[:1])
    assert report.passes > 0


def test_membership_grid():
    interval = PuncturedPolyhedron(Polyhedron.box([(0, 1)]))
    report = harness.oracle_membership_grid(interval, 4)
    assert report.members == 5
    assert not report.mismatches

    punctured = PuncturedPolyhedron(
        Polyhedron.box([(0, 2)]), [Polyhedron.singleton([1])]
    )
    report = harness.oracle_membership_grid(punctured, 2)
    assert report.members == 2  # 0 and 2 survive, the midpoint is removed
    assert not report.mismatches

    empty = PuncturedPolyhedron(Polyhedron.empty(1))
    report = harness.oracle_membership_grid(empty, 3)
    assert report.members == 0


def test_failure_reports_carry_replayable_instances(monkeypatch):
    def broken(spec, rng):
        omega = gen_set(spec, rng, dim=1, force_yes=True)
        raise harness.CheckFailure("synthetic defect", {"omega": omega})

    monkeypatch.setitem(harness.CHECKERS, "SEGMENT", broken)
    report = theorem_check("SEGMENT", InstanceSpec(seed=4), 2)
    assert len(report.failures) == 2
    assert "synthetic defect" in report.failures[0]
    assert "carrier H 1" in report.failures[0]
    # the payload parses back into a workspace
    from ncvx import workbench

    payload = report.failures[0].split("\n", 1)[1]
    ws = workbench.parse(payload)
    assert "omega" in ws.sets
