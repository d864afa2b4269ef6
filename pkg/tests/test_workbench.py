import json

import pytest

from ncvx import cli, ncset, serialize, workbench
from ncvx.errors import (
    DefinitionSyntaxError,
    DuplicateNameError,
    UnresolvedReferenceError,
)
from ncvx.ncset import NEAR_EQUAL, PuncturedPolyhedron
from ncvx.polyhedron import Polyhedron
from ncvx.rational import rat, vec

PUNCTURED_INTERVAL = """
set S
carrier H 1
ineq 1 | 2
ineq -1 | 0
remove V 1
point 1
"""

EXAMPLE_FILE = """
# the boundary-punctured product mapping and friends
set box
carrier H 2
ineq 1 0 | 1
ineq -1 0 | 0
ineq 0 1 | 2
ineq 0 -1 | 0
remove V 2
point 1 1

mapping F 1 1
graph box

function ind 2
piece 0 0 | 0
dom box

function absfn 1
piece 1 | 0
piece -1 | 0
dom
carrier H 1
"""


def test_parse_punctured_interval():
    ws = workbench.parse(PUNCTURED_INTERVAL)
    omega = ws.set("S")
    assert omega.carrier.set_equal(Polyhedron.box([(0, 2)]))
    assert len(omega.removed) == 1
    assert not ncset.membership(omega, [1])
    verdict = ncset.check_nearly_convex(omega)
    assert verdict.kind == "no" and verdict.witness == vec([1])


def test_parse_full_example():
    ws = workbench.parse(EXAMPLE_FILE)
    assert ws.mapping("F").nearly_convex()
    assert ws.function("ind").n == 2
    assert ws.function("absfn").base([rat(-3)]) == 3


def test_parse_empty_file():
    ws = workbench.parse("")
    assert not ws.sets and not ws.mappings and not ws.functions


def test_duplicate_name():
    text = PUNCTURED_INTERVAL + PUNCTURED_INTERVAL
    with pytest.raises(DuplicateNameError):
        workbench.parse(text)


def test_unresolved_reference():
    with pytest.raises(UnresolvedReferenceError):
        workbench.parse("mapping F 1 1\ngraph missing\n")


def test_syntax_error_carries_line():
    bad = "set S\ncarrier H 1\nineq 1 2 | 3\n"
    with pytest.raises(DefinitionSyntaxError) as err:
        workbench.parse(bad)
    assert err.value.line == 3


def test_render_parse_round_trip():
    ws = workbench.parse(EXAMPLE_FILE)
    omega = ws.set("box")
    text = serialize.render(omega, "box")
    again = workbench.parse(text).set("box")
    assert ncset.near_equal(omega, again)
    assert omega.carrier.set_equal(again.carrier)
    assert serialize.render(again, "box") == text

    fn_text = serialize.render(ws.function("absfn"), "absfn")
    fn_again = workbench.parse(fn_text).function("absfn")
    assert fn_again.pieces == ws.function("absfn").pieces

    map_text = serialize.render(ws.mapping("F"), "F")
    map_again = workbench.parse(map_text).mapping("F")
    assert map_again.graph.carrier.set_equal(ws.mapping("F").graph.carrier)


def test_near_fidelity_round_trip():
    omega = PuncturedPolyhedron(Polyhedron.box([(0, 1)]), fidelity=NEAR_EQUAL)
    text = serialize.render(omega, "S")
    assert "fidelity near" in text
    again = workbench.parse(text).set("S")
    assert again.fidelity == NEAR_EQUAL


def _run(tmp_path, *argv):
    import io
    from contextlib import redirect_stderr, redirect_stdout

    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = cli.main(list(argv))
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def defs_file(tmp_path):
    path = tmp_path / "defs.txt"
    path.write_text(EXAMPLE_FILE + PUNCTURED_INTERVAL)
    return str(path)


def test_cli_check(defs_file, tmp_path):
    code, out, _ = _run(tmp_path, defs_file, "check", "S")
    assert code == 0
    assert out.strip() == "no, witness 1"
    code, out, _ = _run(tmp_path, defs_file, "check", "box")
    assert out.strip() == "yes"


def test_cli_subdiff(defs_file, tmp_path):
    code, out, _ = _run(tmp_path, defs_file, "subdiff", "absfn", "0")
    assert code == 0
    assert "point -1" in out and "point 1" in out


def test_cli_eval_and_member(defs_file, tmp_path):
    code, out, _ = _run(tmp_path, defs_file, "eval", "absfn", "-7/2")
    assert out.strip() == "7/2"
    code, out, _ = _run(tmp_path, defs_file, "eval", "ind", "1", "1")
    assert out.strip() == "inf"
    code, out, _ = _run(tmp_path, defs_file, "member", "S", "1")
    assert out.strip() == "false"


def test_cli_value_json(defs_file, tmp_path):
    code, out, _ = _run(tmp_path, defs_file, "value", "F", "1", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["format_version"] == 1
    assert payload["verdict"] == "no"
    assert payload["witness"] == ["1"]


def test_cli_separate(defs_file, tmp_path):
    path = tmp_path / "sep.txt"
    path.write_text(
        """
set L
carrier H 2
ineq 1 0 | 0
ineq -1 0 | 1
ineq 0 1 | 1
ineq 0 -1 | 1
remove V 2
point 0 0

set R
carrier H 2
ineq 1 0 | 1
ineq -1 0 | 0
ineq 0 1 | 1
ineq 0 -1 | 1
remove V 2
point 0 0
"""
    )
    code, out, _ = _run(tmp_path, str(path), "separate", "L", "R")
    assert code == 0
    assert "separable" in out
    assert "v 1 0" in out
    assert "sup1 0" in out and "inf2 0" in out


def test_cli_rule(defs_file, tmp_path):
    code, out, _ = _run(
        tmp_path, defs_file, "rule", "subdiff_sum", "absfn", "absfn", "|", "0"
    )
    assert code == 0
    assert "equal true" in out


def test_cli_verify_single(tmp_path):
    code, out, _ = _run(
        tmp_path, "verify", "SUM_FN_NEGATIVE", "--trials", "2", "--seed", "1"
    )
    assert code == 0
    assert "failures=0" in out
    assert "total failures: 0" in out


def test_cli_errors(defs_file, tmp_path):
    code, _, err = _run(tmp_path, defs_file, "check", "missing")
    assert code == 1
    assert "unknown set" in err
    code, _, err = _run(tmp_path, "nonsense")
    assert code == 1


def test_cli_deterministic_json(defs_file, tmp_path):
    _, out1, _ = _run(tmp_path, defs_file, "domain", "F", "--json")
    _, out2, _ = _run(tmp_path, defs_file, "domain", "F", "--json")
    assert out1 == out2
