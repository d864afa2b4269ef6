"""Command-line workbench: parse definition files, run operations, print results.

Usage:

    ncvx [FILE ...] COMMAND [ARGS ...] [--json] [--seed S] [--trials N]
         [--dims n,p]

Leading arguments naming existing files are parsed as definition files.
Vectors on the command line are space-separated rationals; ``|`` separates
vector groups.  Exit codes: 0 success, 1 user error, 2 violated internal
invariant.
"""

from __future__ import annotations

import json
import math
import os
import sys
from typing import List, Optional, Sequence

from . import gendiff, harness, ncfunc, ncset, serialize, svmap, workbench
from .errors import InternalCheckError, NcvxError
from .harness import InstanceSpec
from .ncset import PuncturedPolyhedron
from .polyhedron import Polyhedron
from .rational import rat, rat_str, vec_str
from .serialize import FORMAT_VERSION


class _Options:
    def __init__(self):
        self.as_json = False
        self.seed = 42
        self.trials = 300
        self.dims = (3, 2)


def _split_argv(argv: Sequence[str]):
    opts = _Options()
    positional: List[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok == "--json":
            opts.as_json = True
        elif tok == "--seed":
            i += 1
            opts.seed = int(argv[i])
        elif tok == "--trials":
            i += 1
            opts.trials = int(argv[i])
        elif tok == "--dims":
            i += 1
            parts = argv[i].split(",")
            opts.dims = (int(parts[0]), int(parts[1]))
        else:
            positional.append(tok)
        i += 1
    files = []
    while positional and os.path.isfile(positional[0]):
        files.append(positional.pop(0))
    if not positional:
        raise NcvxError("no command given")
    return files, positional[0], positional, opts


def _vector(tokens: Sequence[str]):
    return tuple(rat(t) for t in tokens)


def _groups(tokens: Sequence[str]):
    out: List[List[str]] = [[]]
    for tok in tokens:
        if tok == "|":
            out.append([])
        else:
            out[-1].append(tok)
    return out


def _poly_text(p: Polyhedron, both: bool = False) -> str:
    lines = serialize.poly_lines(p)
    if both:
        lines += serialize.poly_lines(p, style="V")
    return "\n".join(lines)


def _set_text(omega: PuncturedPolyhedron, name: str = "result") -> str:
    return "\n".join(serialize.pp_lines(omega, name))


def _verdict_payload(verdict):
    if verdict.kind == "yes":
        return {"verdict": "yes"}
    if verdict.kind == "no":
        return {"verdict": "no", "witness": [rat_str(x) for x in verdict.witness]}
    return {"verdict": "unsupported", "reason": verdict.reason}


def _verdict_text(verdict) -> str:
    if verdict.kind == "yes":
        return "yes"
    if verdict.kind == "no":
        return f"no, witness {vec_str(verdict.witness)}"
    return f"unsupported: {verdict.reason}"


def _qual_text(report) -> str:
    status = "holds" if report.holds else "fails"
    witness = f", witness {vec_str(report.witness)}" if report.witness else ""
    return f"qualification {status} ({report.detail}){witness}"


def _qual_payload(report):
    return {
        "holds": report.holds,
        "witness": [rat_str(x) for x in report.witness] if report.witness else None,
        "detail": report.detail,
    }


def _rule_output(lhs: Polyhedron, rhs: Polyhedron, equal: bool, extra=None):
    text = [
        "lhs:",
        _poly_text(lhs, both=True),
        "rhs:",
        _poly_text(rhs, both=True),
        f"equal {'true' if equal else 'false'}",
    ]
    payload = {
        "lhs": serialize.poly_json(lhs),
        "rhs": serialize.poly_json(rhs),
        "equal": equal,
    }
    if extra:
        payload.update(extra)
    return "\n".join(text), payload, 0


def dispatch(ws: workbench.Workspace, command: str, args: List[str], opts: _Options):
    """Run one command; returns ``(text, json_payload, exit_code)``."""
    if command == "check":
        verdict = ncset.check_nearly_convex(ws.set(args[0]))
        return _verdict_text(verdict), _verdict_payload(verdict), 0
    if command == "ri":
        omega = ws.set(args[0])
        if len(args) > 1:
            inside = ncset.ri_member(omega, _vector(args[1:]))
            return str(inside).lower(), {"ri_member": inside}, 0
        desc = ncset.ri_description(omega)
        lines = []
        for e, d in zip(desc.eq_mat, desc.eq_rhs):
            lines.append(f"eq {vec_str(e)} | {rat_str(d)}")
        for a, b in zip(desc.strict_mat, desc.strict_rhs):
            lines.append(f"strict {vec_str(a)} | {rat_str(b)}")
        payload = {
            "eq": [[rat_str(x) for x in e] for e in desc.eq_mat],
            "eq_rhs": [rat_str(x) for x in desc.eq_rhs],
            "strict": [[rat_str(x) for x in a] for a in desc.strict_mat],
            "strict_rhs": [rat_str(x) for x in desc.strict_rhs],
        }
        return "\n".join(lines) if lines else "(whole space)", payload, 0
    if command == "closure":
        p = ncset.closure(ws.set(args[0]))
        return _poly_text(p), serialize.poly_json(p), 0
    if command == "hull":
        p = ncset.hull_near_equal(ws.set(args[0]))
        return _poly_text(p), serialize.poly_json(p), 0
    if command == "member":
        inside = ncset.membership(ws.set(args[0]), _vector(args[1:]))
        return str(inside).lower(), {"member": inside}, 0
    if command == "separate":
        res = ncset.properly_separate(ws.set(args[0]), ws.set(args[1]))
        if res.separable:
            x_hat, y_hat = res.strict_pair
            text = "\n".join(
                [
                    "separable",
                    f"v {vec_str(res.v)}",
                    f"sup1 {rat_str(res.sup1)}",
                    f"inf2 {rat_str(res.inf2)}",
                    f"strict_pair {vec_str(x_hat)} | {vec_str(y_hat)}",
                ]
            )
            payload = {
                "separable": True,
                "v": [rat_str(x) for x in res.v],
                "sup1": rat_str(res.sup1),
                "inf2": rat_str(res.inf2),
                "strict_pair": [
                    [rat_str(x) for x in x_hat],
                    [rat_str(x) for x in y_hat],
                ],
            }
        else:
            text = f"not separable, common ri point {vec_str(res.common_ri_point)}"
            payload = {
                "separable": False,
                "common_ri_point": [rat_str(x) for x in res.common_ri_point],
            }
        return text, payload, 0
    if command == "value":
        val = svmap.value(ws.mapping(args[0]), _vector(args[1:]))
        verdict = ncset.check_nearly_convex(val)
        text = _set_text(val) + f"\nverdict {_verdict_text(verdict)}"
        payload = {"set": serialize.pp_json(val), **_verdict_payload(verdict)}
        return text, payload, 0
    if command in ("domain", "range"):
        f = ws.mapping(args[0])
        result = svmap.domain(f) if command == "domain" else svmap.range_of(f)
        text = _set_text(result) + f"\nfidelity {result.fidelity}"
        return text, serialize.pp_json(result), 0
    if command == "sum":
        total, report = svmap.sum_maps(ws.mapping(args[0]), ws.mapping(args[1]))
        text = "\n".join(serialize.map_lines(total, "sum")) + "\n" + _qual_text(report)
        payload = {"mapping": serialize.map_json(total), "qualification": _qual_payload(report)}
        return text, payload, 0
    if command == "compose":
        comp, report = svmap.compose(ws.mapping(args[0]), ws.mapping(args[1]))
        text = "\n".join(serialize.map_lines(comp, "composition")) + "\n" + _qual_text(report)
        payload = {"mapping": serialize.map_json(comp), "qualification": _qual_payload(report)}
        return text, payload, 0
    if command == "intersect":
        inter, report = ncset.intersect(ws.set(args[0]), ws.set(args[1]))
        verdict = ncset.check_nearly_convex(inter)
        text = "\n".join(
            [_set_text(inter, "intersection"), _qual_text(report), f"verdict {_verdict_text(verdict)}"]
        )
        payload = {
            "set": serialize.pp_json(inter),
            "qualification": _qual_payload(report),
            **_verdict_payload(verdict),
        }
        return text, payload, 0
    if command in ("image", "preimage"):
        f = ws.mapping(args[0])
        omega = ws.set(args[1])
        result, report = (
            svmap.image(f, omega) if command == "image" else svmap.preimage(f, omega)
        )
        text = _set_text(result) + "\n" + _qual_text(report)
        payload = {"set": serialize.pp_json(result), "qualification": _qual_payload(report)}
        return text, payload, 0
    if command == "eval":
        value = ncfunc.evaluate(ws.function(args[0]), _vector(args[1:]))
        text = "inf" if value == math.inf else rat_str(value)
        return text, {"value": text}, 0
    if command == "epi":
        epi = ncfunc.epigraph_set(ws.function(args[0]))
        return _set_text(epi, "epigraph"), serialize.pp_json(epi), 0
    if command == "cof":
        hull = ncfunc.co_f(ws.function(args[0]))
        text = "\n".join(serialize.fn_lines(hull, "co"))
        return text, serialize.fn_json(hull), 0
    if command == "add":
        total, report = ncfunc.add(ws.function(args[0]), ws.function(args[1]))
        text = "\n".join(serialize.fn_lines(total, "sum")) + "\n" + _qual_text(report)
        payload = {"function": serialize.fn_json(total), "qualification": _qual_payload(report)}
        return text, payload, 0
    if command == "maxfn":
        top, report = ncfunc.max_fn([ws.function(name) for name in args])
        text = "\n".join(serialize.fn_lines(top, "max")) + "\n" + _qual_text(report)
        payload = {"function": serialize.fn_json(top), "qualification": _qual_payload(report)}
        return text, payload, 0
    if command == "ncone":
        cone = gendiff.normal_cone(ws.set(args[0]), _vector(args[1:]))
        return _poly_text(cone.poly, both=True), serialize.poly_json(cone.poly), 0
    if command == "coderiv":
        groups = _groups(args[1:])
        value = gendiff.coderivative(
            ws.mapping(args[0]), _vector(groups[0]), _vector(groups[1]), _vector(groups[2])
        )
        return _poly_text(value, both=True), serialize.poly_json(value), 0
    if command == "subdiff":
        sub = gendiff.subdifferential(ws.function(args[0]), _vector(args[1:]))
        return _poly_text(sub, both=True), serialize.poly_json(sub), 0
    if command == "rule":
        return _run_rule(ws, args)
    if command == "verify":
        return _run_verify(args, opts)
    raise NcvxError(f"unknown command {command!r}")


def _run_rule(ws: workbench.Workspace, args: List[str]):
    name = args[0]
    rest = args[1:]
    if name == "ncone_intersect":
        report = gendiff.normal_cone_intersection(
            ws.set(rest[0]), ws.set(rest[1]), _vector(rest[2:])
        )
        return _rule_output(report.lhs.poly, report.rhs.poly, report.equal)
    if name == "coderiv_sum":
        groups = _groups(rest[2:])
        report = gendiff.coderivative_sum_rule(
            ws.mapping(rest[0]),
            ws.mapping(rest[1]),
            _vector(groups[0]),
            _vector(groups[1]),
            _vector(groups[2]),
        )
        extra = {
            "s_points": [
                [[rat_str(x) for x in y1], [rat_str(x) for x in y2]]
                for y1, y2 in report.s_points
            ],
            "decomposition_independent": report.decomposition_independent,
        }
        return _rule_output(report.lhs, report.rhs, report.equal, extra)
    if name == "coderiv_chain":
        groups = _groups(rest[2:])
        report = gendiff.coderivative_chain_rule(
            ws.mapping(rest[0]),
            ws.mapping(rest[1]),
            _vector(groups[0]),
            _vector(groups[1]),
            _vector(groups[2]),
        )
        extra = {"m_point": [rat_str(x) for x in report.m_point]}
        return _rule_output(report.lhs, report.rhs, report.equal, extra)
    if name == "coderiv_intersect":
        groups = _groups(rest)
        maps = [ws.mapping(tok) for tok in groups[0]]
        report = gendiff.coderivative_intersection_rule(
            maps, _vector(groups[1]), _vector(groups[2]), _vector(groups[3])
        )
        return _rule_output(report.lhs, report.rhs, report.equal)
    if name == "subdiff_sum":
        groups = _groups(rest)
        fns = [ws.function(tok) for tok in groups[0]]
        report = gendiff.subdiff_sum_rule(fns, _vector(groups[1]))
        return _rule_output(report.lhs, report.rhs, report.equal)
    if name == "subdiff_affine":
        fn_name, n_text = rest[0], rest[1]
        groups = _groups(rest[2:])
        g = ws.function(fn_name)
        n = int(n_text)
        flat = [rat(t) for t in groups[0]]
        if len(flat) != g.n * n:
            raise NcvxError(f"expected {g.n * n} matrix entries")
        a = [tuple(flat[i * n:(i + 1) * n]) for i in range(g.n)]
        b = _vector(groups[1])
        xbar = _vector(groups[2])
        report = gendiff.subdiff_chain_affine(g, a, b, xbar)
        return _rule_output(report.lhs, report.rhs, report.equal)
    if name == "inv_image_ncone":
        groups = _groups(rest[2:])
        report = gendiff.normal_cone_inverse_image(
            ws.mapping(rest[0]), ws.set(rest[1]), _vector(groups[0]), _vector(groups[1])
        )
        return _rule_output(report.lhs.poly, report.rhs.poly, report.equal)
    if name == "subdiff_max":
        groups = _groups(rest)
        fns = [ws.function(tok) for tok in groups[0]]
        report = gendiff.subdiff_max_rule(fns, _vector(groups[1]))
        extra = {"active_set": list(report.active_set)}
        return _rule_output(report.lhs, report.rhs, report.equal, extra)
    raise NcvxError(f"unknown rule {name!r}")


def _run_verify(args: List[str], opts: _Options):
    target = args[0] if args else "all"
    ids = harness.THEOREM_IDS if target == "all" else (target,)
    spec = InstanceSpec(seed=opts.seed, n=opts.dims[0], p=opts.dims[1])
    reports = harness.run_battery(ids, spec, opts.trials)
    lines = [r.summary() for r in reports]
    failures = sum(len(r.failures) for r in reports)
    for r in reports:
        for failure in r.failures:
            lines.append(f"FAILURE {r.theorem_id}: {failure}")
    lines.append(f"total failures: {failures}")
    payload = {
        "reports": [
            {
                "theorem_id": r.theorem_id,
                "trials": r.trials,
                "passes": r.passes,
                "skips": r.skips,
                "failures": r.failures,
            }
            for r in reports
        ],
        "total_failures": failures,
    }
    return "\n".join(lines), payload, 0 if failures == 0 else 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        files, command, positional, opts = _split_argv(argv)
        ws = workbench.parse_files(files)
        text, payload, code = dispatch(ws, command, positional[1:], opts)
    except InternalCheckError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return 2
    except NcvxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (IndexError, ValueError) as exc:
        print(f"error: malformed arguments ({exc})", file=sys.stderr)
        return 1
    if opts.as_json:
        print(json.dumps({"format_version": FORMAT_VERSION, "command": command, **payload}))
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
