"""Canonical text and JSON forms for sets, mappings, and functions.

Rationals render as ``p/q`` (``p`` when the denominator is 1); vectors are
space-separated.  Polyhedra serialize from their canonical constraint form,
so rendering is deterministic and parse-render round-trips are stable.
"""

from __future__ import annotations

from typing import List

from .ncfunc import NCFunction
from .ncset import EXACT, PuncturedPolyhedron
from .polyhedron import Polyhedron
from .rational import rat_str, vec_str
from .svmap import SVMap

FORMAT_VERSION = 1


def poly_lines(p: Polyhedron, style: str = "H") -> List[str]:
    """Render one polyhedron block, ``H`` (default) or ``V`` style."""
    if style == "H":
        h = p.canonical_hrep()
        out = [f"H {p.n}"]
        for a, b in zip(h.ineq_mat, h.ineq_rhs):
            out.append(f"ineq {vec_str(a)} | {rat_str(b)}")
        for e, d in zip(h.eq_mat, h.eq_rhs):
            out.append(f"eq {vec_str(e)} | {rat_str(d)}")
        return out
    g = p.canonical_genrep()
    out = [f"V {p.n}"]
    for pt in g.points:
        out.append(f"point {vec_str(pt)}")
    for r in g.rays:
        out.append(f"ray {vec_str(r)}")
    for l in g.lines:
        out.append(f"line {vec_str(l)}")
    return out


def poly_json(p: Polyhedron) -> dict:
    h = p.canonical_hrep()
    g = p.canonical_genrep()
    return {
        "dim": p.n,
        "ineq": [[rat_str(x) for x in row] for row in h.ineq_mat],
        "ineq_rhs": [rat_str(x) for x in h.ineq_rhs],
        "eq": [[rat_str(x) for x in row] for row in h.eq_mat],
        "eq_rhs": [rat_str(x) for x in h.eq_rhs],
        "points": [[rat_str(x) for x in pt] for pt in g.points],
        "rays": [[rat_str(x) for x in r] for r in g.rays],
        "lines": [[rat_str(x) for x in l] for l in g.lines],
    }


def pp_lines(omega: PuncturedPolyhedron, name: str = "S") -> List[str]:
    out = [f"set {name}"]
    carrier = poly_lines(omega.carrier)
    out.append(f"carrier {carrier[0]}")
    out.extend(carrier[1:])
    blocks = sorted(poly_lines(piece) for piece in omega.removed)
    for block in blocks:
        out.append(f"remove {block[0]}")
        out.extend(block[1:])
    if omega.fidelity != EXACT:
        out.append("fidelity near")
    return out


def pp_json(omega: PuncturedPolyhedron) -> dict:
    return {
        "carrier": poly_json(omega.carrier),
        "removed": [poly_json(piece) for piece in omega.removed],
        "fidelity": omega.fidelity,
    }


def map_lines(f: SVMap, name: str = "F") -> List[str]:
    out = [f"mapping {name} {f.n} {f.p}"]
    body = pp_lines(f.graph, name="graph")
    out.extend(body[1:])
    return out


def map_json(f: SVMap) -> dict:
    return {"n": f.n, "p": f.p, "graph": pp_json(f.graph)}


def fn_lines(f: NCFunction, name: str = "f") -> List[str]:
    out = [f"function {name} {f.n}"]
    for c, beta in f.pieces:
        out.append(f"piece {vec_str(c)} | {rat_str(beta)}")
    out.append("dom")
    body = pp_lines(f.dom, name="dom")
    out.extend(body[1:])
    return out


def fn_json(f: NCFunction) -> dict:
    return {
        "n": f.n,
        "pieces": [
            {"coeffs": [rat_str(x) for x in c], "offset": rat_str(beta)}
            for c, beta in f.pieces
        ],
        "dom": pp_json(f.dom),
    }


def render(obj, name: str = "item") -> str:
    if isinstance(obj, PuncturedPolyhedron):
        return "\n".join(pp_lines(obj, name))
    if isinstance(obj, SVMap):
        return "\n".join(map_lines(obj, name))
    if isinstance(obj, NCFunction):
        return "\n".join(fn_lines(obj, name))
    if isinstance(obj, Polyhedron):
        return "\n".join(poly_lines(obj))
    raise TypeError(f"cannot render {type(obj).__name__}")
