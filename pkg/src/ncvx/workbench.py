"""Definition-file parser and named workspace.

The grammar is line oriented.  A file is a sequence of blocks:

    set NAME
    carrier H <n>          (or: carrier V <n>)
    ineq a1 ... an | b     (H bodies: ineq / eq lines)
    eq   e1 ... en | d
    remove V <n>           (any number of remove blocks)
    point p1 ... pn        (V bodies: point / ray / line lines)
    fidelity exact|near    (optional)

    mapping NAME <n> <p>
    carrier ...            (set body describing the graph, or: graph SETNAME)

    function NAME <n>
    piece c1 ... cn | beta (one or more)
    dom                    (set body follows, or: dom SETNAME)

Blank lines and ``#`` comments are ignored.  Diagnostics carry the line
number and what was expected.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .errors import (
    DefinitionSyntaxError,
    DuplicateNameError,
    UnresolvedReferenceError,
)
from .ncfunc import NCFunction
from .ncset import EXACT, NEAR_EQUAL, PuncturedPolyhedron
from .polyhedron import Polyhedron
from .rational import rat
from .svmap import SVMap


@dataclass
class Workspace:
    """Named sets, mappings, and functions parsed from definition files."""

    sets: Dict[str, PuncturedPolyhedron] = field(default_factory=dict)
    mappings: Dict[str, SVMap] = field(default_factory=dict)
    functions: Dict[str, NCFunction] = field(default_factory=dict)

    def set(self, name: str) -> PuncturedPolyhedron:
        if name not in self.sets:
            raise UnresolvedReferenceError(f"unknown set {name!r}")
        return self.sets[name]

    def mapping(self, name: str) -> SVMap:
        if name not in self.mappings:
            raise UnresolvedReferenceError(f"unknown mapping {name!r}")
        return self.mappings[name]

    def function(self, name: str) -> NCFunction:
        if name not in self.functions:
            raise UnresolvedReferenceError(f"unknown function {name!r}")
        return self.functions[name]


class _Lines:
    def __init__(self, text: str):
        self.items: List[Tuple[int, List[str]]] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            body = raw.split("#", 1)[0].strip()
            if body:
                self.items.append((lineno, body.split()))
        self.pos = 0

    def peek(self) -> Optional[Tuple[int, List[str]]]:
        return self.items[self.pos] if self.pos < len(self.items) else None

    def take(self) -> Tuple[int, List[str]]:
        item = self.items[self.pos]
        self.pos += 1
        return item


def _parse_rat(tok: str, lineno: int):
    try:
        return rat(tok)
    except (ValueError, ZeroDivisionError):
        raise DefinitionSyntaxError(f"expected a rational, got {tok!r}", lineno)


def _parse_int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise DefinitionSyntaxError(f"expected an integer, got {tok!r}", lineno)


def _parse_row(tokens: List[str], n: int, lineno: int):
    if "|" not in tokens:
        raise DefinitionSyntaxError("expected 'coeffs | rhs'", lineno)
    split = tokens.index("|")
    coeffs = [_parse_rat(t, lineno) for t in tokens[:split]]
    rhs_toks = tokens[split + 1:]
    if len(coeffs) != n or len(rhs_toks) != 1:
        raise DefinitionSyntaxError(
            f"expected {n} coefficients and one right-hand side", lineno
        )
    return tuple(coeffs), _parse_rat(rhs_toks[0], lineno)


def _parse_poly_body(lines: _Lines, header: List[str], lineno: int) -> Polyhedron:
    if len(header) != 2 or header[0] not in ("H", "V"):
        raise DefinitionSyntaxError("expected 'H <n>' or 'V <n>'", lineno)
    n = _parse_int(header[1], lineno)
    if header[0] == "H":
        ineq, ineq_rhs, eq, eq_rhs = [], [], [], []
        while True:
            item = lines.peek()
            if item is None or item[1][0] not in ("ineq", "eq"):
                break
            row_lineno, tokens = lines.take()
            row, rhs = _parse_row(tokens[1:], n, row_lineno)
            if tokens[0] == "ineq":
                ineq.append(row)
                ineq_rhs.append(rhs)
            else:
                eq.append(row)
                eq_rhs.append(rhs)
        return Polyhedron.from_hrep(ineq, ineq_rhs, eq, eq_rhs, n=n)
    points, rays, lines_g = [], [], []
    while True:
        item = lines.peek()
        if item is None or item[1][0] not in ("point", "ray", "line"):
            break
        row_lineno, tokens = lines.take()
        coords = [_parse_rat(t, row_lineno) for t in tokens[1:]]
        if len(coords) != n:
            raise DefinitionSyntaxError(f"expected {n} coordinates", row_lineno)
        {"point": points, "ray": rays, "line": lines_g}[tokens[0]].append(tuple(coords))
    if not points:
        raise DefinitionSyntaxError("a V block needs at least one point", lineno)
    return Polyhedron.from_genrep(points, rays, lines_g, n=n)


def _parse_set_body(lines: _Lines, lineno: int, workspace: Workspace) -> PuncturedPolyhedron:
    item = lines.peek()
    if item is None or item[1][0] != "carrier":
        raise DefinitionSyntaxError("expected a 'carrier' line", lineno)
    carrier_lineno, tokens = lines.take()
    carrier = _parse_poly_body(lines, tokens[1:], carrier_lineno)
    removed = []
    fidelity = EXACT
    while True:
        item = lines.peek()
        if item is None:
            break
        row_lineno, tokens = item
        if tokens[0] == "remove":
            lines.take()
            removed.append(_parse_poly_body(lines, tokens[1:], row_lineno))
        elif tokens[0] == "fidelity":
            lines.take()
            if len(tokens) != 2 or tokens[1] not in ("exact", "near"):
                raise DefinitionSyntaxError("expected 'fidelity exact|near'", row_lineno)
            fidelity = EXACT if tokens[1] == "exact" else NEAR_EQUAL
        else:
            break
    return PuncturedPolyhedron(carrier, removed, fidelity)


def parse(text: str, workspace: Optional[Workspace] = None) -> Workspace:
    """Parse definitions into a workspace; names are unique per kind."""
    ws = workspace if workspace is not None else Workspace()
    lines = _Lines(text)
    while True:
        item = lines.peek()
        if item is None:
            return ws
        lineno, tokens = lines.take()
        kind = tokens[0]
        if kind == "set":
            if len(tokens) != 2:
                raise DefinitionSyntaxError("expected 'set NAME'", lineno)
            name = tokens[1]
            if name in ws.sets:
                raise DuplicateNameError(f"set {name!r} defined twice")
            ws.sets[name] = _parse_set_body(lines, lineno, ws)
        elif kind == "mapping":
            if len(tokens) != 4:
                raise DefinitionSyntaxError("expected 'mapping NAME n p'", lineno)
            name = tokens[1]
            if name in ws.mappings:
                raise DuplicateNameError(f"mapping {name!r} defined twice")
            n = _parse_int(tokens[2], lineno)
            p = _parse_int(tokens[3], lineno)
            nxt = lines.peek()
            if nxt is not None and nxt[1][0] == "graph":
                g_lineno, g_tokens = lines.take()
                if len(g_tokens) != 2:
                    raise DefinitionSyntaxError("expected 'graph SETNAME'", g_lineno)
                graph = ws.set(g_tokens[1])
            else:
                graph = _parse_set_body(lines, lineno, ws)
            ws.mappings[name] = SVMap(n, p, graph)
        elif kind == "function":
            if len(tokens) != 3:
                raise DefinitionSyntaxError("expected 'function NAME n'", lineno)
            name = tokens[1]
            if name in ws.functions:
                raise DuplicateNameError(f"function {name!r} defined twice")
            n = _parse_int(tokens[2], lineno)
            pieces = []
            while True:
                nxt = lines.peek()
                if nxt is None or nxt[1][0] != "piece":
                    break
                p_lineno, p_tokens = lines.take()
                pieces.append(_parse_row(p_tokens[1:], n, p_lineno))
            nxt = lines.peek()
            if nxt is None or nxt[1][0] != "dom":
                raise DefinitionSyntaxError("expected a 'dom' line", lineno)
            d_lineno, d_tokens = lines.take()
            if len(d_tokens) == 2:
                dom = ws.set(d_tokens[1])
            else:
                dom = _parse_set_body(lines, d_lineno, ws)
            ws.functions[name] = NCFunction(n, pieces, dom)
        else:
            raise DefinitionSyntaxError(
                f"expected 'set', 'mapping', or 'function', got {kind!r}", lineno
            )


def parse_files(paths) -> Workspace:
    ws = Workspace()
    for path in paths:
        with open(path, "r", encoding="utf-8") as handle:
            parse(handle.read(), ws)
    return ws
