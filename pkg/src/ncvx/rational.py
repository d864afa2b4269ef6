"""Exact rational scalars, vectors, and dense matrices.

Scalars are arbitrary-precision rationals kept in lowest terms with a
positive denominator; all arithmetic is exact.  ``gmpy2.mpq`` is used when
available (identical semantics, much faster), with ``fractions.Fraction``
as the portable fallback.

Vectors are tuples of rationals and matrices are tuples of row tuples;
both are immutable and safe to share.  Text form is ``p/q`` (``p`` when
the denominator is 1), vectors are space-separated.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from operator import mul as _mul
from typing import Iterable, Optional, Sequence

from .errors import DimensionMismatch

try:  # pragma: no cover - exercised implicitly by whichever backend is present
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover
    from fractions import Fraction as Rat

Vec = tuple
Mat = tuple

ZERO = Rat(0)
ONE = Rat(1)


def rat(value, den=None) -> Rat:
    """Build a rational from an int, a ``p/q`` string, or another rational."""
    if den is not None:
        return Rat(value, den)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, _, d = text.partition("/")
            return Rat(int(num), int(d))
        return Rat(int(text))
    return Rat(value)


def rat_str(x) -> str:
    """Render ``p/q``, or ``p`` when the denominator is 1."""
    return str(x)


def vec(values: Iterable) -> Vec:
    return tuple(rat(v) for v in values)


def mat(rows: Iterable[Iterable]) -> Mat:
    out = tuple(vec(r) for r in rows)
    if out and any(len(r) != len(out[0]) for r in out):
        raise DimensionMismatch("ragged matrix rows")
    return out


def vec_str(v: Vec) -> str:
    return " ".join(rat_str(x) for x in v)


def parse_vec(text: str) -> Vec:
    return tuple(rat(tok) for tok in text.split())


def zeros(n: int) -> Vec:
    return (ZERO,) * n


def unit(n: int, i: int) -> Vec:
    return tuple(ONE if j == i else ZERO for j in range(n))


def dot(u: Vec, v: Vec):
    if len(u) != len(v):
        raise DimensionMismatch(f"dot of lengths {len(u)} and {len(v)}")
    return sum(map(_mul, u, v), ZERO)


def vadd(u: Vec, v: Vec) -> Vec:
    if len(u) != len(v):
        raise DimensionMismatch("vector sum of different lengths")
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Vec, v: Vec) -> Vec:
    if len(u) != len(v):
        raise DimensionMismatch("vector difference of different lengths")
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v: Vec) -> Vec:
    c = rat(c)
    return tuple(c * x for x in v)


def vneg(v: Vec) -> Vec:
    return tuple(-x for x in v)


def is_zero_vec(v: Vec) -> bool:
    return all(x == 0 for x in v)


def mat_vec(m: Mat, v: Vec) -> Vec:
    return tuple(dot(row, v) for row in m)


def primitive(v: Vec) -> Vec:
    """Scale by a positive rational so entries are coprime integers.

    Preserves direction; the zero vector is returned unchanged.
    """
    if is_zero_vec(v):
        return tuple(ZERO for _ in v)
    denom_lcm = 1
    for x in v:
        d = int(x.denominator)
        denom_lcm = denom_lcm // gcd(denom_lcm, d) * d
    ints = [int(x.numerator) * (denom_lcm // int(x.denominator)) for x in v]
    g = 0
    for k in ints:
        g = gcd(g, abs(k))
    return tuple(Rat(k // g) for k in ints)


def primitive_signed(v: Vec) -> Vec:
    """Like :func:`primitive` but with the first nonzero entry positive.

    Canonical representative for lines and equality normals, where both
    orientations describe the same object.
    """
    w = primitive(v)
    for x in w:
        if x != 0:
            return w if x > 0 else vneg(w)
    return w


@dataclass(frozen=True)
class LinearSolveResult:
    """Exact Gaussian-elimination result for ``E x = d``.

    ``solution`` is a particular solution (free variables set to zero) or
    ``None`` when the system is inconsistent; ``nullspace`` is a basis of
    the kernel of ``E``; ``rank`` is the rank of ``E``.
    """

    solution: Optional[Vec]
    nullspace: tuple
    rank: int


def rref(rows: Sequence[Vec], rhs: Optional[Sequence] = None):
    """Reduced row echelon form of ``rows`` (with optional right-hand side).

    Returns ``(pivot_cols, reduced_rows, reduced_rhs, consistent)`` where the
    reduced rows exclude zero rows; ``consistent`` is False when some zero
    row has a nonzero right-hand side.
    """
    work = [list(r) for r in rows]
    b = [rat(x) for x in rhs] if rhs is not None else [ZERO] * len(work)
    ncols = len(work[0]) if work else 0
    pivots = []
    row_at = 0
    for col in range(ncols):
        pivot_row = None
        for r in range(row_at, len(work)):
            if work[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        work[row_at], work[pivot_row] = work[pivot_row], work[row_at]
        b[row_at], b[pivot_row] = b[pivot_row], b[row_at]
        inv = ONE / work[row_at][col]
        work[row_at] = [x * inv for x in work[row_at]]
        b[row_at] = b[row_at] * inv
        for r in range(len(work)):
            if r != row_at and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [x - factor * y for x, y in zip(work[r], work[row_at])]
                b[r] = b[r] - factor * b[row_at]
        pivots.append(col)
        row_at += 1
        if row_at == len(work):
            break
    consistent = all(b[r] == 0 for r in range(row_at, len(work)))
    reduced = tuple(tuple(work[r]) for r in range(row_at))
    reduced_rhs = tuple(b[r] for r in range(row_at))
    return pivots, reduced, reduced_rhs, consistent


def solve_linear(e: Mat, d: Vec, ncols: Optional[int] = None) -> LinearSolveResult:
    """Solve ``E x = d`` exactly.

    The particular solution sets all free variables to zero; the nullspace
    basis is the canonical one read off the reduced row echelon form.
    ``ncols`` is only needed when ``E`` has no rows.
    """
    if len(e) != len(d):
        raise DimensionMismatch("row count of E differs from length of d")
    if not e:
        if ncols is None:
            raise DimensionMismatch("empty system needs an explicit column count")
        return LinearSolveResult(
            solution=zeros(ncols),
            nullspace=tuple(unit(ncols, i) for i in range(ncols)),
            rank=0,
        )
    ncols = len(e[0])
    pivots, reduced, reduced_rhs, consistent = rref(e, d)
    rank = len(pivots)
    nullspace = []
    pivot_set = set(pivots)
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [ZERO] * ncols
        v[free] = ONE
        for r, p in enumerate(pivots):
            v[p] = -reduced[r][free]
        nullspace.append(tuple(v))
    if not consistent:
        return LinearSolveResult(solution=None, nullspace=tuple(nullspace), rank=rank)
    x = [ZERO] * ncols
    for r, p in enumerate(pivots):
        x[p] = reduced_rhs[r]
    return LinearSolveResult(solution=tuple(x), nullspace=tuple(nullspace), rank=rank)


def mat_rank(rows: Sequence[Vec]) -> int:
    if not rows:
        return 0
    pivots, _, _, _ = rref(rows)
    return len(pivots)
