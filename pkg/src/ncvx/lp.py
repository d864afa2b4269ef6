"""Exact rational linear programming with verified certificates.

Solves ``min/max <c, x>`` subject to ``A x <= b`` and ``E x = d`` over free
variables by a two-phase primal simplex on an explicit tableau.  Bland's
rule is used throughout: with exact arithmetic there is no epsilon
anti-cycling, and Bland guarantees termination.  Equalities are kept as
native tableau rows; only the externally visible certificates fold them
into paired inequalities.

Every result carries a certificate and is re-verified exactly before it is
returned:

* ``Optimal``: feasible ``x*``; folded dual multipliers ``y >= 0`` with
  ``fold(A)^T y = c`` and ``<fold(b), y> = value`` (both negated for
  ``min``), so weak duality holds with equality.
* ``Infeasible``: folded Farkas multipliers ``y >= 0`` with
  ``fold(A)^T y = 0`` and ``<fold(b), y> < 0``.
* ``Unbounded``: a ray ``r`` with ``A r <= 0``, ``E r = 0``, and the
  objective strictly improving along ``r``.

The fold appends the rows of ``E`` and ``-E`` after the rows of ``A``, so
certificate vectors have length ``len(b) + 2 * len(d)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .errors import DimensionMismatch, InternalCheckError
from .rational import Mat, ONE, Rat, Vec, ZERO, dot, mat, vec

MIN = "min"
MAX = "max"


@dataclass(frozen=True)
class LPProblem:
    objective: Vec
    sense: str
    ineq_mat: Mat
    ineq_rhs: Vec
    eq_mat: Mat = ()
    eq_rhs: Vec = ()

    def __post_init__(self):
        n = len(self.objective)
        if self.sense not in (MIN, MAX):
            raise DimensionMismatch(f"unknown sense {self.sense!r}")
        if len(self.ineq_mat) != len(self.ineq_rhs):
            raise DimensionMismatch("inequality rows and rhs differ in count")
        if len(self.eq_mat) != len(self.eq_rhs):
            raise DimensionMismatch("equality rows and rhs differ in count")
        for row in self.ineq_mat:
            if len(row) != n:
                raise DimensionMismatch("inequality row width differs from objective")
        for row in self.eq_mat:
            if len(row) != n:
                raise DimensionMismatch("equality row width differs from objective")


@dataclass(frozen=True)
class Optimal:
    x: Vec
    value: Rat
    dual: Vec

    status = "optimal"


@dataclass(frozen=True)
class Infeasible:
    farkas: Vec

    status = "infeasible"


@dataclass(frozen=True)
class Unbounded:
    ray: Vec

    status = "unbounded"


LPResult = Union[Optimal, Infeasible, Unbounded]


def problem(objective, sense, ineq=None, eq=None) -> LPProblem:
    """Convenience constructor from loose lists."""
    a, b = ineq if ineq else ((), ())
    e, d = eq if eq else ((), ())
    return LPProblem(vec(objective), sense, mat(a), vec(b), mat(e), vec(d))


def folded_rows(p: LPProblem):
    """Inequality-only view ``fold(A) x <= fold(b)`` used by certificates."""
    rows = list(p.ineq_mat)
    rhs = list(p.ineq_rhs)
    for row, r in zip(p.eq_mat, p.eq_rhs):
        rows.append(row)
        rhs.append(r)
    for row, r in zip(p.eq_mat, p.eq_rhs):
        rows.append(tuple(-x for x in row))
        rhs.append(-r)
    return rows, rhs


class _Tableau:
    """Dense simplex tableau over exact rationals.

    Columns: ``x+`` (n), ``x-`` (n), slacks (one per inequality row),
    artificials (one per row); the right-hand side is stored separately.
    """

    def __init__(self, p: LPProblem):
        self.n = len(p.objective)
        self.m1 = len(p.ineq_mat)
        self.m2 = len(p.eq_mat)
        m = self.m1 + self.m2
        n = self.n
        self.slack0 = 2 * n
        self.art0 = 2 * n + self.m1
        self.ncols = self.art0 + m
        self.sigma = []
        self.rows = []
        self.rhs = []
        all_rows = list(zip(p.ineq_mat, p.ineq_rhs)) + list(zip(p.eq_mat, p.eq_rhs))
        for i, (a, b) in enumerate(all_rows):
            s = ONE if b >= 0 else -ONE
            self.sigma.append(s)
            row = [ZERO] * self.ncols
            for j, coef in enumerate(a):
                row[j] = s * coef
                row[n + j] = -s * coef
            if i < self.m1:
                row[self.slack0 + i] = s
            row[self.art0 + i] = ONE
            self.rows.append(row)
            self.rhs.append(s * b)
        self.basis = [self.art0 + i for i in range(m)]

    # -- pivoting ---------------------------------------------------------

    def pivot(self, r: int, c: int):
        piv = self.rows[r][c]
        inv = ONE / piv
        self.rows[r] = [x * inv for x in self.rows[r]]
        self.rhs[r] = self.rhs[r] * inv
        prow = self.rows[r]
        prhs = self.rhs[r]
        for i in range(len(self.rows)):
            if i == r:
                continue
            f = self.rows[i][c]
            if f != 0:
                self.rows[i] = [x - f * y if y else x for x, y in zip(self.rows[i], prow)]
                self.rhs[i] = self.rhs[i] - f * prhs
        self.basis[r] = c

    def reduced_costs(self, costs):
        red = list(costs)
        for r, bcol in enumerate(self.basis):
            cb = costs[bcol]
            if cb != 0:
                row = self.rows[r]
                for j in range(self.ncols):
                    if row[j] != 0:
                        red[j] -= cb * row[j]
        return red

    def objective_value(self, costs):
        total = ZERO
        for r, bcol in enumerate(self.basis):
            total += costs[bcol] * self.rhs[r]
        return total

    def simplex(self, costs, banned):
        """Maximize ``costs`` with Bland's rule.

        The reduced-cost row is updated incrementally with each pivot.
        Returns ``('optimal', None)`` or ``('unbounded', entering_column)``.
        """
        red = self.reduced_costs(costs)
        while True:
            enter = -1
            for j in range(self.ncols):
                if j in banned:
                    continue
                if red[j] > 0:
                    enter = j
                    break
            if enter < 0:
                return "optimal", None
            leave = -1
            best = None
            for i in range(len(self.rows)):
                coef = self.rows[i][enter]
                if coef > 0:
                    ratio = self.rhs[i] / coef
                    if best is None or ratio < best or (
                        ratio == best and self.basis[i] < self.basis[leave]
                    ):
                        best = ratio
                        leave = i
            if leave < 0:
                return "unbounded", enter
            self.pivot(leave, enter)
            factor = red[enter]
            prow = self.rows[leave]
            red = [x - factor * y if y else x for x, y in zip(red, prow)]

    def duals(self, costs):
        """Row multipliers ``y = c_B B^{-1}`` for the original row order."""
        red = self.reduced_costs(costs)
        m = self.m1 + self.m2
        return [costs[self.art0 + i] - red[self.art0 + i] for i in range(m)]

    def clear_artificial_basics(self):
        """Pivot artificials out of the zero-level basis where possible.

        Rows whose non-artificial coefficients are all zero encode redundant
        constraints; they stay in place with their artificial basic at level
        zero.  No entering column ever has a nonzero coefficient there, so
        they are inert in phase 2, and keeping every row preserves the
        artificial-column dual identity across the whole original system.
        """
        for r in range(len(self.rows)):
            if self.basis[r] < self.art0:
                continue
            for j in range(self.art0):
                if self.rows[r][j] != 0:
                    self.pivot(r, j)
                    break


def _fold_multipliers(p: LPProblem, y_rows) -> Vec:
    """Fold native row multipliers (ineq then eq) into the inequality-only view."""
    lam = y_rows[: len(p.ineq_mat)]
    mu = y_rows[len(p.ineq_mat):]
    folded = list(lam)
    folded.extend(m if m > 0 else ZERO for m in mu)
    folded.extend(-m if m < 0 else ZERO for m in mu)
    return tuple(folded)


def lp_solve(p: LPProblem) -> LPResult:
    """Solve ``p`` exactly; the returned certificate is re-verified before return.

    Deterministic: identical input yields an identical result object.
    """
    n = len(p.objective)
    internal_obj = p.objective if p.sense == MAX else tuple(-c for c in p.objective)

    t = _Tableau(p)
    m = t.m1 + t.m2

    phase1 = [ZERO] * t.ncols
    for i in range(m):
        phase1[t.art0 + i] = -ONE
    status, _ = t.simplex(phase1, banned=frozenset())
    if status != "optimal":  # pragma: no cover - phase 1 objective is bounded
        raise InternalCheckError("phase 1 cannot be unbounded")
    if t.objective_value(phase1) != 0:
        y = t.duals(phase1)
        y_rows = [t.sigma[i] * y[i] for i in range(m)]
        farkas = _fold_multipliers(p, y_rows)
        result = Infeasible(farkas=farkas)
        verify_result(p, result)
        return result

    t.clear_artificial_basics()

    phase2 = [ZERO] * t.ncols
    for j in range(n):
        phase2[j] = internal_obj[j]
        phase2[n + j] = -internal_obj[j]
    banned = frozenset(range(t.art0, t.ncols))
    status, enter = t.simplex(phase2, banned=banned)

    if status == "unbounded":
        direction = [ZERO] * t.ncols
        direction[enter] = ONE
        for r, bcol in enumerate(t.basis):
            direction[bcol] = -t.rows[r][enter]
        ray = tuple(direction[j] - direction[n + j] for j in range(n))
        result = Unbounded(ray=ray)
        verify_result(p, result)
        return result

    x = [ZERO] * n
    for r, bcol in enumerate(t.basis):
        if bcol < n:
            x[bcol] += t.rhs[r]
        elif bcol < 2 * n:
            x[bcol - n] -= t.rhs[r]
    xstar = tuple(x)
    value = dot(p.objective, xstar)
    y = t.duals(phase2)
    full = [t.sigma[i] * y[i] for i in range(m)]
    dual = _fold_multipliers(p, full)
    result = Optimal(x=xstar, value=value, dual=dual)
    verify_result(p, result)
    return result


def verify_result(p: LPProblem, result: LPResult) -> None:
    """Exact certificate check; raises :class:`InternalCheckError` on failure."""
    rows, rhs = folded_rows(p)
    if isinstance(result, Optimal):
        for a, b in zip(rows, rhs):
            if dot(a, result.x) > b:
                raise InternalCheckError("optimal point violates a constraint")
        if dot(p.objective, result.x) != result.value:
            raise InternalCheckError("objective value mismatch")
        y = result.dual
        if len(y) != len(rows):
            raise InternalCheckError("dual length mismatch")
        if any(c < 0 for c in y):
            raise InternalCheckError("dual has a negative multiplier")
        target = p.objective if p.sense == MAX else tuple(-c for c in p.objective)
        for j in range(len(p.objective)):
            combo = ZERO
            for a, yi in zip(rows, y):
                combo += a[j] * yi
            if combo != target[j]:
                raise InternalCheckError("dual does not reproduce the objective")
        bound = ZERO
        for b, yi in zip(rhs, y):
            bound += b * yi
        want = result.value if p.sense == MAX else -result.value
        if bound != want:
            raise InternalCheckError("weak duality is not tight")
    elif isinstance(result, Infeasible):
        y = result.farkas
        if len(y) != len(rows):
            raise InternalCheckError("farkas length mismatch")
        if any(c < 0 for c in y):
            raise InternalCheckError("farkas has a negative multiplier")
        for j in range(len(p.objective)):
            combo = ZERO
            for a, yi in zip(rows, y):
                combo += a[j] * yi
            if combo != 0:
                raise InternalCheckError("farkas combination is nonzero")
        total = ZERO
        for b, yi in zip(rhs, y):
            total += b * yi
        if not total < 0:
            raise InternalCheckError("farkas right-hand side is not negative")
    elif isinstance(result, Unbounded):
        r = result.ray
        for a in p.ineq_mat:
            if dot(a, r) > 0:
                raise InternalCheckError("ray leaves an inequality")
        for e in p.eq_mat:
            if dot(e, r) != 0:
                raise InternalCheckError("ray leaves an equality")
        gain = dot(p.objective, r)
        improving = gain > 0 if p.sense == MAX else gain < 0
        if not improving:
            raise InternalCheckError("ray does not improve the objective")
    else:  # pragma: no cover
        raise InternalCheckError(f"unknown result {result!r}")


def maximize(objective, ineq=None, eq=None) -> LPResult:
    return lp_solve(problem(objective, MAX, ineq, eq))


def minimize(objective, ineq=None, eq=None) -> LPResult:
    return lp_solve(problem(objective, MIN, ineq, eq))


def feasible_point(a: Mat, b: Vec, e: Mat = (), d: Vec = (), n: Optional[int] = None) -> Optional[Vec]:
    """A feasible point of ``A x <= b``, ``E x = d``, or ``None``."""
    if n is None:
        if a:
            n = len(a[0])
        elif e:
            n = len(e[0])
        else:
            raise DimensionMismatch("cannot infer dimension of an empty system")
    res = lp_solve(LPProblem(vec([0] * n), MAX, mat(a), vec(b), mat(e), vec(d)))
    if isinstance(res, Optimal):
        return res.x
    return None
