"""Exact rational linear programming with certificates.

The solver is a two-phase primal simplex run on a fraction-free integer
tableau (every entry is an integer numerator over a shared positive
denominator, updated by Bareiss-style exact division). Pivoting follows
Bland's smallest-index rule, so runs are deterministic and cannot cycle.

Every outcome carries a certificate that :func:`check_certificate` audits by
direct evaluation with :class:`~fractions.Fraction`:

* ``Feasible`` -- a point, and for optimization problems a dual vector whose
  objective value equals the primal one.
* ``Infeasible`` -- a Farkas vector.
* ``Unbounded`` -- a feasible point and an improving recession ray.

Certificates are indexed by :meth:`LpProblem.rows`: the explicit constraints
first, then one row per finite variable bound (lower before upper, in
variable order). Each row is read in "<=" orientation, so a ``>=`` row
``a.x >= b`` contributes ``-a.x <= -b``; multipliers on inequality rows are
nonnegative and multipliers on equality rows are free.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import DimensionError, to_rational


class Relation(enum.Enum):
    EQ = "=="
    GE = ">="
    LE = "<="


class Sense(enum.Enum):
    MIN = "min"
    MAX = "max"


@dataclass(frozen=True)
class LinearConstraint:
    coeffs: tuple[Fraction, ...]
    relation: Relation
    rhs: Fraction

    def __init__(self, coeffs: Sequence, relation: Relation | str, rhs):
        object.__setattr__(self, "coeffs", tuple(to_rational(a) for a in coeffs))
        object.__setattr__(self, "relation", Relation(relation))
        object.__setattr__(self, "rhs", to_rational(rhs))

    def le_form(self) -> tuple[tuple[Fraction, ...], Fraction]:
        """Coefficients and right-hand side in "<=" (or "==") orientation."""
        if self.relation is Relation.GE:
            return tuple(-a for a in self.coeffs), -self.rhs
        return self.coeffs, self.rhs


@dataclass(frozen=True)
class LpProblem:
    num_vars: int
    constraints: tuple[LinearConstraint, ...] = ()
    objective: tuple[Fraction, ...] | None = None
    sense: Sense | None = None
    lower: tuple[Fraction | None, ...] | None = None
    upper: tuple[Fraction | None, ...] | None = None

    def __post_init__(self):
        n = self.num_vars
        if n < 0:
            raise DimensionError("negative variable count")
        object.__setattr__(self, "constraints", tuple(self.constraints))
        for k, con in enumerate(self.constraints):
            if len(con.coeffs) != n:
                raise DimensionError(f"constraint {k} has {len(con.coeffs)} coefficients, expected {n}")
        if self.objective is not None:
            obj = tuple(to_rational(c) for c in self.objective)
            if len(obj) != n:
                raise DimensionError(f"objective has {len(obj)} coefficients, expected {n}")
            object.__setattr__(self, "objective", obj)
            object.__setattr__(self, "sense", Sense(self.sense or Sense.MIN))
        for name in ("lower", "upper"):
            bounds = getattr(self, name)
            if bounds is None:
                bounds = (None,) * n
            bounds = tuple(None if b is None else to_rational(b) for b in bounds)
            if len(bounds) != n:
                raise DimensionError(f"{name} bounds have {len(bounds)} entries, expected {n}")
            object.__setattr__(self, name, bounds)

    def rows(self) -> list[LinearConstraint]:
        """Constraints followed by bound rows; the index space of certificates."""
        out = list(self.constraints)
        n = self.num_vars
        for j in range(n):
            unit = [0] * n
            unit[j] = 1
            if self.lower[j] is not None:
                out.append(LinearConstraint(unit, Relation.GE, self.lower[j]))
            if self.upper[j] is not None:
                out.append(LinearConstraint(unit, Relation.LE, self.upper[j]))
        return out

    def objective_sign(self) -> int:
        return 1 if self.sense is Sense.MAX else -1


@dataclass(frozen=True)
class Feasible:
    point: tuple[Fraction, ...]
    value: Fraction | None = None
    dual: tuple[Fraction, ...] | None = None

    status = "feasible"


@dataclass(frozen=True)
class Infeasible:
    farkas: tuple[Fraction, ...]

    status = "infeasible"


@dataclass(frozen=True)
class Unbounded:
    point: tuple[Fraction, ...]
    ray: tuple[Fraction, ...]

    status = "unbounded"


LpOutcome = Feasible | Infeasible | Unbounded


def _dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _primitive(values: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Positive rescaling to coprime integers (zero vector left alone)."""
    den = math.lcm(*(v.denominator for v in values)) if values else 1
    ints = [int(v * den) for v in values]
    g = math.gcd(*ints) if ints else 0
    if g == 0:
        return tuple(Fraction(0) for _ in values)
    return tuple(Fraction(i // g) for i in ints)


def _integer_row(values: Sequence[Fraction]) -> tuple[int, list[int]]:
    scale = math.lcm(*(v.denominator for v in values)) if values else 1
    return scale, [int(v * scale) for v in values]


class _Tableau:
    """Fraction-free simplex tableau.

    Actual entries are ``rows[i][j] / den``. Columns are laid out as
    ``[x+ (n) | x- (n) | slacks | artificials | rhs]``.
    """

    def __init__(self, matrix: list[list[int]], basis: list[int], objectives: list[list[int]]):
        self.rows = matrix
        self.basis = basis
        self.objectives = objectives
        self.den = 1

    def pivot(self, r: int, s: int) -> None:
        prow = self.rows[r]
        p = prow[s]
        d = self.den
        for rows in (self.rows, self.objectives):
            for i, row in enumerate(rows):
                if row is prow:
                    continue
                f = row[s]
                if f == 0:
                    if p != d:
                        rows[i] = [(v * p) // d for v in row]
                else:
                    rows[i] = [(v * p - f * w) // d for v, w in zip(row, prow)]
        self.den = p
        self.basis[r] = s
        if p < 0:
            self.den = -p
            for rows in (self.rows, self.objectives):
                for i, row in enumerate(rows):
                    rows[i] = [-v for v in row]

    def entering(self, obj: list[int], allowed: range | list[int]) -> int | None:
        for j in allowed:
            if obj[j] < 0:
                return j
        return None

    def leaving(self, s: int) -> int | None:
        best = None
        for i, row in enumerate(self.rows):
            a = row[s]
            if a <= 0:
                continue
            if best is None:
                best = i
                continue
            brow = self.rows[best]
            # compare row[-1]/a against brow[-1]/brow[s]
            lhs = row[-1] * brow[s]
            rhs = brow[-1] * a
            if lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[best]):
                best = i
        return best

    def run(self, obj_index: int, allowed) -> int | None:
        """Pivot to optimality; return an unbounded entering column, if any."""
        obj = self.objectives[obj_index]
        while True:
            obj = self.objectives[obj_index]
            s = self.entering(obj, allowed)
            if s is None:
                return None
            r = self.leaving(s)
            if r is None:
                return s
            self.pivot(r, s)


def solve(problem: LpProblem) -> LpOutcome:
    """Solve ``problem`` exactly.

    Without an objective this is a feasibility check. The returned outcome
    always satisfies :func:`check_certificate`.
    """
    n = problem.num_vars
    rows = problem.rows()
    m = len(rows)

    # Scale every row (in <= orientation) to integers, flip so rhs >= 0.
    row_scale: list[int] = []
    row_sign: list[int] = []
    int_rows: list[list[int]] = []
    is_ineq: list[bool] = []
    for con in rows:
        a, b = con.le_form()
        scale, ints = _integer_row(list(a) + [b])
        sign = -1 if ints[-1] < 0 else 1
        row_scale.append(scale)
        row_sign.append(sign)
        int_rows.append([sign * v for v in ints])
        is_ineq.append(con.relation is not Relation.EQ)

    slack_col: dict[int, int] = {}
    col = 2 * n
    for i in range(m):
        if is_ineq[i]:
            slack_col[i] = col
            col += 1
    art_col: dict[int, int] = {}
    for i in range(m):
        if not (is_ineq[i] and row_sign[i] > 0):
            art_col[i] = col
            col += 1
    ncols = col
    first_art = 2 * n + len(slack_col)

    matrix = []
    basis = []
    init_col = []
    for i in range(m):
        a = int_rows[i][:n]
        row = a + [-v for v in a] + [0] * (ncols - 2 * n) + [int_rows[i][-1]]
        if i in slack_col:
            row[slack_col[i]] = row_sign[i]
        if i in art_col:
            row[art_col[i]] = 1
            basis.append(art_col[i])
        else:
            basis.append(slack_col[i])
        init_col.append(basis[-1])
        matrix.append(row)

    # Phase 1 maximizes -(sum of artificials); phase 2 maximizes sign * c.
    phase1 = [0] * (ncols + 1)
    for i in art_col:
        for j in range(ncols + 1):
            phase1[j] -= matrix[i][j]
    for c in art_col.values():
        phase1[c] = 0

    sign = problem.objective_sign() if problem.objective is not None else 1
    c_scale = 1
    phase2 = [0] * (ncols + 1)
    if problem.objective is not None:
        c_scale, cints = _integer_row([sign * c for c in problem.objective])
        for j in range(n):
            phase2[j] = -cints[j]
            phase2[n + j] = cints[j]

    tab = _Tableau(matrix, basis, [phase1, phase2])
    real_cols = range(first_art)

    if art_col:
        tab.run(0, real_cols)
        if tab.objectives[0][-1] < 0:
            obj = tab.objectives[0]
            y = []
            for i in range(m):
                c = init_col[i]
                cost = -tab.den if c >= first_art else 0
                y.append(row_sign[i] * row_scale[i] * (obj[c] + cost))
            return Infeasible(_primitive([Fraction(v) for v in y]))
        # Drive zero-level artificials out of the basis where possible.
        for i in range(m):
            if tab.basis[i] >= first_art:
                row = tab.rows[i]
                for j in real_cols:
                    if row[j] != 0:
                        tab.pivot(i, j)
                        break

    def current_point() -> tuple[Fraction, ...]:
        vals = [Fraction(0)] * ncols
        for i, b in enumerate(tab.basis):
            vals[b] = Fraction(tab.rows[i][-1], tab.den)
        return tuple(vals[j] - vals[n + j] for j in range(n))

    if problem.objective is None:
        return Feasible(current_point())

    unbounded_col = tab.run(1, real_cols)
    point = current_point()
    if unbounded_col is not None:
        direction = [Fraction(0)] * ncols
        direction[unbounded_col] = Fraction(1)
        for i, b in enumerate(tab.basis):
            direction[b] = Fraction(-tab.rows[i][unbounded_col], tab.den)
        ray = _primitive([direction[j] - direction[n + j] for j in range(n)])
        return Unbounded(point, ray)

    obj = tab.objectives[1]
    dual = tuple(
        Fraction(row_sign[i] * row_scale[i] * obj[init_col[i]], tab.den * c_scale) for i in range(m)
    )
    value = _dot(problem.objective, point)
    return Feasible(point, value, dual)


def _row_ok(con: LinearConstraint, x) -> bool:
    lhs = _dot(con.coeffs, x)
    if con.relation is Relation.EQ:
        return lhs == con.rhs
    if con.relation is Relation.GE:
        return lhs >= con.rhs
    return lhs <= con.rhs


def is_feasible_point(problem: LpProblem, x: Sequence) -> bool:
    if len(x) != problem.num_vars:
        return False
    return all(_row_ok(con, x) for con in problem.rows())


def _combination(rows: list[LinearConstraint], y: Sequence[Fraction], n: int):
    """Return (sum y_i a_i, sum y_i b_i) in <= orientation, or None on a sign breach."""
    if len(y) != len(rows):
        return None
    acc = [Fraction(0)] * n
    rhs = Fraction(0)
    for con, yi in zip(rows, y):
        if con.relation is not Relation.EQ and yi < 0:
            return None
        if yi == 0:
            continue
        a, b = con.le_form()
        for j in range(n):
            acc[j] += yi * a[j]
        rhs += yi * b
    return acc, rhs


def check_certificate(problem: LpProblem, outcome: LpOutcome) -> bool:
    """Audit ``outcome`` against ``problem`` by exact evaluation."""
    n = problem.num_vars
    rows = problem.rows()
    if isinstance(outcome, Feasible):
        if not is_feasible_point(problem, outcome.point):
            return False
        if problem.objective is None:
            return outcome.value is None and outcome.dual is None
        if outcome.value != _dot(problem.objective, outcome.point) or outcome.dual is None:
            return False
        comb = _combination(rows, outcome.dual, n)
        if comb is None:
            return False
        acc, rhs = comb
        s = problem.objective_sign()
        return all(acc[j] == s * problem.objective[j] for j in range(n)) and rhs == s * outcome.value
    if isinstance(outcome, Infeasible):
        comb = _combination(rows, outcome.farkas, n)
        if comb is None:
            return False
        acc, rhs = comb
        return all(v == 0 for v in acc) and rhs < 0
    if isinstance(outcome, Unbounded):
        if problem.objective is None or len(outcome.ray) != n:
            return False
        if not is_feasible_point(problem, outcome.point):
            return False
        for con in rows:
            a, _ = con.le_form()
            lhs = _dot(a, outcome.ray)
            if con.relation is Relation.EQ and lhs != 0:
                return False
            if con.relation is not Relation.EQ and lhs > 0:
                return False
        return problem.objective_sign() * _dot(problem.objective, outcome.ray) > 0
    return False


def dual_problem(problem: LpProblem) -> LpProblem:
    """The explicit LP dual, built from the rows in <= orientation.

    For ``max c.x`` the dual is ``min b.u`` s.t. ``A^T u = c`` with ``u >= 0``
    on inequality rows; a ``min`` primal is treated as ``max -c.x`` and the
    dual objective is negated back, so both optimal values coincide.
    """
    if problem.objective is None:
        raise ValueError("dual_problem needs an objective")
    rows = problem.rows()
    s = problem.objective_sign()
    n = problem.num_vars
    le = [con.le_form() for con in rows]
    constraints = [
        LinearConstraint([a[j] for a, _ in le], Relation.EQ, s * problem.objective[j]) for j in range(n)
    ]
    lower = [None if con.relation is Relation.EQ else Fraction(0) for con in rows]
    if s > 0:
        return LpProblem(len(rows), constraints, [b for _, b in le], Sense.MIN, lower=lower)
    return LpProblem(len(rows), constraints, [-b for _, b in le], Sense.MAX, lower=lower)
