"""Convex-hull membership and separation in belief space.

Every answer comes with a witness: hull weights that rebuild the belief, or
a separating payment direction ``z`` with ``<p, z> = 0`` and ``<q, z> >= 1``
for each reference belief ``q``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import (
    DimensionError,
    Environment,
    UsageError,
    ValidationError,
    expected_transfer,
)
from .lp import Infeasible, LinearConstraint, LpProblem, Relation, solve


@dataclass(frozen=True)
class Member:
    weights: tuple[Fraction, ...]

    is_member = True


@dataclass(frozen=True)
class Separated:
    z: tuple[Fraction, ...]
    vacuous: bool = False

    is_member = False


HullResult = Member | Separated


def membership_problem(p: Sequence[Fraction], Q: Sequence[Sequence[Fraction]]) -> LpProblem:
    """Weights ``lam >= 0`` with ``sum lam = 1`` and ``sum lam_q q = p``."""
    k = len(Q)
    cons = [LinearConstraint([q[w] for q in Q], Relation.EQ, p[w]) for w in range(len(p))]
    cons.append(LinearConstraint([1] * k, Relation.EQ, 1))
    return LpProblem(k, cons, lower=[Fraction(0)] * k)


def separator_problem(p: Sequence[Fraction], Q: Sequence[Sequence[Fraction]]) -> LpProblem:
    """Direct separator system: ``<p, z> = 0`` and ``<q, z> >= 1`` for all q."""
    cons = [LinearConstraint(p, Relation.EQ, 0)]
    cons += [LinearConstraint(q, Relation.GE, 1) for q in Q]
    return LpProblem(len(p), cons)


def normalize_separator(p: Sequence[Fraction], Q: Sequence[Sequence[Fraction]], z) -> tuple[Fraction, ...]:
    """Shift ``z`` so ``<p, z> = 0`` and rescale so ``min_q <q, z> = 1``.

    Beliefs sum to one, so the shift by a constant vector moves every
    expectation by the same amount and keeps the separation intact.
    """
    shift = expected_transfer(p, z)
    z = [zi - shift for zi in z]
    if not Q:
        return tuple(z)
    low = min(expected_transfer(q, z) for q in Q)
    if low <= 0:
        raise ValueError("not a separating direction")
    return tuple(zi / low for zi in z)


def _check_shapes(p, Q):
    if not Q:
        raise UsageError("reference set must be non-empty")
    for q in Q:
        if len(q) != len(p):
            raise DimensionError(f"belief lengths differ: {len(q)} vs {len(p)}")


def hull_membership(p: Sequence[Fraction], Q: Sequence[Sequence[Fraction]]) -> HullResult:
    _check_shapes(p, Q)
    problem = membership_problem(p, Q)
    outcome = solve(problem)
    if not isinstance(outcome, Infeasible):
        return Member(tuple(outcome.point))
    # Farkas rows: one per state, the sum-to-one row, then -lam_q <= 0.
    y = outcome.farkas
    num_states = len(p)
    offset = y[num_states]
    raw = [y[w] + offset for w in range(num_states)]
    return Separated(normalize_separator(p, Q, raw))


def verify_hull_result(p: Sequence[Fraction], Q: Sequence[Sequence[Fraction]], result: HullResult) -> bool:
    """Independent exact audit of a membership or separation witness."""
    if isinstance(result, Member):
        lam = result.weights
        if len(lam) != len(Q) or any(w < 0 for w in lam) or sum(lam, Fraction(0)) != 1:
            return False
        return all(
            sum((lam[k] * Q[k][w] for k in range(len(Q))), Fraction(0)) == p[w] for w in range(len(p))
        )
    if isinstance(result, Separated):
        z = result.z
        if len(z) != len(p) or expected_transfer(p, z) != 0:
            return False
        return all(expected_transfer(q, z) >= 1 for q in Q)
    return False


@dataclass(frozen=True)
class CmEntry:
    """Outcome for one belief: its hull test against the rest of the set."""

    index: int
    result: HullResult

    @property
    def passed(self) -> bool:
        return not result_is_member(self.result)


def result_is_member(result: HullResult) -> bool:
    return isinstance(result, Member)


def check_cm(P: Sequence[Sequence[Fraction]]) -> list[CmEntry]:
    """Convex-independence test: each belief against the hull of the others.

    The whole set passes iff every entry is :class:`Separated`.
    """
    keys = [tuple(p) for p in P]
    if len(set(keys)) != len(keys):
        raise ValidationError("distinct-beliefs violated", "check_cm needs pairwise distinct beliefs")
    out = []
    for i, p in enumerate(P):
        rest = [q for k, q in enumerate(P) if k != i]
        if rest:
            out.append(CmEntry(i, hull_membership(p, rest)))
        else:
            out.append(CmEntry(i, Separated(tuple(Fraction(0) for _ in p), vacuous=True)))
    return out


@dataclass(frozen=True)
class ConditionEntry:
    type_id: str
    reference_ids: tuple[str, ...]
    result: HullResult

    @property
    def passed(self) -> bool:
        return isinstance(self.result, Separated)

    def weights_by_id(self) -> dict[str, Fraction]:
        assert isinstance(self.result, Member)
        return dict(zip(self.reference_ids, self.result.weights))


@dataclass(frozen=True)
class ConditionReport:
    """Condition (i): convex independence of strategic beliefs.
    Condition (ii): each behavioral belief outside the strategic hull.
    """

    cond_i: tuple[ConditionEntry, ...]
    cond_ii: tuple[ConditionEntry, ...]
    vacuous: bool = False
    notes: tuple[str, ...] = field(default=())

    @property
    def cond_i_passed(self) -> bool:
        return all(e.passed for e in self.cond_i)

    @property
    def cond_ii_passed(self) -> bool:
        return all(e.passed for e in self.cond_ii)

    @property
    def passed(self) -> bool:
        return self.cond_i_passed and self.cond_ii_passed


def check_theorem_conditions(env: Environment) -> ConditionReport:
    strategic = env.strategic
    s_ids = tuple(t.id for t in strategic)
    s_beliefs = [t.belief.probs for t in strategic]
    cond_i = []
    for entry in check_cm(s_beliefs):
        refs = tuple(i for k, i in enumerate(s_ids) if k != entry.index)
        cond_i.append(ConditionEntry(s_ids[entry.index], refs, entry.result))
    cond_ii = []
    zero = tuple(Fraction(0) for _ in range(env.num_states))
    for b in env.behavioral:
        if s_beliefs:
            result = hull_membership(b.belief.probs, s_beliefs)
        else:
            result = Separated(zero, vacuous=True)
        cond_ii.append(ConditionEntry(b.id, s_ids, result))
    vacuous = not strategic
    notes = ("no strategic types: both conditions hold vacuously",) if vacuous else ()
    return ConditionReport(tuple(cond_i), tuple(cond_ii), vacuous, notes)


def max_weighted_value(p: Sequence[Fraction], Q: Sequence[Sequence[Fraction]], values: Sequence[Fraction]):
    """Largest ``sum lam_q v_q`` over all hull decompositions of ``p``.

    Returns ``(value, weights)`` or ``None`` when ``p`` is outside the hull.
    """
    _check_shapes(p, Q)
    base = membership_problem(p, Q)
    problem = LpProblem(base.num_vars, base.constraints, list(values), "max", lower=base.lower)
    outcome = solve(problem)
    if isinstance(outcome, Infeasible):
        return None
    return outcome.value, tuple(outcome.point)
