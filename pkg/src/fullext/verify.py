"""Audits of contract menus and the whole-menu feasibility oracle."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import Contract, ContractMenu, CoverageError, Environment, expected_transfer
from .lp import Infeasible, LinearConstraint, LpOutcome, LpProblem, Relation, check_certificate, solve


@dataclass(frozen=True)
class ExtractionViolation:
    type_id: str
    expected_payment: Fraction
    valuation: Fraction


@dataclass(frozen=True)
class IcViolation:
    strategic_id: str
    tempting_id: str
    own_cost: Fraction
    tempting_cost: Fraction


@dataclass(frozen=True)
class VerificationReport:
    extraction_violations: tuple[ExtractionViolation, ...]
    ic_violations: tuple[IcViolation, ...]

    @property
    def passed(self) -> bool:
        return not self.extraction_violations and not self.ic_violations


def _require_coverage(menu: ContractMenu, env: Environment) -> None:
    missing = [t.id for t in env.types if t.id not in menu]
    if missing:
        raise CoverageError(f"menu has no contract for types {missing}")
    for t in env.types:
        if len(menu[t.id]) != env.num_states:
            raise CoverageError(f"contract for {t.id!r} has {len(menu[t.id])} transfers, expected {env.num_states}")


def check_full_extraction(menu: ContractMenu, env: Environment) -> list[ExtractionViolation]:
    _require_coverage(menu, env)
    out = []
    for t in env.types:
        paid = expected_transfer(t.belief, menu[t.id])
        if paid != t.valuation:
            out.append(ExtractionViolation(t.id, paid, t.valuation))
    return out


def check_ic(menu: ContractMenu, env: Environment) -> list[IcViolation]:
    """Each strategic type must weakly prefer (pay least for) its own contract."""
    _require_coverage(menu, env)
    out = []
    for s in env.strategic:
        own = expected_transfer(s.belief, menu[s.id])
        for t in env.types:
            if t.id == s.id:
                continue
            other = expected_transfer(s.belief, menu[t.id])
            if other < own:
                out.append(IcViolation(s.id, t.id, own, other))
    return out


def verify_menu(menu: ContractMenu, env: Environment) -> VerificationReport:
    return VerificationReport(tuple(check_full_extraction(menu, env)), tuple(check_ic(menu, env)))


def oracle_problem(env: Environment) -> LpProblem:
    """Joint LP over all transfers ``c_t(w)``, variable index ``t * |W| + w``.

    Rows: one extraction equality per type, then one IC inequality per
    (strategic s, other type t) pair in type order.
    """
    k = env.num_states
    types = env.types
    nv = len(types) * k
    cons = []
    for ti, t in enumerate(types):
        row = [Fraction(0)] * nv
        row[ti * k : (ti + 1) * k] = t.belief.probs
        cons.append(LinearConstraint(row, Relation.EQ, t.valuation))
    for si, s in enumerate(types):
        if not s.is_strategic:
            continue
        for ti, t in enumerate(types):
            if ti == si:
                continue
            row = [Fraction(0)] * nv
            row[ti * k : (ti + 1) * k] = s.belief.probs
            row[si * k : (si + 1) * k] = [-p for p in s.belief.probs]
            cons.append(LinearConstraint(row, Relation.GE, 0))
    return LpProblem(nv, cons)


@dataclass(frozen=True)
class OracleResult:
    feasible: bool
    menu: ContractMenu | None
    outcome: LpOutcome
    problem: LpProblem

    @property
    def farkas(self) -> tuple[Fraction, ...] | None:
        return self.outcome.farkas if isinstance(self.outcome, Infeasible) else None

    def certificate_ok(self) -> bool:
        return check_certificate(self.problem, self.outcome)


def oracle_feasibility(env: Environment) -> OracleResult:
    """Decide full extraction feasibility directly, without any construction."""
    problem = oracle_problem(env)
    outcome = solve(problem)
    if isinstance(outcome, Infeasible):
        return OracleResult(False, None, outcome, problem)
    k = env.num_states
    menu = ContractMenu(
        {t.id: Contract(outcome.point[i * k : (i + 1) * k]) for i, t in enumerate(env.types)}
    )
    return OracleResult(True, menu, outcome, problem)
