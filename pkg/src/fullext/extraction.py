"""Construction of fully extracting, incentive compatible contract menus.

Strategic types get the classic separating-direction contracts
``c_s = v_s + alpha_s * z_s``. A behavioral type outside the strategic hull
gets ``c_b = v_b + alpha_b * z_b`` where ``z_b`` costs it nothing in
expectation and costs every strategic type at least one unit. Behavioral
types inside the hull are handled by a flat contract or a direct LP when
their valuation is high enough.

Contracts for different behavioral types never interact, so each is built
in isolation and the results are merged in environment order.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .core import (
    Contract,
    ContractDerivation,
    ContractMenu,
    Environment,
    FullExtError,
    Kind,
    Method,
    TypeRecord,
    expected_transfer,
    validate_environment,
)
from .geometry import (
    ConditionReport,
    Member,
    Separated,
    check_theorem_conditions,
    hull_membership,
    max_weighted_value,
)
from .lp import Infeasible, LinearConstraint, LpProblem, Relation, solve
from .verify import check_ic, verify_menu


class FailureReason(enum.Enum):
    COND_I_FAILS = "cond_i_fails"
    COND_II_FAILS = "cond_ii_fails"
    PROPOSITION_VALUE_FAILS = "proposition_value_fails"


@dataclass(frozen=True)
class Failure:
    """Why no menu was produced, with an exactly checkable witness.

    ``witness`` holds hull weights keyed by strategic type id. For a value
    failure they are the decomposition maximizing ``sum lam_s v_s``, whose
    value ``v_bar`` exceeds ``v_b``.
    """

    reason: FailureReason
    type_id: str
    witness: Mapping[str, Fraction]
    v_b: Fraction | None = None
    v_bar: Fraction | None = None


class ExtractionFailure(FullExtError):
    def __init__(self, failure: Failure):
        self.failure = failure
        super().__init__(f"{failure.reason.value} at type {failure.type_id!r}")


class PreconditionError(FullExtError, ValueError):
    pass


@dataclass(frozen=True)
class SolveResult:
    menu: ContractMenu | None = None
    derivations: tuple[ContractDerivation, ...] = ()
    failure: Failure | None = None
    report: ConditionReport | None = field(default=None, compare=False)

    @property
    def ok(self) -> bool:
        return self.menu is not None

    def derivation(self, type_id: str) -> ContractDerivation:
        for d in self.derivations:
            if d.type_id == type_id:
                return d
        raise KeyError(type_id)


def scaling_alpha(z: Sequence[Fraction], targets: Sequence[tuple[Sequence[Fraction], Fraction]], v, clamp=True):
    """Smallest scale making ``v + alpha * z`` cost at least each target.

    ``targets`` pairs a belief ``q`` (with ``<q, z> > 0``) with the cost the
    contract must reach under ``q``.
    """
    ratios = [(cost - v) / expected_transfer(q, z) for q, cost in targets]
    if not ratios:
        return Fraction(0)
    alpha = max(ratios)
    return max(alpha, Fraction(0)) if clamp else alpha


def _contract(v: Fraction, alpha: Fraction, z: Sequence[Fraction]) -> Contract:
    return Contract(v + alpha * zi for zi in z)


def _zero(k: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(0) for _ in range(k))


def _lam_by_id(ids: Sequence[str], weights: Sequence[Fraction]) -> dict[str, Fraction]:
    return dict(zip(ids, weights))


def cm_menu(
    env: Environment, clamp: bool = True, report: ConditionReport | None = None
) -> tuple[ContractMenu, tuple[ContractDerivation, ...]]:
    """Fully extracting IC menu for the strategic types of ``env``.

    Behavioral types are ignored. ``clamp=False`` keeps negative scales as
    the textbook formula gives them; both variants extract and are IC.
    Raises :class:`ExtractionFailure` when strategic beliefs are not convex
    independent.
    """
    strategic = env.strategic
    if report is None:
        report = check_theorem_conditions(env.restricted(Kind.STRATEGIC))
    contracts = {}
    derivations = []
    for entry in report.cond_i:
        s = env.type(entry.type_id)
        if isinstance(entry.result, Member):
            raise ExtractionFailure(Failure(FailureReason.COND_I_FAILS, s.id, entry.weights_by_id()))
        others = [t for t in strategic if t.id != s.id]
        z = entry.result.z if others else _zero(env.num_states)
        alpha = scaling_alpha(z, [(t.belief, t.valuation) for t in others], s.valuation, clamp)
        contracts[s.id] = _contract(s.valuation, alpha, z)
        derivations.append(ContractDerivation(s.id, Method.CM_CONSTRUCTION, separator=z, alpha=alpha))
    return ContractMenu(contracts), tuple(derivations)


def _separated_contract(b: TypeRecord, strategic: Sequence[TypeRecord], costs: Mapping[str, Fraction], env):
    if not strategic:
        c = Contract.flat(b.valuation, env.num_states)
        return c, ContractDerivation(b.id, Method.FLAT_CONTRACT, audit={"reason": "no strategic types"})
    result = hull_membership(b.belief.probs, [s.belief.probs for s in strategic])
    if isinstance(result, Member):
        ids = [s.id for s in strategic]
        raise ExtractionFailure(Failure(FailureReason.COND_II_FAILS, b.id, _lam_by_id(ids, result.weights)))
    z = result.z
    alpha = scaling_alpha(z, [(s.belief, costs[s.id]) for s in strategic], b.valuation)
    derivation = ContractDerivation(b.id, Method.BEHAVIORAL_FARKAS, separator=z, alpha=alpha)
    return _contract(b.valuation, alpha, z), derivation


def behavioral_contract(b_id: str, menu_s: ContractMenu, env: Environment) -> tuple[Contract, ContractDerivation]:
    """Contract for behavioral type ``b_id`` against a fully extracting strategic menu.

    Only the strategic beliefs and valuations matter; ``menu_s`` is accepted
    for interface symmetry with :func:`corollary_extend`.
    """
    b = env.type(b_id)
    strategic = env.strategic
    return _separated_contract(b, strategic, {s.id: s.valuation for s in strategic}, env)


def corollary_extend(menu_minus_b: ContractMenu, b_id: str, env: Environment) -> tuple[Contract, ContractDerivation]:
    """Add a contract for ``b_id`` to any IC menu of the other types.

    The new contract extracts ``v_b`` exactly and costs each strategic type
    at least what its own contract costs it, so the extended menu stays IC.
    """
    b = env.type(b_id)
    rest = env.without(b_id)
    violations = check_ic(menu_minus_b, rest)
    if violations:
        v = violations[0]
        raise PreconditionError(f"menu is not IC: {v.strategic_id!r} prefers {v.tempting_id!r}")
    strategic = env.strategic
    costs = {s.id: expected_transfer(s.belief, menu_minus_b[s.id]) for s in strategic}
    return _separated_contract(b, strategic, costs, env)


def _finish(env: Environment, contracts: dict, derivations: list, report) -> SolveResult:
    menu = ContractMenu({t.id: contracts[t.id] for t in env.types})
    order = {t.id: k for k, t in enumerate(env.types)}
    derivations = tuple(sorted(derivations, key=lambda d: order[d.type_id]))
    audit = verify_menu(menu, env)
    if not audit.passed:
        raise AssertionError(f"constructed menu failed verification: {audit}")
    return SolveResult(menu, derivations, report=report)


def full_extraction_menu(env: Environment) -> SolveResult:
    """Menu extracting every type's rent, when both hull conditions hold."""
    validate_environment(env)
    report = check_theorem_conditions(env)
    for entry in report.cond_i:
        if not entry.passed:
            failure = Failure(FailureReason.COND_I_FAILS, entry.type_id, entry.weights_by_id())
            return SolveResult(failure=failure, report=report)
    for entry in report.cond_ii:
        if not entry.passed:
            failure = Failure(FailureReason.COND_II_FAILS, entry.type_id, entry.weights_by_id())
            return SolveResult(failure=failure, report=report)

    menu_s, derivations = cm_menu(env, report=report)
    contracts = dict(menu_s.items())
    derivations = list(derivations)
    for b in env.behavioral:
        c, d = behavioral_contract(b.id, menu_s, env)
        contracts[b.id] = c
        derivations.append(d)
    return _finish(env, contracts, derivations, report)


def _in_hull_contract(b: TypeRecord, lam: Sequence[Fraction], menu_s: ContractMenu, env: Environment):
    strategic = env.strategic
    ids = [s.id for s in strategic]
    beliefs = [s.belief.probs for s in strategic]
    values = [s.valuation for s in strategic]
    v_b = b.valuation
    v_bar = sum((w * v for w, v in zip(lam, values)), Fraction(0))
    v_bar_max, lam_max = max_weighted_value(b.belief.probs, beliefs, values)
    v_max = max(values)
    if v_b < v_bar_max:
        raise ExtractionFailure(
            Failure(FailureReason.PROPOSITION_VALUE_FAILS, b.id, _lam_by_id(ids, lam_max), v_b, v_bar_max)
        )
    if v_b >= v_max:
        c = Contract.flat(v_b, env.num_states)
        d = ContractDerivation(b.id, Method.FLAT_CONTRACT, audit={"v_max": v_max, "v_bar": v_bar})
        return c, d

    # Mixing construction, kept for comparison only. ``alpha`` is the
    # published weight; the weight that balances v_bar and v_max at v_b
    # is (v_max - v_b) / (v_max - v_bar), recorded alongside.
    alpha = (v_b - v_bar) / (v_max - v_bar)
    balanced = (v_max - v_b) / (v_max - v_bar)
    k = env.num_states
    mixed = [sum((w * menu_s[i][st] for w, i in zip(lam, ids)), Fraction(0)) for st in range(k)]
    closed = Contract(alpha * m + (1 - alpha) * v_max for m in mixed)
    closed_balanced = Contract(balanced * m + (1 - balanced) * v_max for m in mixed)

    costs = {s.id: expected_transfer(s.belief, menu_s[s.id]) for s in strategic}
    cons = [LinearConstraint(b.belief.probs, Relation.EQ, v_b)]
    cons += [LinearConstraint(s.belief.probs, Relation.GE, costs[s.id]) for s in strategic]
    outcome = solve(LpProblem(k, cons))
    if isinstance(outcome, Infeasible):
        raise AssertionError("direct LP infeasible above the value threshold")
    c = Contract(outcome.point)
    audit = {
        "v_bar": v_bar,
        "v_bar_max": v_bar_max,
        "v_max": v_max,
        "closed_form": closed,
        "closed_form_gap": expected_transfer(b.belief, closed) - v_b,
        "closed_form_ic_slack": min(expected_transfer(s.belief, closed) - costs[s.id] for s in strategic),
        "balanced_alpha": balanced,
        "balanced_form": closed_balanced,
        "balanced_form_gap": expected_transfer(b.belief, closed_balanced) - v_b,
    }
    d = ContractDerivation(b.id, Method.PROPOSITION_MIX, alpha=alpha, lam=_lam_by_id(ids, lam), audit=audit)
    return c, d


def proposition_menu(env: Environment, clamp: bool = True) -> SolveResult:
    """Menu allowing behavioral beliefs inside the strategic hull.

    An in-hull behavioral type is served when its valuation reaches the
    largest ``sum lam_s v_s`` over hull decompositions of its belief;
    otherwise the result is a value failure with the maximizing weights.
    """
    validate_environment(env)
    report = check_theorem_conditions(env)
    for entry in report.cond_i:
        if not entry.passed:
            failure = Failure(FailureReason.COND_I_FAILS, entry.type_id, entry.weights_by_id())
            return SolveResult(failure=failure, report=report)
    menu_s, derivations = cm_menu(env, clamp=clamp, report=report)
    contracts = dict(menu_s.items())
    derivations = list(derivations)
    for entry in report.cond_ii:
        b = env.type(entry.type_id)
        try:
            if isinstance(entry.result, Separated):
                c, d = behavioral_contract(b.id, menu_s, env)
            else:
                c, d = _in_hull_contract(b, entry.result.weights, menu_s, env)
        except ExtractionFailure as exc:
            return SolveResult(failure=exc.failure, report=report)
        contracts[b.id] = c
        derivations.append(d)
    return _finish(env, contracts, derivations, report)
