"""JSON formats for environments, menus, auctions and reports.

Rationals are always strings (``"3/4"``, ``"-2"``); floats are rejected on
input and never produced on output, so every artifact round-trips exactly.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from .auction import AuctionEnvironment, AuctionSolution, revenue_audit
from .core import (
    Contract,
    ContractDerivation,
    ContractMenu,
    Environment,
    FullExtError,
    Kind,
    TypeRecord,
)
from .extraction import Failure, SolveResult
from .geometry import ConditionEntry, ConditionReport, Member, Separated
from .verify import OracleResult, VerificationReport

_RATIONAL = re.compile(r"^\s*-?\d+(\s*/\s*\d+)?\s*$")


class ParseError(FullExtError, ValueError):
    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


def parse_rational(value: Any, field: str) -> Fraction:
    if not isinstance(value, str) or not _RATIONAL.match(value):
        raise ParseError(field, f"expected a rational string like '3/4', got {value!r}")
    try:
        return Fraction(value.replace(" ", ""))
    except ZeroDivisionError:
        raise ParseError(field, "zero denominator") from None


def fmt(x: Fraction) -> str:
    return str(x)


def fmt_vec(xs) -> list[str]:
    return [str(x) for x in xs]


def _expect(obj: Any, kind: type, field: str):
    if not isinstance(obj, kind):
        raise ParseError(field, f"expected {kind.__name__}, got {type(obj).__name__}")
    return obj


def _fields(obj: Mapping, field: str, required: set[str], optional: set[str] = frozenset()) -> None:
    _expect(obj, dict, field)
    unknown = set(obj) - required - set(optional)
    if unknown:
        raise ParseError(f"{field}.{sorted(unknown)[0]}" if field else sorted(unknown)[0], "unknown field")
    missing = required - set(obj)
    if missing:
        name = sorted(missing)[0]
        raise ParseError(f"{field}.{name}" if field else name, "missing field")


def _rational_list(obj: Any, field: str) -> list[Fraction]:
    _expect(obj, list, field)
    return [parse_rational(v, f"{field}[{k}]") for k, v in enumerate(obj)]


# -- environments and menus ---------------------------------------------------


def env_from_json(obj: Any) -> Environment:
    _fields(obj, "", {"states", "types"})
    states = _expect(obj["states"], list, "states")
    for k, s in enumerate(states):
        _expect(s, str, f"states[{k}]")
    types = []
    for k, t in enumerate(_expect(obj["types"], list, "types")):
        where = f"types[{k}]"
        _fields(t, where, {"id", "kind", "valuation", "belief"})
        tid = _expect(t["id"], str, f"{where}.id")
        kind = t["kind"]
        if kind not in ("strategic", "behavioral"):
            raise ParseError(f"{where}.kind", f"expected 'strategic' or 'behavioral', got {kind!r}")
        types.append(
            TypeRecord(
                tid,
                Kind(kind),
                parse_rational(t["valuation"], f"{where}.valuation"),
                _rational_list(t["belief"], f"{where}.belief"),
            )
        )
    return Environment(states, types)


def env_to_json(env: Environment) -> dict:
    return {
        "states": list(env.states),
        "types": [
            {"id": t.id, "kind": t.kind.value, "valuation": fmt(t.valuation), "belief": fmt_vec(t.belief)}
            for t in env.types
        ],
    }


def menu_from_json(obj: Any) -> ContractMenu:
    _fields(obj, "", {"contracts"})
    contracts = _expect(obj["contracts"], dict, "contracts")
    return ContractMenu({tid: Contract(_rational_list(c, f"contracts.{tid}")) for tid, c in contracts.items()})


def menu_to_json(menu: ContractMenu) -> dict:
    return {"contracts": {tid: fmt_vec(c) for tid, c in menu.items()}}


# -- auctions -----------------------------------------------------------------


def auction_from_json(obj: Any) -> AuctionEnvironment:
    _fields(obj, "", {"bidders", "grids", "prior"}, {"behavioral", "priority"})
    bidders = _expect(obj["bidders"], list, "bidders")
    for k, b in enumerate(bidders):
        _expect(b, str, f"bidders[{k}]")
    grids_obj = _expect(obj["grids"], dict, "grids")
    grids = {}
    for b in bidders:
        if b not in grids_obj:
            raise ParseError(f"grids.{b}", "missing field")
        grids[b] = _rational_list(grids_obj[b], f"grids.{b}")
    extra = set(grids_obj) - set(bidders)
    if extra:
        raise ParseError(f"grids.{sorted(extra)[0]}", "unknown bidder")
    prior = {}
    for k, entry in enumerate(_expect(obj["prior"], list, "prior")):
        where = f"prior[{k}]"
        _fields(entry, where, {"profile", "prob"})
        profile = tuple(_rational_list(entry["profile"], f"{where}.profile"))
        if profile in prior:
            raise ParseError(f"{where}.profile", "duplicate profile")
        prior[profile] = parse_rational(entry["prob"], f"{where}.prob")
    behavioral = {}
    beh_obj = _expect(obj.get("behavioral", {}), dict, "behavioral")
    for b, vals in beh_obj.items():
        if b not in bidders:
            raise ParseError(f"behavioral.{b}", "unknown bidder")
        behavioral[b] = _rational_list(vals, f"behavioral.{b}")
    priority = obj.get("priority")
    if priority is not None:
        _expect(priority, list, "priority")
    return AuctionEnvironment(bidders, grids, prior, behavioral, priority)


def auction_to_json(auction: AuctionEnvironment) -> dict:
    return {
        "bidders": list(auction.bidders),
        "grids": {b: fmt_vec(auction.grids[b]) for b in auction.bidders},
        "prior": [{"profile": fmt_vec(prof), "prob": fmt(p)} for prof, p in auction.prior.items()],
        "behavioral": {b: fmt_vec(sorted(auction.behavioral[b])) for b in auction.bidders},
        "priority": list(auction.priority),
    }


# -- reports ------------------------------------------------------------------


def hull_result_to_json(result) -> dict:
    if isinstance(result, Member):
        return {"member": True, "lambda": fmt_vec(result.weights)}
    assert isinstance(result, Separated)
    return {"member": False, "z": fmt_vec(result.z), "vacuous": result.vacuous}


def _entry_to_json(e: ConditionEntry) -> dict:
    out = {"type_id": e.type_id, "passed": e.passed, "reference_ids": list(e.reference_ids)}
    out.update(hull_result_to_json(e.result))
    return out


def condition_report_to_json(report: ConditionReport) -> dict:
    return {
        "passed": report.passed,
        "cond_i_passed": report.cond_i_passed,
        "cond_ii_passed": report.cond_ii_passed,
        "vacuous": report.vacuous,
        "cond_i": [_entry_to_json(e) for e in report.cond_i],
        "cond_ii": [_entry_to_json(e) for e in report.cond_ii],
    }


def _jsonable(value):
    if isinstance(value, Fraction):
        return fmt(value)
    if isinstance(value, Contract):
        return fmt_vec(value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    return value


def derivation_to_json(d: ContractDerivation) -> dict:
    out: dict[str, Any] = {"type_id": d.type_id, "method": d.method.value}
    if d.separator is not None:
        out["separator"] = fmt_vec(d.separator)
    if d.alpha is not None:
        out["alpha"] = fmt(d.alpha)
    if d.lam is not None:
        out["lambda"] = {k: fmt(v) for k, v in d.lam.items()}
    if d.audit:
        out["audit"] = _jsonable(dict(d.audit))
    return out


def failure_to_json(f: Failure) -> dict:
    out = {"reason": f.reason.value, "type_id": f.type_id, "lambda": {k: fmt(v) for k, v in f.witness.items()}}
    if f.v_b is not None:
        out["v_b"] = fmt(f.v_b)
        out["v_bar"] = fmt(f.v_bar)
    return out


def solve_result_to_json(result: SolveResult) -> dict:
    if result.ok:
        return {
            "status": "menu",
            "menu": menu_to_json(result.menu),
            "derivations": [derivation_to_json(d) for d in result.derivations],
        }
    return {"status": "failure", "failure": failure_to_json(result.failure)}


def verification_to_json(report: VerificationReport) -> dict:
    return {
        "passed": report.passed,
        "extraction_violations": [
            {"type_id": v.type_id, "expected_payment": fmt(v.expected_payment), "valuation": fmt(v.valuation)}
            for v in report.extraction_violations
        ],
        "ic_violations": [
            {
                "strategic_id": v.strategic_id,
                "tempting_id": v.tempting_id,
                "own_cost": fmt(v.own_cost),
                "tempting_cost": fmt(v.tempting_cost),
            }
            for v in report.ic_violations
        ],
    }


def oracle_to_json(result: OracleResult) -> dict:
    if result.feasible:
        return {"feasible": True, "menu": menu_to_json(result.menu)}
    return {"feasible": False, "farkas": fmt_vec(result.farkas)}


def auction_solution_to_json(auction: AuctionEnvironment, sol: AuctionSolution) -> dict:
    out: dict[str, Any] = {
        "feasible": sol.ok,
        "bidders": {
            b: {
                "condition_holds": sol.conditions[b].holds,
                "condition_consistent": sol.conditions[b].consistent,
                "result": solve_result_to_json(sol.results[b]),
            }
            for b in auction.bidders
        },
    }
    if sol.ok:
        out["transfers"] = {
            b: [
                {"own": fmt(own), "opponents": fmt_vec(rest), "transfer": fmt(v)}
                for (own, rest), v in sol.rule.transfers[b].items()
            ]
            for b in auction.bidders
        }
        revenue, surplus = revenue_audit(auction, sol.rule)
        out["audit"] = {"expected_revenue": fmt(revenue), "expected_surplus": fmt(surplus)}
    return out


def load_json(path: str | Path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(str(path), f"invalid JSON ({exc.msg} at line {exc.lineno})") from None


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2)
