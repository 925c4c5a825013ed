"""Command-line entry point.

Exit codes: 0 success / feasible / verified, 1 infeasible or failed
verification (certificate printed), 2 bad input or usage.
"""

from __future__ import annotations

import argparse
import json
import sys

from .auction import solve_auction, validate_auction
from .core import FullExtError, validate_environment
from .extraction import full_extraction_menu, proposition_menu
from .generator import GeneratorSpec, Regime, generate
from .geometry import check_theorem_conditions
from .serialize import (
    auction_from_json,
    auction_solution_to_json,
    condition_report_to_json,
    dumps,
    env_from_json,
    env_to_json,
    load_json,
    menu_from_json,
    oracle_to_json,
    solve_result_to_json,
    verification_to_json,
)
from .verify import oracle_feasibility, verify_menu


def _compact(values) -> str:
    return json.dumps(values, separators=(",", ":"))


def _load_env(path):
    return validate_environment(env_from_json(load_json(path)))


def _print_entries(title, entries):
    print(title)
    for e in entries:
        if e["member"]:
            print(f"  {e['type_id']}: FAIL  lambda over {_compact(e['reference_ids'])} = {_compact(e['lambda'])}")
        else:
            tag = " (vacuous)" if e["vacuous"] else ""
            print(f"  {e['type_id']}: pass  z = {_compact(e['z'])}{tag}")


def cmd_check(args) -> int:
    report = check_theorem_conditions(_load_env(args.env))
    data = condition_report_to_json(report)
    if args.json:
        print(dumps(data))
    else:
        _print_entries(f"condition (i): {'pass' if data['cond_i_passed'] else 'FAIL'}", data["cond_i"])
        _print_entries(f"condition (ii): {'pass' if data['cond_ii_passed'] else 'FAIL'}", data["cond_ii"])
        if report.vacuous:
            print("note: no strategic types; conditions hold vacuously")
    return 0 if report.passed else 1


def cmd_solve(args) -> int:
    env = _load_env(args.env)
    result = full_extraction_menu(env) if args.method == "theorem" else proposition_menu(env)
    data = solve_result_to_json(result)
    if args.json:
        print(dumps(data))
    elif result.ok:
        print("menu:")
        for tid, c in data["menu"]["contracts"].items():
            print(f"  {tid}: {_compact(c)}")
        print("derivations:")
        for d in data["derivations"]:
            extras = {k: v for k, v in d.items() if k not in ("type_id", "method")}
            print(f"  {d['type_id']}: {d['method']} {_compact(extras)}")
    else:
        f = data["failure"]
        print(f"infeasible: {f['reason']} at type {f['type_id']}")
        print(f"  lambda = {_compact(f['lambda'])}")
        if "v_b" in f:
            print(f"  v_b = {f['v_b']} < v_bar = {f['v_bar']}")
    return 0 if result.ok else 1


def cmd_verify(args) -> int:
    env = _load_env(args.env)
    menu = menu_from_json(load_json(args.menu))
    report = verify_menu(menu, env)
    data = verification_to_json(report)
    if args.json:
        print(dumps(data))
    else:
        print("verified" if report.passed else "verification FAILED")
        for v in data["extraction_violations"]:
            print(f"  extraction: {v['type_id']} pays {v['expected_payment']} != valuation {v['valuation']}")
        for v in data["ic_violations"]:
            print(
                f"  ic: {v['strategic_id']} pays {v['tempting_cost']} on {v['tempting_id']}'s contract"
                f" < {v['own_cost']} on its own"
            )
    return 0 if report.passed else 1


def cmd_oracle(args) -> int:
    result = oracle_feasibility(_load_env(args.env))
    data = oracle_to_json(result)
    if args.json:
        print(dumps(data))
    elif result.feasible:
        print("feasible")
        for tid, c in data["menu"]["contracts"].items():
            print(f"  {tid}: {_compact(c)}")
    else:
        print("infeasible")
        print(f"  farkas = {_compact(data['farkas'])}")
    return 0 if result.feasible else 1


def cmd_auction(args) -> int:
    auction = validate_auction(auction_from_json(load_json(args.auction)))
    sol = solve_auction(auction)
    data = auction_solution_to_json(auction, sol)
    if args.json:
        print(dumps(data))
    else:
        for b, info in data["bidders"].items():
            res = info["result"]
            print(f"bidder {b}: {res['status']}")
            if res["status"] == "failure":
                f = res["failure"]
                print(f"  {f['reason']} at valuation {f['type_id']}, lambda = {_compact(f['lambda'])}")
        if sol.ok:
            print("transfers:")
            for b, rows in data["transfers"].items():
                for row in rows:
                    print(f"  bidder {b} reports {row['own']} vs {_compact(row['opponents'])}: {row['transfer']}")
            audit = data["audit"]
            print(f"expected revenue: {audit['expected_revenue']}")
            print(f"expected surplus: {audit['expected_surplus']}")
    return 0 if sol.ok else 1


def cmd_gen(args) -> int:
    spec = GeneratorSpec(
        args.seed, args.states, args.strategic, args.behavioral, Regime(args.regime), args.denominator_bound
    )
    text = dumps(env_to_json(generate(spec)))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fullext", description="Full surplus extraction with behavioral types.")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_json(p):
        p.add_argument("--json", action="store_true", help="print the report as JSON")
        return p

    p = with_json(sub.add_parser("check", help="test both hull conditions"))
    p.add_argument("env")
    p.set_defaults(func=cmd_check)

    p = with_json(sub.add_parser("solve", help="build a fully extracting menu"))
    p.add_argument("env")
    p.add_argument("--method", choices=["theorem", "proposition"], default="theorem")
    p.set_defaults(func=cmd_solve)

    p = with_json(sub.add_parser("verify", help="audit a menu"))
    p.add_argument("env")
    p.add_argument("menu")
    p.set_defaults(func=cmd_verify)

    p = with_json(sub.add_parser("oracle", help="construction-free feasibility LP"))
    p.add_argument("env")
    p.set_defaults(func=cmd_oracle)

    p = with_json(sub.add_parser("auction-solve", help="solve a correlated-values auction"))
    p.add_argument("auction")
    p.set_defaults(func=cmd_auction)

    p = sub.add_parser("gen", help="generate a random environment")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--states", type=int, required=True)
    p.add_argument("--strategic", type=int, required=True)
    p.add_argument("--behavioral", type=int, required=True)
    p.add_argument("--regime", choices=[r.value for r in Regime], default=Regime.SATISFY_BOTH.value)
    p.add_argument("--denominator-bound", type=int, default=50)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return args.func(args)
    except (FullExtError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
