"""Single-item auctions with correlated private values.

Each bidder is analysed on its own: states are the opponents' valuation
profiles, beliefs are Bayes conditionals of the common prior and the
informational rent of a valuation ``t`` is ``t`` times the probability of
winning under the efficient allocation. Ties go to the bidder ranked first
in ``priority``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .core import (
    Belief,
    CoverageError,
    Environment,
    FullExtError,
    Kind,
    TypeRecord,
    ValidationError,
    expected_transfer,
    to_rational,
    validate_environment,
)
from .extraction import SolveResult, full_extraction_menu
from .geometry import Member, check_theorem_conditions, hull_membership

Profile = tuple[Fraction, ...]


class ConditioningError(FullExtError, ValueError):
    pass


@dataclass(frozen=True)
class AuctionEnvironment:
    bidders: tuple[str, ...]
    grids: Mapping[str, tuple[Fraction, ...]]
    prior: Mapping[Profile, Fraction]
    behavioral: Mapping[str, frozenset] = field(default_factory=dict)
    priority: tuple[str, ...] | None = None

    def __post_init__(self):
        bidders = tuple(self.bidders)
        object.__setattr__(self, "bidders", bidders)
        grids = {i: tuple(to_rational(v) for v in self.grids[i]) for i in bidders}
        object.__setattr__(self, "grids", grids)
        prior = {tuple(to_rational(v) for v in prof): to_rational(p) for prof, p in self.prior.items()}
        object.__setattr__(self, "prior", prior)
        beh = {i: frozenset(to_rational(v) for v in self.behavioral.get(i, ())) for i in bidders}
        object.__setattr__(self, "behavioral", beh)
        object.__setattr__(self, "priority", tuple(self.priority) if self.priority is not None else bidders)

    def index(self, bidder: str) -> int:
        return self.bidders.index(bidder)

    def profiles(self):
        return itertools.product(*(self.grids[i] for i in self.bidders))

    def opponent_profiles(self, bidder: str) -> list[Profile]:
        i = self.index(bidder)
        others = [self.grids[j] for k, j in enumerate(self.bidders) if k != i]
        return list(itertools.product(*others))

    def probability(self, profile: Profile) -> Fraction:
        return self.prior.get(tuple(profile), Fraction(0))


def _split(profile: Profile, i: int) -> tuple[Fraction, Profile]:
    return profile[i], profile[:i] + profile[i + 1 :]


def _join(own: Fraction, rest: Profile, i: int) -> Profile:
    return rest[:i] + (own,) + rest[i:]


def validate_auction(auction: AuctionEnvironment) -> AuctionEnvironment:
    if len(auction.bidders) < 2:
        raise ValidationError("too-few-bidders", "at least two bidders are required")
    if len(set(auction.bidders)) != len(auction.bidders):
        raise ValidationError("duplicate-bidder")
    if sorted(auction.priority) != sorted(auction.bidders):
        raise ValidationError("bad-priority", "priority must order every bidder exactly once")
    for i in auction.bidders:
        grid = auction.grids[i]
        if not grid or len(set(grid)) != len(grid):
            raise ValidationError("bad-grid", f"bidder {i!r} needs distinct valuations")
        if any(v < 0 for v in grid):
            raise ValidationError("negative-valuation", f"bidder {i!r}")
        if not auction.behavioral[i] <= set(grid):
            raise ValidationError("bad-behavioral-set", f"bidder {i!r} marks valuations outside its grid")
    n = len(auction.bidders)
    for prof, p in auction.prior.items():
        if len(prof) != n or any(v not in auction.grids[i] for v, i in zip(prof, auction.bidders)):
            raise ValidationError("bad-profile", f"profile {prof} is not in the valuation grid")
        if p < 0:
            raise ValidationError("negative-probability", f"profile {prof}")
    total = sum(auction.prior.values(), Fraction(0))
    if total != 1:
        raise ValidationError("prior-not-normalized", f"prior sums to {total}")
    for i in auction.bidders:
        for t in auction.grids[i]:
            if marginal(auction, i, t) == 0:
                raise ValidationError("zero-marginal", f"bidder {i!r} valuation {t} has zero probability")
        seen = {}
        for t in auction.grids[i]:
            key = tuple(conditional_beliefs(auction, i, t))
            if key in seen:
                raise ValidationError(
                    "distinct-beliefs violated", f"bidder {i!r}: valuations {seen[key]} and {t} share beliefs"
                )
            seen[key] = t
    return auction


def marginal(auction: AuctionEnvironment, bidder: str, own) -> Fraction:
    i = auction.index(bidder)
    own = to_rational(own)
    return sum((p for prof, p in auction.prior.items() if prof[i] == own), Fraction(0))


def conditional_beliefs(auction: AuctionEnvironment, bidder: str, own) -> Belief:
    """Bayes conditional over all opponent profiles, in grid product order."""
    i = auction.index(bidder)
    own = to_rational(own)
    mass = marginal(auction, bidder, own)
    if mass == 0:
        raise ConditioningError(f"bidder {bidder!r} valuation {own} has zero probability")
    return Belief(auction.probability(_join(own, rest, i)) / mass for rest in auction.opponent_profiles(bidder))


def _wins(auction: AuctionEnvironment, bidder: str, own: Fraction, rest: Profile) -> bool:
    i = auction.index(bidder)
    rank = {b: k for k, b in enumerate(auction.priority)}
    others = [b for k, b in enumerate(auction.bidders) if k != i]
    for j, theta in zip(others, rest):
        if rank[j] < rank[bidder]:
            if not theta < own:
                return False
        elif theta > own:
            return False
    return True


def winner(auction: AuctionEnvironment, profile: Profile) -> str:
    """Efficient allocation: highest valuation, ties to the earliest in priority."""
    top = max(profile)
    for b in auction.priority:
        if profile[auction.index(b)] == top:
            return b
    raise AssertionError("unreachable")


def win_probability(auction: AuctionEnvironment, bidder: str, own) -> Fraction:
    own = to_rational(own)
    belief = conditional_beliefs(auction, bidder, own)
    return sum(
        (p for p, rest in zip(belief, auction.opponent_profiles(bidder)) if _wins(auction, bidder, own, rest)),
        Fraction(0),
    )


def _label(rest: Profile) -> str:
    return ",".join(str(v) for v in rest)


def support_profiles(auction: AuctionEnvironment, bidder: str) -> list[Profile]:
    """Opponent profiles with positive probability under some own valuation."""
    i = auction.index(bidder)
    return [
        rest
        for rest in auction.opponent_profiles(bidder)
        if any(auction.probability(_join(t, rest, i)) > 0 for t in auction.grids[bidder])
    ]


def reduce_to_single_bidder(auction: AuctionEnvironment, bidder: str) -> Environment:
    support = support_profiles(auction, bidder)
    everything = auction.opponent_profiles(bidder)
    keep = [everything.index(r) for r in support]
    types = []
    for t in auction.grids[bidder]:
        full = conditional_beliefs(auction, bidder, t)
        belief = Belief(full[k] for k in keep)
        kind = Kind.BEHAVIORAL if t in auction.behavioral[bidder] else Kind.STRATEGIC
        types.append(TypeRecord(str(t), kind, t * win_probability(auction, bidder, t), belief))
    env = Environment([_label(r) for r in support], types)
    return validate_environment(env)


@dataclass(frozen=True)
class ConditionCheck:
    """Per-valuation hull test against strategic others' conditionals,
    plus whether it agrees with the two-condition split on the reduction."""

    bidder: str
    holds: bool
    failing: tuple[Fraction, ...]
    theorem_conditions_hold: bool

    @property
    def consistent(self) -> bool:
        return self.holds == self.theorem_conditions_hold


def check_auction_condition(auction: AuctionEnvironment, bidder: str) -> ConditionCheck:
    failing = []
    grid = auction.grids[bidder]
    for t in grid:
        others = [u for u in grid if u != t and u not in auction.behavioral[bidder]]
        if not others:
            continue
        p = tuple(conditional_beliefs(auction, bidder, t))
        Q = [tuple(conditional_beliefs(auction, bidder, u)) for u in others]
        if isinstance(hull_membership(p, Q), Member):
            failing.append(t)
    env = reduce_to_single_bidder(auction, bidder)
    split = check_theorem_conditions(env).passed
    return ConditionCheck(bidder, not failing, tuple(failing), split)


@dataclass(frozen=True)
class TransferRule:
    """``transfers[bidder][(own, opponents)]`` for every grid profile."""

    transfers: Mapping[str, Mapping[tuple[Fraction, Profile], Fraction]]

    def payment(self, auction: AuctionEnvironment, bidder: str, profile: Profile) -> Fraction:
        own, rest = _split(tuple(profile), auction.index(bidder))
        try:
            return self.transfers[bidder][(own, rest)]
        except KeyError:
            raise CoverageError(f"no transfer for bidder {bidder!r} at profile {profile}") from None


@dataclass(frozen=True)
class AuctionSolution:
    results: Mapping[str, SolveResult]
    conditions: Mapping[str, ConditionCheck]
    rule: TransferRule | None

    @property
    def ok(self) -> bool:
        return self.rule is not None


def solve_auction(auction: AuctionEnvironment) -> AuctionSolution:
    """Fully extracting transfers bidder by bidder, or per-bidder failures.

    Profiles dropped from a reduction (zero probability for every own
    valuation) get a transfer of zero.
    """
    validate_auction(auction)
    results = {}
    conditions = {}
    transfers = {}
    for bidder in auction.bidders:
        conditions[bidder] = check_auction_condition(auction, bidder)
        env = reduce_to_single_bidder(auction, bidder)
        result = full_extraction_menu(env)
        results[bidder] = result
        if not result.ok:
            continue
        support = {_label(r): r for r in support_profiles(auction, bidder)}
        table = {}
        for t in auction.grids[bidder]:
            contract = result.menu[str(t)]
            paid = dict(zip(env.states, contract))
            for rest in auction.opponent_profiles(bidder):
                label = _label(rest)
                table[(t, rest)] = paid[label] if label in support else Fraction(0)
        transfers[bidder] = table
    rule = TransferRule(transfers) if all(r.ok for r in results.values()) else None
    return AuctionSolution(results, conditions, rule)


def revenue_audit(auction: AuctionEnvironment, rule: TransferRule) -> tuple[Fraction, Fraction]:
    """Expected revenue and expected efficient surplus over the prior."""
    revenue = Fraction(0)
    surplus = Fraction(0)
    for profile, p in auction.prior.items():
        if p == 0:
            continue
        revenue += p * sum((rule.payment(auction, b, profile) for b in auction.bidders), Fraction(0))
        surplus += p * max(profile)
    return revenue, surplus


def check_auction_ic(auction: AuctionEnvironment, rule: TransferRule) -> list[tuple[str, Fraction, Fraction]]:
    """Misreports that would lower a strategic bidder's expected payment.

    Returns ``(bidder, true valuation, misreport)`` triples; empty means IC.
    """
    bad = []
    for bidder in auction.bidders:
        rest_all = auction.opponent_profiles(bidder)
        table = rule.transfers[bidder]
        for t in auction.grids[bidder]:
            if t in auction.behavioral[bidder]:
                continue
            belief = conditional_beliefs(auction, bidder, t)
            own = expected_transfer(belief, [table[(t, r)] for r in rest_all])
            for lie in auction.grids[bidder]:
                if lie != t and expected_transfer(belief, [table[(lie, r)] for r in rest_all]) < own:
                    bad.append((bidder, t, lie))
    return bad


def expected_rents(auction: AuctionEnvironment, bidder: str) -> Fraction:
    """Prior-weighted informational rent of ``bidder``."""
    return sum(
        (marginal(auction, bidder, t) * t * win_probability(auction, bidder, t) for t in auction.grids[bidder]),
        Fraction(0),
    )


def independent_prior(marginals: Sequence[Mapping]) -> dict[Profile, Fraction]:
    """Product prior from per-bidder marginals, for tests and examples."""
    out = {}
    for combo in itertools.product(*(m.items() for m in marginals)):
        p = Fraction(1)
        for _, q in combo:
            p *= to_rational(q)
        out[tuple(to_rational(v) for v, _ in combo)] = p
    return out
