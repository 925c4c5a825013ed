"""Seeded random environments with a guaranteed geometric regime.

Beliefs are drawn uniformly from the grid of compositions of a denominator
``d <= denominator_bound``. Regime labels are never trusted: every
environment is re-checked before it is returned.
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .auction import AuctionEnvironment, check_auction_condition, validate_auction
from .core import Environment, FullExtError, Kind, TypeRecord
from .extraction import FailureReason, proposition_menu
from .geometry import Member, check_cm, check_theorem_conditions, hull_membership, max_weighted_value

MAX_ATTEMPTS = 2000


class GenerationError(FullExtError, ValueError):
    pass


class _Retry(Exception):
    pass


class Regime(enum.Enum):
    SATISFY_BOTH = "satisfy-both"
    VIOLATE_COND_I = "violate-cond-i"
    VIOLATE_COND_II = "violate-cond-ii"
    PROPOSITION_FEASIBLE = "proposition-feasible"
    PROPOSITION_INFEASIBLE = "proposition-infeasible"


@dataclass(frozen=True)
class GeneratorSpec:
    seed: int
    num_states: int
    num_strategic: int
    num_behavioral: int
    regime: Regime = Regime.SATISFY_BOTH
    denominator_bound: int = 50

    def __post_init__(self):
        object.__setattr__(self, "regime", Regime(self.regime))
        if self.seed < 0 or self.num_states < 1 or self.denominator_bound < 1:
            raise GenerationError("seed must be >= 0, states and denominator bound >= 1")
        if self.num_strategic < 0 or self.num_behavioral < 0 or self.num_strategic + self.num_behavioral < 1:
            raise GenerationError("need at least one type")
        r = self.regime
        if r is Regime.VIOLATE_COND_I and self.num_strategic < 3:
            raise GenerationError("violating convex independence needs at least 3 strategic types")
        if r in (Regime.VIOLATE_COND_II, Regime.PROPOSITION_FEASIBLE, Regime.PROPOSITION_INFEASIBLE):
            if self.num_behavioral < 1 or self.num_strategic < 2:
                raise GenerationError(f"{r.value} needs >= 2 strategic and >= 1 behavioral types")


def random_belief(rng: random.Random, k: int, d: int) -> tuple[Fraction, ...]:
    """Uniform composition of ``d`` into ``k`` nonnegative parts, over ``d``."""
    bars = sorted(rng.sample(range(d + k - 1), k - 1))
    parts = []
    prev = -1
    for b in bars:
        parts.append(b - prev - 1)
        prev = b
    parts.append(d + k - 2 - prev)
    return tuple(Fraction(x, d) for x in parts)


def random_valuation(rng: random.Random, bound: int) -> Fraction:
    d = rng.randint(1, bound)
    return Fraction(rng.randint(0, 4 * d), d)


class _Sampler:
    def __init__(self, spec: GeneratorSpec):
        self.spec = spec
        self.rng = random.Random(spec.seed)

    def belief(self):
        d = self.rng.randint(max(1, self.spec.denominator_bound // 2), self.spec.denominator_bound)
        return random_belief(self.rng, self.spec.num_states, d)

    def independent_set(self, count: int):
        for _ in range(MAX_ATTEMPTS):
            beliefs = [self.belief() for _ in range(count)]
            if len(set(beliefs)) != count:
                continue
            if all(e.passed for e in check_cm(beliefs)):
                return beliefs
        raise GenerationError(f"no convex-independent set of {count} beliefs in {self.spec.num_states} states")

    def outside(self, hull, taken):
        for _ in range(MAX_ATTEMPTS):
            p = self.belief()
            if p in taken:
                continue
            if not hull or not isinstance(hull_membership(p, hull), Member):
                return p
        raise GenerationError("could not place a belief outside the strategic hull")

    def centroid(self, beliefs):
        size = self.rng.randint(2, len(beliefs))
        chosen = self.rng.sample(beliefs, size)
        k = len(chosen)
        return tuple(sum((q[w] for q in chosen), Fraction(0)) / k for w in range(self.spec.num_states))

    def valuations(self, count):
        return [random_valuation(self.rng, self.spec.denominator_bound) for _ in range(count)]


def _build(spec, strategic, behavioral, values):
    types = [TypeRecord(f"s{k + 1}", Kind.STRATEGIC, values[k], p) for k, p in enumerate(strategic)]
    off = len(strategic)
    types += [TypeRecord(f"b{k + 1}", Kind.BEHAVIORAL, values[off + k], p) for k, p in enumerate(behavioral)]
    return Environment([f"w{k + 1}" for k in range(spec.num_states)], types)


def _draw(spec: GeneratorSpec, sm: _Sampler) -> Environment:
    ns, nb = spec.num_strategic, spec.num_behavioral
    regime = spec.regime
    if regime is Regime.VIOLATE_COND_I:
        strategic = sm.independent_set(ns - 1)
        strategic.append(sm.centroid(strategic))
        behavioral = []
        for _ in range(nb):
            behavioral.append(sm.outside([], set(strategic) | set(behavioral)))
        return _build(spec, strategic, behavioral, sm.valuations(ns + nb))

    strategic = sm.independent_set(ns) if ns else []
    behavioral = []
    if regime is not Regime.SATISFY_BOTH:
        behavioral.append(sm.centroid(strategic))
    while len(behavioral) < nb:
        behavioral.append(sm.outside(strategic, set(strategic) | set(behavioral)))
    values = sm.valuations(ns + nb)
    if regime in (Regime.PROPOSITION_FEASIBLE, Regime.PROPOSITION_INFEASIBLE):
        threshold, _ = max_weighted_value(behavioral[0], strategic, values[:ns])
        if regime is Regime.PROPOSITION_FEASIBLE:
            bump = sm.rng.choice([Fraction(0), random_valuation(sm.rng, spec.denominator_bound)])
            values[ns] = threshold + bump
        else:
            if threshold == 0:
                raise _Retry("threshold is zero; no valuation falls below it")
            d = sm.rng.randint(1, spec.denominator_bound)
            values[ns] = threshold * Fraction(sm.rng.randint(0, d - 1), d)
    return _build(spec, strategic, behavioral, values)


def regime_holds(env: Environment, regime: Regime) -> bool:
    report = check_theorem_conditions(env)
    if regime is Regime.SATISFY_BOTH:
        return report.passed
    if regime is Regime.VIOLATE_COND_I:
        return not report.cond_i_passed
    if not report.cond_i_passed or report.cond_ii_passed:
        return False
    if regime is Regime.VIOLATE_COND_II:
        return True
    result = proposition_menu(env)
    if regime is Regime.PROPOSITION_FEASIBLE:
        return result.ok
    return result.failure is not None and result.failure.reason is FailureReason.PROPOSITION_VALUE_FAILS


def generate(spec: GeneratorSpec) -> Environment:
    """Deterministic environment for ``spec``, post-checked against its regime."""
    if spec.num_states == 1 and spec.num_strategic + spec.num_behavioral > 1:
        raise GenerationError("one state admits only one distinct belief")
    independent = spec.num_strategic - (spec.regime is Regime.VIOLATE_COND_I)
    if spec.num_states == 2 and independent > 2:
        raise GenerationError("two states admit at most two convex-independent beliefs")
    sm = _Sampler(spec)
    last = None
    for _ in range(50):
        try:
            env = _draw(spec, sm)
        except _Retry as exc:
            last = exc
            continue
        if regime_holds(env, spec.regime):
            return env
    raise GenerationError(f"could not realise regime {spec.regime.value}: {last or 'post-check failed'}")


def corpus_spec(seed: int, regime: Regime, max_states: int = 6, max_types: int = 6, bound: int = 50) -> GeneratorSpec:
    """Seed-determined sizes that are always realisable for ``regime``."""
    rng = random.Random(f"sizes-{seed}")
    regime = Regime(regime)
    min_strategic = {Regime.SATISFY_BOTH: 1, Regime.VIOLATE_COND_I: 3}.get(regime, 2)
    min_behavioral = 0 if regime in (Regime.SATISFY_BOTH, Regime.VIOLATE_COND_I) else 1
    low_states = 3 if min_strategic > 2 else 2
    k = rng.randint(low_states, max_states)
    cap = 2 if k == 2 else max_types - min_behavioral
    ns = rng.randint(min_strategic, max(min_strategic, min(cap, max_types - min_behavioral)))
    nb = rng.randint(min_behavioral, max_types - ns)
    return GeneratorSpec(seed, k, ns, nb, regime, bound)


def corpus(regime: Regime, count: int, start: int = 0, **sizes) -> list[Environment]:
    """``count`` environments of one regime from consecutive seeds."""
    out = []
    seed = start
    while len(out) < count:
        try:
            out.append(generate(corpus_spec(seed, regime, **sizes)))
        except GenerationError:
            pass
        seed += 1
    return out


def random_auction(seed: int, max_bidders: int = 3, max_grid: int = 4, bound: int = 20, require_condition=True):
    """Random correlated prior with full support on small valuation grids.

    With ``require_condition`` the draw is repeated until every bidder's
    conditionals meet the hull condition, so full extraction is possible.
    """
    rng = random.Random(f"auction-{seed}")
    for _ in range(200):
        n = rng.randint(2, max_bidders)
        bidders = [str(k + 1) for k in range(n)]
        size = rng.randint(2, max_grid)
        grids = {}
        for b in bidders:
            m = size if n == 2 else rng.randint(2, max_grid)
            grids[b] = sorted(rng.sample(range(1, 3 * max_grid + 1), m))
            grids[b] = [Fraction(v, rng.randint(1, 2)) for v in grids[b]]
            grids[b] = sorted(set(grids[b]))
        profiles = list(itertools.product(*(grids[b] for b in bidders)))
        weights = [rng.randint(1, bound) for _ in profiles]
        total = sum(weights)
        prior = {prof: Fraction(w, total) for prof, w in zip(profiles, weights)}
        behavioral = {b: [v for v in grids[b] if rng.random() < 0.3] for b in bidders}
        priority = bidders[:]
        rng.shuffle(priority)
        auction = AuctionEnvironment(bidders, grids, prior, behavioral, priority)
        try:
            validate_auction(auction)
        except FullExtError:
            continue
        if not require_condition or all(check_auction_condition(auction, b).holds for b in bidders):
            return auction
    raise GenerationError("no auction met the hull condition")
