"""Exact-arithmetic domain model: beliefs, types, environments and contracts.

Every quantity is a :class:`fractions.Fraction`. Floats are refused at the
boundary so that no decision ever depends on rounding.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Iterator, Mapping, Sequence

Rational = Fraction


class FullExtError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(FullExtError, ValueError):
    pass


class ValidationError(FullExtError, ValueError):
    """An input breaks a standing assumption of the model.

    ``code`` is a stable machine-readable tag, e.g. ``"distinct-beliefs violated"``.
    """

    def __init__(self, code: str, detail: str = ""):
        self.code = code
        self.detail = detail
        super().__init__(f"{code}: {detail}" if detail else code)


class CoverageError(FullExtError, ValueError):
    """A menu or transfer rule is missing an entry it is required to have."""


class UsageError(FullExtError, ValueError):
    pass


def to_rational(x) -> Fraction:
    """Coerce ``x`` to a Fraction without ever passing through a float."""
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"refusing inexact value {x!r} of type {type(x).__name__}")


class Kind(enum.Enum):
    STRATEGIC = "strategic"
    BEHAVIORAL = "behavioral"


class _Vector:
    """Shared tuple-like behaviour for beliefs and contracts."""

    __slots__ = ()
    values: tuple[Fraction, ...]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]


@dataclass(frozen=True)
class Belief(_Vector):
    """Probability vector over the states, in state order.

    Construction only coerces entries to exact rationals; normalization is
    checked by :func:`validate_environment` (or :meth:`is_normalized`).
    """

    probs: tuple[Fraction, ...]

    def __init__(self, probs: Iterable):
        object.__setattr__(self, "probs", tuple(to_rational(p) for p in probs))

    @property
    def values(self) -> tuple[Fraction, ...]:
        return self.probs

    def is_normalized(self) -> bool:
        return all(p >= 0 for p in self.probs) and sum(self.probs, Fraction(0)) == 1


@dataclass(frozen=True)
class Contract(_Vector):
    """State-contingent transfers paid by the agent; entries may be negative."""

    transfers: tuple[Fraction, ...]

    def __init__(self, transfers: Iterable):
        object.__setattr__(self, "transfers", tuple(to_rational(t) for t in transfers))

    @property
    def values(self) -> tuple[Fraction, ...]:
        return self.transfers

    @classmethod
    def flat(cls, level, num_states: int) -> "Contract":
        level = to_rational(level)
        return cls([level] * num_states)

    def __add__(self, other: "Contract") -> "Contract":
        if len(self) != len(other):
            raise DimensionError("contract lengths differ")
        return Contract(a + b for a, b in zip(self, other))

    def scaled(self, k) -> "Contract":
        k = to_rational(k)
        return Contract(k * t for t in self.transfers)


@dataclass(frozen=True)
class TypeRecord:
    id: str
    kind: Kind
    valuation: Fraction
    belief: Belief

    def __post_init__(self):
        object.__setattr__(self, "valuation", to_rational(self.valuation))
        if not isinstance(self.belief, Belief):
            object.__setattr__(self, "belief", Belief(self.belief))
        if not isinstance(self.kind, Kind):
            object.__setattr__(self, "kind", Kind(self.kind))

    @property
    def is_strategic(self) -> bool:
        return self.kind is Kind.STRATEGIC


@dataclass(frozen=True)
class Environment:
    """Single-agent reduced form: states plus typed agents."""

    states: tuple[str, ...]
    types: tuple[TypeRecord, ...]

    def __init__(self, states: Sequence[str], types: Sequence[TypeRecord]):
        object.__setattr__(self, "states", tuple(states))
        object.__setattr__(self, "types", tuple(types))

    @property
    def num_states(self) -> int:
        return len(self.states)

    @property
    def strategic(self) -> tuple[TypeRecord, ...]:
        return tuple(t for t in self.types if t.kind is Kind.STRATEGIC)

    @property
    def behavioral(self) -> tuple[TypeRecord, ...]:
        return tuple(t for t in self.types if t.kind is Kind.BEHAVIORAL)

    def type(self, type_id: str) -> TypeRecord:
        for t in self.types:
            if t.id == type_id:
                return t
        raise KeyError(type_id)

    def without(self, type_id: str) -> "Environment":
        self.type(type_id)
        return Environment(self.states, [t for t in self.types if t.id != type_id])

    def restricted(self, kind: Kind) -> "Environment":
        return Environment(self.states, [t for t in self.types if t.kind is kind])


@dataclass(frozen=True)
class ContractMenu:
    """One contract per type id; iteration order follows insertion order."""

    contracts: Mapping[str, Contract] = field(default_factory=dict)

    def __post_init__(self):
        coerced = {k: c if isinstance(c, Contract) else Contract(c) for k, c in dict(self.contracts).items()}
        object.__setattr__(self, "contracts", coerced)

    def __getitem__(self, type_id: str) -> Contract:
        return self.contracts[type_id]

    def __contains__(self, type_id: str) -> bool:
        return type_id in self.contracts

    def __iter__(self):
        return iter(self.contracts)

    def __len__(self):
        return len(self.contracts)

    def items(self):
        return self.contracts.items()

    def with_contract(self, type_id: str, contract: Contract) -> "ContractMenu":
        merged = dict(self.contracts)
        merged[type_id] = contract
        return ContractMenu(merged)

    def ordered(self, env: Environment) -> "ContractMenu":
        """Reorder to the environment's type order (entries not in env dropped)."""
        return ContractMenu({t.id: self.contracts[t.id] for t in env.types if t.id in self.contracts})


class Method(enum.Enum):
    CM_CONSTRUCTION = "cm_construction"
    BEHAVIORAL_FARKAS = "behavioral_farkas"
    FLAT_CONTRACT = "flat_contract"
    PROPOSITION_MIX = "proposition_mix"
    DIRECT_LP = "direct_lp"


_SEPARATOR_METHODS = {Method.CM_CONSTRUCTION, Method.BEHAVIORAL_FARKAS}


@dataclass(frozen=True)
class ContractDerivation:
    """How a single contract was built.

    ``separator`` and ``alpha`` record the payment direction and its scale,
    ``lam`` the hull weights over strategic ids for in-hull behavioral types.
    ``audit`` carries free-form exact values kept for cross-checking.
    """

    type_id: str
    method: Method
    separator: tuple[Fraction, ...] | None = None
    alpha: Fraction | None = None
    lam: Mapping[str, Fraction] | None = None
    audit: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if (self.separator is not None) != (self.method in _SEPARATOR_METHODS):
            raise ValueError(f"separator must be present exactly for {sorted(m.value for m in _SEPARATOR_METHODS)}")
        if (self.lam is not None) != (self.method is Method.PROPOSITION_MIX):
            raise ValueError("lambda must be present exactly for proposition_mix")


def expected_transfer(p: Sequence, c: Sequence) -> Fraction:
    """Expected value of contract ``c`` under belief ``p``."""
    if len(p) != len(c):
        raise DimensionError(f"belief has {len(p)} entries, contract has {len(c)}")
    return sum((a * b for a, b in zip(p, c)), Fraction(0))


def validate_environment(env: Environment) -> Environment:
    if len(env.states) < 1:
        raise ValidationError("empty-states", "at least one state is required")
    if len(set(env.states)) != len(env.states):
        raise ValidationError("duplicate-state", "state labels must be distinct")
    if len(env.types) < 1:
        raise ValidationError("empty-types", "at least one type is required")
    seen_ids: set[str] = set()
    seen_beliefs: dict[tuple, str] = {}
    for t in env.types:
        if t.id in seen_ids:
            raise ValidationError("duplicate-id", f"type id {t.id!r} appears twice")
        seen_ids.add(t.id)
        if t.valuation < 0:
            raise ValidationError("negative-valuation", f"type {t.id!r} has valuation {t.valuation}")
        if len(t.belief) != env.num_states:
            raise DimensionError(f"type {t.id!r} belief has {len(t.belief)} entries, expected {env.num_states}")
        if any(p < 0 for p in t.belief):
            raise ValidationError("negative-probability", f"type {t.id!r}")
        total = sum(t.belief, Fraction(0))
        if total != 1:
            raise ValidationError("belief-not-normalized", f"type {t.id!r} belief sums to {total}")
        key = t.belief.probs
        if key in seen_beliefs:
            raise ValidationError(
                "distinct-beliefs violated", f"types {seen_beliefs[key]!r} and {t.id!r} share a belief"
            )
        seen_beliefs[key] = t.id
    return env
