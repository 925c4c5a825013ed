from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import beliefs, rationals
from fullext.core import (
    Belief,
    Contract,
    ContractDerivation,
    DimensionError,
    Environment,
    Kind,
    Method,
    TypeRecord,
    ValidationError,
    expected_transfer,
    to_rational,
    validate_environment,
)
from fullext.fixtures import e1, e2


def naive_dot(p, c):
    total = F(0)
    for k in range(len(p)):
        total = total + p[k] * c[k]
    return total


@pytest.mark.parametrize(
    "p, c, expected",
    [
        (["3/4", "1/4"], ["1/2", "5/2"], F(1)),
        (["1", "0"], ["7", "-3"], F(7)),
        (["1/2", "1/2"], ["0", "0"], F(0)),
    ],
)
def test_expected_transfer_examples(p, c, expected):
    p, c = Belief(p), Contract(c)
    assert expected_transfer(p, c) == expected
    assert naive_dot(p, c) == expected


def test_expected_transfer_length_mismatch():
    with pytest.raises(DimensionError):
        expected_transfer(Belief(["1"]), Contract(["1", "2"]))


def test_floats_are_refused():
    with pytest.raises(TypeError):
        to_rational(0.5)
    with pytest.raises(TypeError):
        Belief([0.5, 0.5])


@given(st.integers(1, 5).flatmap(lambda k: st.tuples(
    beliefs(k), st.lists(rationals(), min_size=k, max_size=k), st.lists(rationals(), min_size=k, max_size=k),
    rationals(), rationals())))
def test_bilinear(data):
    p, c1, c2, a, b = data
    combo = [a * x + b * y for x, y in zip(c1, c2)]
    assert expected_transfer(p, combo) == a * expected_transfer(p, c1) + b * expected_transfer(p, c2)


@given(st.integers(1, 6).flatmap(lambda k: st.tuples(beliefs(k), rationals())))
def test_flat_contract_costs_its_level(data):
    p, k = data
    assert expected_transfer(p, Contract.flat(k, len(p))) == k


def test_validate_accepts_well_formed():
    env = Environment(
        ["w1", "w2"],
        [
            TypeRecord("s1", Kind.STRATEGIC, "1", ["3/4", "1/4"]),
            TypeRecord("s2", Kind.STRATEGIC, "2", ["1/4", "3/4"]),
            TypeRecord("b", Kind.BEHAVIORAL, "0", ["1/2", "1/2"]),
        ],
    )
    assert validate_environment(env) is env


def test_validate_rejects_duplicate_beliefs():
    env = Environment(
        ["w1", "w2"],
        [TypeRecord("a", Kind.STRATEGIC, 1, ["1/2", "1/2"]), TypeRecord("b", Kind.BEHAVIORAL, 1, ["1/2", "1/2"])],
    )
    with pytest.raises(ValidationError) as info:
        validate_environment(env)
    assert info.value.code == "distinct-beliefs violated"


@pytest.mark.parametrize(
    "types, code",
    [
        ([TypeRecord("a", Kind.STRATEGIC, 1, ["1/2", "2/5"])], "belief-not-normalized"),
        ([TypeRecord("a", Kind.STRATEGIC, -1, ["1/2", "1/2"])], "negative-valuation"),
        (
            [TypeRecord("a", Kind.STRATEGIC, 1, ["1/2", "1/2"]), TypeRecord("a", Kind.STRATEGIC, 1, ["1", "0"])],
            "duplicate-id",
        ),
        ([TypeRecord("a", Kind.STRATEGIC, 1, ["3/2", "-1/2"])], "negative-probability"),
        ([], "empty-types"),
    ],
)
def test_validate_named_errors(types, code):
    with pytest.raises(ValidationError) as info:
        validate_environment(Environment(["w1", "w2"], types))
    assert info.value.code == code


def test_validate_belief_length():
    with pytest.raises(DimensionError):
        validate_environment(Environment(["w1", "w2"], [TypeRecord("a", Kind.STRATEGIC, 1, ["1"])]))


def test_environment_helpers():
    env = e2()
    assert [t.id for t in env.strategic] == ["s1", "s2"]
    assert [t.id for t in env.behavioral] == ["b"]
    assert env.without("b") == e1()
    with pytest.raises(KeyError):
        env.without("zz")


def test_derivation_field_invariants():
    ContractDerivation("s", Method.CM_CONSTRUCTION, separator=(F(0),), alpha=F(0))
    with pytest.raises(ValueError):
        ContractDerivation("s", Method.CM_CONSTRUCTION)
    with pytest.raises(ValueError):
        ContractDerivation("b", Method.FLAT_CONTRACT, separator=(F(0),))
    with pytest.raises(ValueError):
        ContractDerivation("b", Method.PROPOSITION_MIX)
    ContractDerivation("b", Method.PROPOSITION_MIX, lam={"s": F(1)})
