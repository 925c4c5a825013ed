import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import beliefs
from fullext.core import DimensionError, UsageError, ValidationError, expected_transfer
from fullext.fixtures import PANELS, e1_with_behavioral
from fullext.generator import random_belief
from fullext.geometry import (
    Member,
    Separated,
    check_cm,
    check_theorem_conditions,
    hull_membership,
    max_weighted_value,
    separator_problem,
    verify_hull_result,
)
from fullext.lp import Feasible, solve


def grid_weights(k, denominator):
    for cut in itertools.combinations(range(denominator + k - 1), k - 1):
        prev, parts = -1, []
        for c in cut:
            parts.append(c - prev - 1)
            prev = c
        parts.append(denominator + k - 2 - prev)
        yield tuple(F(x, denominator) for x in parts)


def grid_oracle(p, Q, denominator):
    """Exact weights on the 1/denominator grid reconstructing p, if any."""
    for lam in grid_weights(len(Q), denominator):
        if all(sum(l * q[w] for l, q in zip(lam, Q)) == p[w] for w in range(len(p))):
            return lam
    return None


def B(*xs):
    return tuple(F(x) for x in xs)


def test_midpoint_is_member():
    p, Q = B("1/2", "1/2"), [B("3/4", "1/4"), B("1/4", "3/4")]
    result = hull_membership(p, Q)
    assert result == Member((F(1, 2), F(1, 2)))
    assert grid_oracle(p, Q, 100) == (F(1, 2), F(1, 2))


def test_exterior_point_separated():
    p, Q = B("9/10", "1/10"), [B("3/4", "1/4"), B("1/4", "3/4")]
    result = hull_membership(p, Q)
    assert isinstance(result, Separated)
    assert verify_hull_result(p, Q, result)
    # only one direction up to scale exists in two states
    assert result.z == (F(-2, 3), F(6))
    assert min(expected_transfer(q, result.z) for q in Q) == 1
    assert grid_oracle(p, Q, 100) is None


def test_single_reference_identity():
    assert hull_membership(B(1, 0, 0), [B(1, 0, 0)]) == Member((F(1),))


def test_usage_and_dimension_errors():
    with pytest.raises(UsageError):
        hull_membership(B(1, 0), [])
    with pytest.raises(DimensionError):
        hull_membership(B(1, 0), [B(1, 0, 0)])


def test_separator_agrees_with_direct_system():
    p, Q = B("9/10", "1/10"), [B("3/4", "1/4"), B("1/4", "3/4")]
    direct = solve(separator_problem(p, Q))
    assert isinstance(direct, Feasible)
    assert verify_hull_result(p, Q, Separated(direct.point))


def test_cm_two_points():
    assert all(e.passed for e in check_cm([B("3/4", "1/4"), B("1/4", "3/4")]))


def test_cm_fails_at_midpoint():
    entries = check_cm([B(1, 0, 0), B(0, 1, 0), B("1/2", "1/2", 0)])
    assert [e.passed for e in entries] == [True, True, False]
    assert entries[2].result == Member((F(1, 2), F(1, 2)))


def test_cm_rejects_duplicates():
    with pytest.raises(ValidationError):
        check_cm([B(1, 0), B(1, 0)])


def test_cm_general_position_against_grid_search():
    rng = random.Random(3)
    for _ in range(20):
        P = [random_belief(rng, 4, 30) for _ in range(4)]
        if len(set(P)) < 4:
            continue
        entries = check_cm(P)
        for e in entries:
            rest = [q for k, q in enumerate(P) if k != e.index]
            assert verify_hull_result(P[e.index], rest, e.result)
            if e.passed:
                assert grid_oracle(P[e.index], rest, 30) is None


def test_panel_regimes():
    expected = {"a": (True, True), "b": (True, True), "c": (False, True), "d": (True, False)}
    for name, build in PANELS.items():
        report = check_theorem_conditions(build())
        assert (report.cond_i_passed, report.cond_ii_passed) == expected[name], name
        for entry in report.cond_i + report.cond_ii:
            env = build()
            p = env.type(entry.type_id).belief.probs
            Q = [env.type(i).belief.probs for i in entry.reference_ids]
            assert verify_hull_result(p, Q, entry.result)


def test_panel_d_witness():
    report = check_theorem_conditions(PANELS["d"]())
    assert report.cond_ii[0].weights_by_id() == {"s1": F(1, 3), "s2": F(1, 3), "s3": F(1, 3)}


def test_e1_midpoint_behavioral():
    report = check_theorem_conditions(e1_with_behavioral(5))
    assert report.cond_i_passed and not report.cond_ii_passed
    assert report.cond_ii[0].weights_by_id() == {"s1": F(1, 2), "s2": F(1, 2)}


def test_vacuous_report():
    from fullext.core import Environment, Kind, TypeRecord

    env = Environment(["w"], [TypeRecord("b", Kind.BEHAVIORAL, 1, ["1"])])
    report = check_theorem_conditions(env)
    assert report.passed and report.vacuous and report.cond_ii[0].result.vacuous


def test_max_weighted_value_non_unique():
    # p is the centre of a square: two diagonals give different averages.
    Q = [B("1/2", "1/2", 0, 0), B(0, "1/2", "1/2", 0), B(0, 0, "1/2", "1/2"), B("1/2", 0, 0, "1/2")]
    p = B("1/4", "1/4", "1/4", "1/4")
    value, lam = max_weighted_value(p, Q, [F(4), F(0), F(4), F(2)])
    assert value == 4 and verify_hull_result(p, Q, Member(lam))
    assert max_weighted_value(B(1, 0, 0, 0), Q, [1, 1, 1, 1]) is None


def test_exclusivity_against_grid_oracle():
    rng = random.Random(7)
    found = 0
    for trial in range(1000):
        k = rng.randint(2, 4)
        Q = [random_belief(rng, k, 6) for _ in range(rng.randint(1, 3))]
        if trial % 2:
            lam = random_belief(rng, len(Q), 6)
            p = tuple(sum(l * q[w] for l, q in zip(lam, Q)) for w in range(k))
        else:
            p = random_belief(rng, k, 6)
        result = hull_membership(p, Q)
        assert verify_hull_result(p, Q, result)
        witness = grid_oracle(p, Q, 6)
        if witness is not None:
            found += 1
            assert isinstance(result, Member)
    assert found > 400


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 4).flatmap(lambda k: st.tuples(
    beliefs(k), st.lists(beliefs(k), min_size=1, max_size=3), st.lists(beliefs(k), max_size=2))))
def test_monotone_in_reference_set(data):
    p, Q, extra = data
    result = hull_membership(p, Q)
    assert verify_hull_result(p, Q, result)
    if isinstance(result, Member):
        assert isinstance(hull_membership(p, Q + extra), Member)
