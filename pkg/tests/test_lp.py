import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import rationals
from fullext.core import DimensionError
from fullext.lp import (
    Feasible,
    Infeasible,
    LinearConstraint,
    LpProblem,
    Relation,
    Sense,
    Unbounded,
    check_certificate,
    dual_problem,
    solve,
)


def con(coeffs, rel, rhs):
    return LinearConstraint(coeffs, rel, rhs)


def test_maximize_single_bound():
    p = LpProblem(1, [con([1], "<=", 3)], [1], Sense.MAX)
    out = solve(p)
    assert isinstance(out, Feasible)
    assert out.point == (F(3),) and out.value == 3
    assert check_certificate(p, out)


def test_contradictory_bounds_farkas():
    p = LpProblem(1, [con([1], ">=", 1), con([1], "<=", 0)])
    out = solve(p)
    assert isinstance(out, Infeasible)
    assert out.farkas == (F(1), F(1))
    assert check_certificate(p, out)


def test_separator_system():
    p = LpProblem(2, [con(["9/10", "1/10"], "==", 0), con(["3/4", "1/4"], ">=", 1), con(["1/4", "3/4"], ">=", 1)])
    out = solve(p)
    assert isinstance(out, Feasible)
    z = out.point
    assert F(9, 10) * z[0] + F(1, 10) * z[1] == 0
    assert F(3, 4) * z[0] + F(1, 4) * z[1] >= 1
    assert F(1, 4) * z[0] + F(3, 4) * z[1] >= 1
    # (-1, 9) is one valid point of the same system
    assert F(9, 10) * -1 + F(1, 10) * 9 == 0 and F(3, 4) * -1 + F(1, 4) * 9 >= 1


def test_tampered_point_rejected():
    p = LpProblem(2, [con([1, 1], "==", 2), con([1, -1], "<=", 0)], [1, 2], Sense.MIN)
    out = solve(p)
    assert check_certificate(p, out)
    bumped = Feasible((out.point[0] + 1, out.point[1]), out.value, out.dual)
    assert not check_certificate(p, bumped)


def test_negated_farkas_entry_rejected():
    p = LpProblem(1, [con([1], ">=", 1), con([1], "<=", 0)])
    out = solve(p)
    assert not check_certificate(p, Infeasible((F(-1), F(1))))
    assert not check_certificate(p, Infeasible((out.farkas[0], -out.farkas[1])))


def test_wrong_dual_rejected():
    p = LpProblem(1, [con([1], "<=", 3)], [1], Sense.MAX)
    out = solve(p)
    assert not check_certificate(p, Feasible(out.point, out.value, (F(2),)))


def test_unbounded_ray():
    p = LpProblem(2, [con([1, -1], "<=", 1)], [1, 0], Sense.MAX, lower=[0, 0])
    out = solve(p)
    assert isinstance(out, Unbounded)
    assert check_certificate(p, out)
    assert not check_certificate(p, Unbounded(out.point, tuple(-r for r in out.ray)))


def test_no_rows():
    assert solve(LpProblem(2)) == Feasible((F(0), F(0)))
    out = solve(LpProblem(1, objective=[1], sense=Sense.MIN))
    assert isinstance(out, Unbounded) and out.ray == (F(-1),)


def test_bounds_and_free_variables():
    p = LpProblem(3, [con([1, 1, 1], "==", 0)], [1, 1, -1], Sense.MIN, lower=[-2, None, 1], upper=[5, 3, 4])
    out = solve(p)
    assert isinstance(out, Feasible)
    # x0 + x1 = -x2 turns the objective into -2 * x2, and x2 = 4 is reachable.
    assert out.value == -8
    assert check_certificate(p, out)


def test_dimension_errors():
    with pytest.raises(DimensionError):
        LpProblem(2, [con([1], "<=", 1)])
    with pytest.raises(DimensionError):
        LpProblem(1, objective=[1, 2], sense=Sense.MAX)


def test_beale_cycling_instance():
    # Classic instance on which the largest-coefficient rule cycles.
    p = LpProblem(
        4,
        [
            con(["1/4", -8, -1, 9], "<=", 0),
            con(["1/2", -12, "-1/2", 3], "<=", 0),
            con([0, 0, 1, 0], "<=", 1),
        ],
        ["3/4", -20, "1/2", -6],
        Sense.MAX,
        lower=[0, 0, 0, 0],
    )
    out = solve(p)
    assert isinstance(out, Feasible) and out.value == F(5, 4)
    assert check_certificate(p, out)


def test_klee_minty():
    p = LpProblem(
        3,
        [con([1, 0, 0], "<=", 1), con([20, 1, 0], "<=", 100), con([200, 20, 1], "<=", 10000)],
        [100, 10, 1],
        Sense.MAX,
        lower=[0, 0, 0],
    )
    out = solve(p)
    assert out.value == 10000 and out.point == (0, 0, 10000)


def test_degenerate_redundant_equalities():
    # Duplicate equality rows leave an artificial basic at zero.
    p = LpProblem(2, [con([1, 1], "==", 1), con([2, 2], "==", 2), con([1, -1], ">=", 0)], [0, 1], Sense.MAX)
    out = solve(p)
    assert out.value == F(1, 2)
    assert check_certificate(p, out)


def test_deterministic():
    p = LpProblem(3, [con([1, 1, 1], "==", 1)], [1, 1, 1], Sense.MAX, lower=[0, 0, 0])
    assert solve(p) == solve(p)


@st.composite
def small_lps(draw):
    n = draw(st.integers(1, 4))
    m = draw(st.integers(0, 5))
    cons = [
        LinearConstraint(
            draw(st.lists(rationals(5, 3), min_size=n, max_size=n)),
            draw(st.sampled_from(list(Relation))),
            draw(rationals(6, 2)),
        )
        for _ in range(m)
    ]
    bound = st.one_of(st.none(), rationals(4, 1))
    lower = draw(st.lists(bound, min_size=n, max_size=n))
    upper = [None if (u is None or (lo is not None and u < lo)) else u
             for u, lo in zip(draw(st.lists(bound, min_size=n, max_size=n)), lower)]
    objective = draw(st.one_of(st.none(), st.lists(rationals(4, 2), min_size=n, max_size=n)))
    return LpProblem(n, cons, objective, draw(st.sampled_from(list(Sense))), lower, upper)


@settings(max_examples=300, deadline=None)
@given(small_lps())
def test_soundness_property(problem):
    out = solve(problem)
    assert check_certificate(problem, out)
    assert solve(problem) == out


@settings(max_examples=200, deadline=None)
@given(small_lps())
def test_strong_duality(problem):
    if problem.objective is None:
        return
    out = solve(problem)
    dual = solve(dual_problem(problem))
    assert check_certificate(dual_problem(problem), dual)
    if isinstance(out, Feasible):
        assert isinstance(dual, Feasible) and dual.value == out.value
    elif isinstance(out, Unbounded):
        assert isinstance(dual, Infeasible)
    else:
        assert not isinstance(dual, Feasible)


def test_status_matches_floating_solver():
    scipy_optimize = pytest.importorskip("scipy.optimize")
    rng = random.Random(11)
    codes = {0: "feasible", 2: "infeasible", 3: "unbounded"}
    for _ in range(400):
        n, m = rng.randint(1, 4), rng.randint(1, 5)
        cons = [
            con([F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n)], rng.choice(["<=", ">=", "=="]),
                rng.randint(-5, 5))
            for _ in range(m)
        ]
        lower = [rng.choice([None, 0, rng.randint(-3, 3)]) for _ in range(n)]
        obj = [rng.randint(-3, 3) for _ in range(n)]
        p = LpProblem(n, cons, obj, Sense.MIN, lower)
        ub = [c.le_form() for c in cons if c.relation is not Relation.EQ]
        eq = [c for c in cons if c.relation is Relation.EQ]
        res = scipy_optimize.linprog(
            obj,
            [[float(a) for a in row] for row, _ in ub] or None,
            [float(b) for _, b in ub] or None,
            [[float(a) for a in c.coeffs] for c in eq] or None,
            [float(c.rhs) for c in eq] or None,
            bounds=[(None if lo is None else float(lo), None) for lo in lower],
            method="highs",
            # presolve can report unbounded instances as infeasible
            options={"presolve": False},
        )
        out = solve(p)
        assert out.status == codes[res.status]
        if isinstance(out, Feasible):
            assert abs(float(out.value) - res.fun) < 1e-7
