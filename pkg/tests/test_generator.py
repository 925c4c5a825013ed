import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fullext.core import validate_environment
from fullext.generator import (
    GenerationError,
    GeneratorSpec,
    Regime,
    corpus,
    corpus_spec,
    generate,
    random_belief,
    regime_holds,
)
from fullext.geometry import check_theorem_conditions


def test_random_belief_on_grid():
    rng = random.Random(0)
    for _ in range(200):
        k, d = rng.randint(1, 6), rng.randint(1, 30)
        p = random_belief(rng, k, d)
        assert len(p) == k and sum(p) == 1 and all(x >= 0 and (x * d).denominator == 1 for x in p)


def test_midpoint_regime():
    env = generate(GeneratorSpec(1, 3, 2, 1, Regime.VIOLATE_COND_II))
    s1, s2 = (t.belief.probs for t in env.strategic)
    (b,) = env.behavioral
    assert b.belief.probs == tuple((x + y) / 2 for x, y in zip(s1, s2))
    report = check_theorem_conditions(env)
    assert report.cond_ii[0].weights_by_id() == {"s1": F(1, 2), "s2": F(1, 2)}


def test_satisfy_both():
    env = generate(GeneratorSpec(3, 4, 3, 2))
    assert check_theorem_conditions(env).passed


def test_deterministic():
    spec = GeneratorSpec(42, 5, 3, 2, Regime.PROPOSITION_INFEASIBLE)
    assert generate(spec) == generate(spec)
    assert corpus(Regime.SATISFY_BOTH, 5, start=9) == corpus(Regime.SATISFY_BOTH, 5, start=9)


@pytest.mark.parametrize(
    "args",
    [
        (1, 2, 3, 0, Regime.SATISFY_BOTH),
        (1, 1, 1, 1, Regime.SATISFY_BOTH),
        (1, 3, 2, 0, Regime.VIOLATE_COND_I),
        (1, 3, 2, 0, Regime.VIOLATE_COND_II),
        (1, 3, 0, 0, Regime.SATISFY_BOTH),
        (-1, 3, 2, 0, Regime.SATISFY_BOTH),
    ],
)
def test_impossible_requests(args):
    with pytest.raises(GenerationError):
        generate(GeneratorSpec(*args))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 100_000), st.sampled_from(list(Regime)))
def test_regime_fidelity(seed, regime):
    spec = corpus_spec(seed, regime)
    env = generate(spec)
    validate_environment(env)
    assert regime_holds(env, regime)
    assert (len(env.strategic), len(env.behavioral), env.num_states) == (
        spec.num_strategic,
        spec.num_behavioral,
        spec.num_states,
    )
