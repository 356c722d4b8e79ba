import numpy as np
import pytest

from dsbr.core.chain import induce_chain, check_ergodic
from dsbr.core.games import MatrixGame, MarkovGame, JointPolicy
from dsbr.datasets.generator.games import (
    GeneratorSpec, generate_game, random_policy, appendix_d_game, appendix_d_policy)
from dsbr.utils.errors import InvalidArgument


def test_named_games():
    pennies = generate_game(GeneratorSpec(name='matching-pennies'))
    assert np.array_equal(pennies.payoff, [[1.0, -1.0], [-1.0, 1.0]])
    rps = generate_game(GeneratorSpec(name='rock-paper-scissors'))
    assert rps.n_actions == (3, 3)
    assert np.array_equal(rps.payoff, -rps.payoff.T)
    game = generate_game(GeneratorSpec(name='appendix-d', gamma=0.3))
    assert isinstance(game, MarkovGame) and game.n_actions == (2, 1)
    assert game.discount == 0.3


def test_random_games_are_reproducible():
    spec = GeneratorSpec(kind='random-markov', dims=(4, 2, 3), gamma=0.7)
    a, b = generate_game(spec, 5), generate_game(spec, 5)
    assert np.array_equal(a.transition, b.transition) and np.array_equal(a.reward, b.reward)
    assert not np.array_equal(a.reward, generate_game(spec, 6).reward)
    matrix = generate_game(GeneratorSpec(kind='random-matrix', dims=(3, 5)), 1)
    assert isinstance(matrix, MatrixGame) and matrix.n_actions == (3, 5)


def test_random_markov_is_ergodic_under_any_policy(rng):
    spec = GeneratorSpec(kind='random-markov', dims=(5, 2, 2), eps_p=0.05)
    for seed in range(10):
        game = generate_game(spec, seed)
        assert game.transition.min() >= 0.05 / 5 - 1e-12
        joint = JointPolicy(random_policy(5, 2, rng), random_policy(5, 2, rng))
        check_ergodic(induce_chain(game, joint))


def test_appendix_d():
    game = appendix_d_game()
    assert np.array_equal(game.transition[:, 0, 0], np.eye(2))
    assert np.array_equal(game.transition[:, 1, 0], [[0.0, 1.0], [1.0, 0.0]])
    assert np.all(game.reward == 0.0)
    assert appendix_d_policy(0.75).pi1.probs == pytest.approx([[0.75, 0.25]] * 2)
    with pytest.raises(InvalidArgument):
        appendix_d_policy(1.5)


def test_invalid_specs():
    with pytest.raises(InvalidArgument):
        GeneratorSpec(kind='random-bimatrix')
    with pytest.raises(InvalidArgument):
        GeneratorSpec(name='prisoners-dilemma')
    with pytest.raises(InvalidArgument):
        GeneratorSpec(kind='random-markov', dims=(2, 2))
    with pytest.raises(InvalidArgument):
        GeneratorSpec(kind='random-matrix', dims=(0, 2))
    with pytest.raises(InvalidArgument):
        GeneratorSpec(kind='random-markov', dims=(2, 2, 2), eps_p=0.0)
    with pytest.raises(InvalidArgument):
        GeneratorSpec(kind='random-markov', dims=(2, 2, 2), gamma=1.0)
