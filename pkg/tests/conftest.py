from types import SimpleNamespace
import numpy as np
import pytest

from dsbr.core.games import MatrixGame, MarkovGame
from dsbr.utils.logger import DsbrLogger
from dsbr.datasets.generator.games import (
    GeneratorSpec, generate_game, MATCHING_PENNIES, ROCK_PAPER_SCISSORS)


@pytest.fixture
def pennies():
    return MatrixGame(MATCHING_PENNIES)


@pytest.fixture
def rps():
    return MatrixGame(ROCK_PAPER_SCISSORS)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(autouse=True, scope='session')
def logger():
    """ 在任何capsys之前创建日志单例 控制台handler绑定会话级的stderr """
    return DsbrLogger.logger()


def random_markov(seed, n_states=3, n_actions=(2, 2), gamma=0.6, eps_p=0.2) -> MarkovGame:
    spec = GeneratorSpec(kind='random-markov', dims=(n_states, *n_actions), gamma=gamma, eps_p=eps_p)
    return generate_game(spec, seed)


def random_simplex(rng, *shape):
    x = rng.random(shape) + 1e-3
    return x / x.sum(axis=-1, keepdims=True)


def snapshot(q, policy, v):
    """ 与 LearnerState 同字段的只读快照 """
    return SimpleNamespace(q=np.asarray(q), policy=np.asarray(policy), v=np.asarray(v))


def dominant_markov(gamma=0.6) -> MarkovGame:
    """
    3状态 2x2 转移与动作无关 收益可分离 R(s,a1,a2) = u_s(a1) - w_s(a2)
    每个状态两名玩家都有严格占优动作
    """
    u = np.array([[0.5, 0.0], [0.0, 0.4], [0.3, -0.2]])
    w = np.array([[0.4, -0.1], [-0.2, 0.3], [0.2, -0.3]])
    reward = u[:, :, None] - w[:, None, :]
    chain = np.array([[0.2, 0.5, 0.3], [0.4, 0.2, 0.4], [0.3, 0.3, 0.4]])
    transition = np.broadcast_to(chain[:, None, None, :], (3, 2, 2, 3))
    return MarkovGame(transition, reward, gamma)
