from dataclasses import dataclass
from enum import Enum, unique
from typing import Optional, Tuple
import numpy as np

from dsbr.core.games import Game, MatrixGame, MarkovGame, Policy, JointPolicy
from dsbr.utils.errors import InvalidArgument


@unique
class GeneratorKind(Enum):
    RandomMatrix = 'random-matrix'
    RandomMarkov = 'random-markov'
    Named = 'named'


@unique
class NamedGame(Enum):
    MatchingPennies = 'matching-pennies'
    RockPaperScissors = 'rock-paper-scissors'
    AppendixD = 'appendix-d'  # 两状态混合时间例子


@dataclass(frozen=True)
class GeneratorSpec(object):
    """
    dims: random-matrix 为 (m, n); random-markov 为 (S, m, n)
    eps_p: 每行转移分布与均匀分布按 eps_p 混合 保证任意策略下链不可约且非周期
    alpha: appendix-d 的动作概率 只用于配套的策略
    """

    kind: str = 'named'
    name: Optional[str] = None
    dims: Tuple[int, ...] = ()
    gamma: float = 0.0
    eps_p: float = 0.2
    alpha: float = 0.9

    def __post_init__(self):
        try:
            kind = GeneratorKind(self.kind)
        except ValueError:
            raise InvalidArgument(f'unknown generator kind {self.kind!r}') from None
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, 'dims', dims)
        if kind is GeneratorKind.Named:
            try:
                NamedGame(self.name)
            except ValueError:
                raise InvalidArgument(f'unknown named game {self.name!r}') from None
        elif len(dims) != (2 if kind is GeneratorKind.RandomMatrix else 3) or min(dims) < 1:
            raise InvalidArgument(f'invalid dims {dims} for {kind.value}')
        if not 0.0 < self.eps_p <= 1.0:
            raise InvalidArgument(f'eps_p must lie in (0, 1], got {self.eps_p}')
        if not 0.0 <= self.gamma < 1.0:
            raise InvalidArgument(f'gamma must lie in [0, 1), got {self.gamma}')


MATCHING_PENNIES = [[1.0, -1.0], [-1.0, 1.0]]
ROCK_PAPER_SCISSORS = [[0.0, -1.0, 1.0], [1.0, 0.0, -1.0], [-1.0, 1.0, 0.0]]


def appendix_d_game(gamma: float = 0.0) -> MarkovGame:
    """ 动作1保持当前状态 (P1 = I) 动作2切换状态 (P2 反对角); 对手只有一个动作 收益为0 """
    transition = np.zeros((2, 2, 1, 2))
    transition[0, 0, 0, 0] = transition[1, 0, 0, 1] = 1.0
    transition[0, 1, 0, 1] = transition[1, 1, 0, 0] = 1.0
    return MarkovGame(transition, np.zeros((2, 2, 1)), gamma)


def appendix_d_policy(alpha: float) -> JointPolicy:
    if not 0.0 <= alpha <= 1.0:
        raise InvalidArgument(f'alpha must lie in [0, 1], got {alpha}')
    return JointPolicy(Policy([[alpha, 1.0 - alpha]] * 2), Policy([[1.0]] * 2))


def generate_game(spec: GeneratorSpec, seed: int = 0) -> Game:
    """ 对 (spec, seed) 确定 """
    kind = GeneratorKind(spec.kind)
    if kind is GeneratorKind.Named:
        name = NamedGame(spec.name)
        if name is NamedGame.MatchingPennies:
            return MatrixGame(MATCHING_PENNIES)
        if name is NamedGame.RockPaperScissors:
            return MatrixGame(ROCK_PAPER_SCISSORS)
        return appendix_d_game(spec.gamma)

    rng = np.random.default_rng(seed)
    if kind is GeneratorKind.RandomMatrix:
        return MatrixGame(rng.uniform(-1.0, 1.0, spec.dims))

    n_states, m, n = spec.dims
    reward = rng.uniform(-1.0, 1.0, (n_states, m, n))
    raw = rng.random((n_states, m, n, n_states))
    transition = raw / raw.sum(axis=-1, keepdims=True)
    transition = (1.0 - spec.eps_p) * transition + spec.eps_p / n_states
    # 归一化消除舍入误差 使行和精确到1e-12以内
    transition /= transition.sum(axis=-1, keepdims=True)
    return MarkovGame(transition, reward, spec.gamma)


def random_policy(n_states: int, n_actions: int, rng: np.random.Generator) -> Policy:
    """ 每个状态一行 Dirichlet(1) 分布 """
    return Policy(rng.dirichlet(np.ones(n_actions), size=n_states))
