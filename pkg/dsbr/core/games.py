"""
博弈的基础类型与单纯形上的基本运算。

约定:
  - 玩家编号为1和2 玩家2的收益由零和结构推出 R^2(s,b,a) = -R^1(s,a,b) 从不存储
  - Policy/QFunction 的形状为 [n_states, n_actions] 矩阵博弈时 n_states=1
  - 所有数组在构造后只读
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Tuple, Union
import numpy as np
from scipy.special import logsumexp

from dsbr.utils.errors import InvalidArgument, GameFormatError

PROB_ATOL = 1e-12


def _frozen(array, dtype=float) -> np.ndarray:
    array = np.array(array, dtype=dtype)
    array.setflags(write=False)
    return array


def _check_player(player: int):
    if player not in (1, 2):
        raise InvalidArgument(f'player must be 1 or 2, got {player}')


def check_simplex_rows(probs: np.ndarray, name='policy', atol=PROB_ATOL):
    """ 每一行都是概率分布 违规时报告首个位置 """
    if not np.all(np.isfinite(probs)):
        idx = tuple(int(i) for i in np.argwhere(~np.isfinite(probs))[0])
        raise GameFormatError(f'{name}{list(idx)} is not finite')
    if np.any(probs < 0):
        idx = tuple(int(i) for i in np.argwhere(probs < 0)[0])
        raise GameFormatError(f'{name}{list(idx)} = {probs[idx]} is negative')
    sums = probs.sum(axis=-1)
    bad = np.abs(sums - 1.0) > atol
    if np.any(bad):
        idx = tuple(int(i) for i in np.argwhere(bad)[0])
        raise GameFormatError(
            f'{name}{list(idx)} sums to {sums[idx]!r}, expected 1')


@dataclass(frozen=True, eq=False)
class MatrixGame(object):
    """ 行玩家收益矩阵 R^1 形状 [|A^1|, |A^2|] """

    payoff: np.ndarray

    def __post_init__(self):
        payoff = _frozen(self.payoff)
        if payoff.ndim != 2 or min(payoff.shape) < 1:
            raise GameFormatError(
                f'payoff must be a non-empty matrix, got shape {payoff.shape}')
        if not np.all(np.isfinite(payoff)):
            idx = [int(i) for i in np.argwhere(~np.isfinite(payoff))[0]]
            raise GameFormatError(f'payoff{idx} is not finite')
        if np.any(np.abs(payoff) > 1.0):
            idx = [int(i) for i in np.argwhere(np.abs(payoff) > 1.0)[0]]
            raise GameFormatError(
                f'payoff{idx} = {payoff[tuple(idx)]} exceeds 1 in absolute value')
        object.__setattr__(self, 'payoff', payoff)

    @property
    def n_actions(self) -> Tuple[int, int]:
        return self.payoff.shape

    @property
    def a_max(self) -> int:
        return max(self.payoff.shape)

    def reward(self, player: int) -> np.ndarray:
        """ R^i 行为自己的动作 列为对手的动作 """
        _check_player(player)
        return self.payoff if player == 1 else -self.payoff.T

    @cached_property
    def as_markov(self) -> 'MarkovGame':
        """ 单状态 γ=0 的马尔可夫博弈 与Markov代码路径共用 """
        m, n = self.payoff.shape
        return MarkovGame(
            transition=np.ones((1, m, n, 1)),
            reward=self.payoff[None, :, :],
            discount=0.0,
        )


@dataclass(frozen=True, eq=False)
class MarkovGame(object):
    """
    transition: p(s'|s,a1,a2) 形状 [S, A1, A2, S]
    reward: R^1(s,a1,a2) 形状 [S, A1, A2]
    """

    transition: np.ndarray
    reward: np.ndarray
    discount: float

    def __post_init__(self):
        transition, reward = _frozen(self.transition), _frozen(self.reward)
        if reward.ndim != 3 or min(reward.shape) < 1:
            raise GameFormatError(
                f'reward must have shape [S, A1, A2], got {reward.shape}')
        n_states = reward.shape[0]
        if transition.shape != reward.shape + (n_states,):
            raise GameFormatError(
                f'transition must have shape {reward.shape + (n_states,)}, '
                f'got {transition.shape}')
        if not (0.0 <= self.discount < 1.0):
            raise GameFormatError(f'gamma must lie in [0, 1), got {self.discount}')
        if not np.all(np.isfinite(reward)):
            idx = [int(i) for i in np.argwhere(~np.isfinite(reward))[0]]
            raise GameFormatError(f'reward{idx} is not finite')
        if np.any(np.abs(reward) > 1.0):
            idx = [int(i) for i in np.argwhere(np.abs(reward) > 1.0)[0]]
            raise GameFormatError(
                f'reward{idx} = {reward[tuple(idx)]} exceeds 1 in absolute value')
        if np.any(transition > 1.0):
            idx = [int(i) for i in np.argwhere(transition > 1.0)[0]]
            raise GameFormatError(f'transition{idx} exceeds 1')
        check_simplex_rows(transition, 'transition')
        object.__setattr__(self, 'transition', transition)
        object.__setattr__(self, 'reward', reward)
        object.__setattr__(self, 'discount', float(self.discount))

    @property
    def n_states(self) -> int:
        return self.reward.shape[0]

    @property
    def n_actions(self) -> Tuple[int, int]:
        return self.reward.shape[1], self.reward.shape[2]

    @property
    def a_max(self) -> int:
        return max(self.n_actions)

    def player_reward(self, player: int) -> np.ndarray:
        """ R^i(s, a^i, a^-i) """
        _check_player(player)
        return self.reward if player == 1 else -self.reward.transpose(0, 2, 1)

    def player_transition(self, player: int) -> np.ndarray:
        """ p(s'|s, a^i, a^-i) """
        _check_player(player)
        return self.transition if player == 1 else self.transition.transpose(0, 2, 1, 3)


Game = Union[MatrixGame, MarkovGame]
QFunction = np.ndarray  # [|S|, |A^i|] 矩阵博弈时 |S| = 1
ValueFunction = np.ndarray  # [|S|]


@dataclass(frozen=True, eq=False)
class Policy(object):
    """ 每个状态一行动作分布 """

    probs: np.ndarray

    def __post_init__(self):
        probs = _frozen(self.probs)
        if probs.ndim == 1:
            probs = _frozen(probs[None, :])
        if probs.ndim != 2:
            raise GameFormatError(f'policy must be a matrix, got shape {probs.shape}')
        check_simplex_rows(probs)
        object.__setattr__(self, 'probs', probs)

    @classmethod
    def uniform(cls, n_states: int, n_actions: int) -> 'Policy':
        return cls(np.full((n_states, n_actions), 1.0 / n_actions))

    @property
    def n_states(self): return self.probs.shape[0]

    @property
    def n_actions(self): return self.probs.shape[1]

    def __getitem__(self, state): return self.probs[state]


@dataclass(frozen=True, eq=False)
class JointPolicy(object):

    pi1: Policy
    pi2: Policy

    def __post_init__(self):
        if self.pi1.n_states != self.pi2.n_states:
            raise GameFormatError(
                f'policies disagree on the number of states: '
                f'{self.pi1.n_states} vs {self.pi2.n_states}')

    @classmethod
    def uniform(cls, n_states: int, n_actions: Tuple[int, int]) -> 'JointPolicy':
        return cls(Policy.uniform(n_states, n_actions[0]),
                   Policy.uniform(n_states, n_actions[1]))

    def player(self, i: int) -> Policy:
        _check_player(i)
        return self.pi1 if i == 1 else self.pi2

    def check_game(self, game: Game):
        n_states = game.n_states if isinstance(game, MarkovGame) else 1
        if (self.pi1.n_states, self.pi1.n_actions, self.pi2.n_actions) != \
                (n_states, *game.n_actions):
            raise GameFormatError(
                f'joint policy shape ({self.pi1.n_states}, {self.pi1.n_actions}, '
                f'{self.pi2.n_actions}) does not match game ({n_states}, '
                f'{game.n_actions[0]}, {game.n_actions[1]})')


def softmax(q, tau: float) -> np.ndarray:
    """ [σ_τ(q)](a) = exp(q(a)/τ) / Σ exp(q(ã)/τ) 先减最大值防止溢出 """
    q = np.asarray(q, dtype=float)
    if not np.isfinite(tau) or tau <= 0:
        raise InvalidArgument(f'tau must be positive, got {tau}')
    if q.size == 0 or not np.all(np.isfinite(q)):
        raise InvalidArgument('q must be a non-empty finite vector')
    return softmax_rows(q, tau)


def softmax_rows(q: np.ndarray, tau: float) -> np.ndarray:
    """ 沿最后一维做softmax 不做参数检查 (迭代内部使用) """
    z = np.exp((q - q.max(axis=-1, keepdims=True)) / tau)
    return z / z.sum(axis=-1, keepdims=True)


def entropy(mu) -> float:
    """ ν(μ) = -Σ μ log μ 约定 0·log0 = 0 """
    mu = np.asarray(mu, dtype=float)
    if not np.all(np.isfinite(mu)) or np.any(mu < 0):
        raise InvalidArgument('distribution entries must be finite and non-negative')
    positive = mu[mu > 0]
    return float(-np.sum(positive * np.log(positive)))


def log_partition(y, tau: float) -> float:
    """ max_μ {μ·y + τν(μ)} = τ·logsumexp(y/τ) """
    return float(tau * logsumexp(np.asarray(y, dtype=float) / tau))


def apply_T(game: MarkovGame, v: ValueFunction, player: int) -> np.ndarray:
    """ T^i(v)(s,a^i,a^-i) = R^i + γ Σ_s' p(s'|s,·) v(s') 形状 [S, A^i, A^-i] """
    v = np.asarray(v, dtype=float)
    if v.shape != (game.n_states,) or not np.all(np.isfinite(v)):
        raise InvalidArgument(
            f'v must be a finite vector of length {game.n_states}')
    return game.player_reward(player) + game.discount * (game.player_transition(player) @ v)


def marginal_payoff(game: MatrixGame, opponent_policy, player: int) -> np.ndarray:
    """ R^i π^-i """
    reward = game.reward(player)
    opponent_policy = np.asarray(opponent_policy, dtype=float)
    if opponent_policy.shape != (reward.shape[1],):
        raise InvalidArgument(
            f'opponent policy must have length {reward.shape[1]}, '
            f'got shape {opponent_policy.shape}')
    return reward @ opponent_policy


if __name__ == '__main__':
    print(softmax([1.0, 0.0], 0.5))
    print(entropy([0.25, 0.75]))
    pennies = MatrixGame([[1, -1], [-1, 1]])
    print(marginal_payoff(pennies, [1, 0], 2))
