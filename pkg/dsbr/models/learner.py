"""
单个玩家的可演化状态 (q, π, v)。
玩家只看到自己的 Observation: 当前状态、自己的动作、自己的收益、下一状态,
不读取对手的动作或策略。
"""
from dataclasses import dataclass
from typing import Optional
import numpy as np

from dsbr.core.games import softmax_rows
from dsbr.utils.rng import sample


@dataclass(frozen=True)
class Observation(object):
    state: int
    action: int
    reward: float
    next_state: int


@dataclass(frozen=True, eq=False)
class LearnerState(object):
    """
    q: [S, A^i]   policy: [S, A^i]   v: [S] (矩阵博弈时恒为0)
    每一步都返回新对象 旧状态保持不变
    """

    q: np.ndarray
    policy: np.ndarray
    v: np.ndarray
    player: int

    @classmethod
    def initial(cls, n_states: int, n_actions: int, player: int,
                v: Optional[np.ndarray] = None) -> 'LearnerState':
        """ q = 0, π 均匀 """
        return cls(
            q=np.zeros((n_states, n_actions)),
            policy=np.full((n_states, n_actions), 1.0 / n_actions),
            v=np.zeros(n_states) if v is None else np.array(v, dtype=float),
            player=player,
        )

    def improve(self, beta: float, tau: float) -> 'LearnerState':
        """ 所有状态同时做 π ← π + β(σ_τ(q) - π) """
        policy = self.policy + beta * (softmax_rows(self.q, tau) - self.policy)
        return LearnerState(self.q, policy, self.v, self.player)

    def act(self, state: int, rng: np.random.Generator) -> int:
        return sample(rng, self.policy[state])

    def evaluate(self, obs: Observation, alpha: float, gamma: float) -> 'LearnerState':
        """ q(s,a) ← q(s,a) + α(r + γ v(s') - q(s,a)) 只更新访问到的 (s,a) """
        q = self.q.copy()
        target = obs.reward + gamma * self.v[obs.next_state]
        q[obs.state, obs.action] += alpha * (target - q[obs.state, obs.action])
        return LearnerState(q, self.policy, self.v, self.player)

    def bootstrap(self) -> 'LearnerState':
        """ 外层更新 v(s) = π(s)ᵀq(s), q 与 π 保留到 restart """
        v = np.einsum('sa,sa->s', self.policy, self.q)
        return LearnerState(self.q, self.policy, v, self.player)

    def restart(self) -> 'LearnerState':
        n_states, n_actions = self.q.shape
        return LearnerState.initial(n_states, n_actions, self.player, self.v)


@dataclass(frozen=True, eq=False)
class StationaryOpponent(object):
    """
    固定的平稳策略 用于 rationality 实验: 与 LearnerState 同接口, 但所有更新都是恒等。
    q 与 v 恒为0。
    """

    policy: np.ndarray
    player: int

    @property
    def q(self) -> np.ndarray:
        return np.zeros_like(self.policy)

    @property
    def v(self) -> np.ndarray:
        return np.zeros(self.policy.shape[0])

    def improve(self, beta: float, tau: float) -> 'StationaryOpponent':
        return self

    def act(self, state: int, rng: np.random.Generator) -> int:
        return sample(rng, self.policy[state])

    def evaluate(self, obs: Observation, alpha: float, gamma: float) -> 'StationaryOpponent':
        return self

    def bootstrap(self) -> 'StationaryOpponent':
        return self

    def restart(self) -> 'StationaryOpponent':
        return self
