"""
双平滑最优反应动态 (DSBR)。

矩阵博弈 (run_dsbr) 每一步:
    π_{k+1} = π_k + β_k(σ_τ(q_k) - π_k)
    A_k ~ π_{k+1}
    q_{k+1}(a) = q_k(a) + α_k 1{a=A_k}(R(A_k, A_k^-) - q_k(A_k))
马尔可夫博弈 (dsbr_vi_run) 在外层做 T 次值迭代, 每次内层 K 步:
    内层同上 但q的目标为 R + γ v_t(S_{k+1}), 所有状态同时更新策略
    外层 v_{t+1}(s) = π_{t,K}(s)ᵀ q_{t,K}(s), 然后 q、π 重置, 轨迹状态延续 S_0 = S_K

矩阵博弈按单状态、γ=0 的马尔可夫博弈走同一条代码路径。
"""
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union
import numpy as np

from dsbr.core.games import (
    Game, MatrixGame, MarkovGame, Policy, JointPolicy, softmax_rows, marginal_payoff)
from dsbr.core.lyapunov import DiagnosticsRecord, compute_record
from dsbr.core.oracles import game_value_pair, DEFAULT_TOL
from dsbr.core.chain import induce_chain, check_ergodic
from dsbr.models.schedule import StepsizeSchedule
from dsbr.models.learner import LearnerState, StationaryOpponent, Observation
from dsbr.models.conditions import check_conditions
from dsbr.utils.errors import InvalidArgument, InvariantViolation, NotErgodicError
from dsbr.utils.logger import DsbrLogger
from dsbr.utils.rng import RandomStreams, sample

INVARIANT_ATOL = 1e-12


def ell_tau(tau: float, gamma: float, a_max: int) -> float:
    """
    策略下界 ℓ_τ = [1 + (A_max-1) exp(2/((1-γ)τ))]^{-1}
    以 exp(-logaddexp(0, log(A_max-1) + 2/((1-γ)τ))) 计算 τ很小时不溢出
    """
    if a_max < 2:
        raise InvalidArgument(f'a_max must be at least 2, got {a_max}')
    if not tau > 0:
        raise InvalidArgument(f'tau must be positive, got {tau}')
    if not 0.0 <= gamma < 1.0:
        raise InvalidArgument(f'gamma must lie in [0, 1), got {gamma}')
    exponent = math.log(a_max - 1) + 2.0 / ((1.0 - gamma) * tau)
    return float(np.exp(-np.logaddexp(0.0, exponent)))


@dataclass
class RunConfig(object):
    K: int = 1000
    tau: float = 0.05
    schedule: StepsizeSchedule = field(default_factory=StepsizeSchedule)
    T: int = 1
    seed: int = 0
    checkpoint_every: Optional[int] = None
    strict_theory: bool = False
    initial_state: int = 0
    p_o: Optional[Sequence[float]] = None
    tol: float = DEFAULT_TOL
    c4: Optional[float] = None

    def __post_init__(self):
        if isinstance(self.schedule, dict):
            self.schedule = StepsizeSchedule(**self.schedule)
        if self.K < 0:
            raise InvalidArgument(f'K must be non-negative, got {self.K}')
        if self.T < 1:
            raise InvalidArgument(f'T must be at least 1, got {self.T}')
        if not self.tau > 0:
            raise InvalidArgument(f'tau must be positive, got {self.tau}')
        if self.seed < 0 or self.seed >= 2 ** 64:
            raise InvalidArgument(f'seed must be a 64-bit unsigned integer, got {self.seed}')
        if self.checkpoint_every is not None and self.checkpoint_every < 1:
            raise InvalidArgument(f'checkpoint_every must be positive, got {self.checkpoint_every}')
        if not self.tol > 0:
            raise InvalidArgument(f'tol must be positive, got {self.tol}')

    def checkpoint_interval(self, markov: bool) -> int:
        """ 默认: 矩阵博弈 max(1, K//100), 马尔可夫博弈 K (每个外层一次) """
        if self.checkpoint_every is not None:
            return self.checkpoint_every
        return max(1, self.K) if markov else max(1, self.K // 100)


Learner = Union[LearnerState, StationaryOpponent]


def _inner_step(game: MarkovGame, learners: Sequence[Learner], state: int,
                alpha_k: float, beta_k: float, tau: float, streams: RandomStreams):
    """ 先提交双方的策略更新 再从新策略同时采样 最后各自更新q """
    improved = [learner.improve(beta_k, tau) for learner in learners]
    a1 = improved[0].act(state, streams.player(1))
    a2 = improved[1].act(state, streams.player(2))
    r1 = float(game.reward[state, a1, a2])
    if game.n_states == 1:
        next_state = 0
    else:
        next_state = sample(streams.env, game.transition[state, a1, a2])
    updated = (
        improved[0].evaluate(Observation(state, a1, r1, next_state), alpha_k, game.discount),
        improved[1].evaluate(Observation(state, a2, -r1, next_state), alpha_k, game.discount),
    )
    return updated, next_state, (a1, a2), (r1, -r1)


def dsbr_step(game: MatrixGame, states: Sequence[Learner], k: int,
              schedule: StepsizeSchedule, tau: float, rng: RandomStreams):
    """ 单步 返回 (新状态对, 采样到的联合动作, 双方收益) """
    alpha_k, beta_k = schedule.steps(k)
    updated, _, actions, rewards = _inner_step(game.as_markov, states, 0, alpha_k, beta_k, tau, rng)
    return updated, actions, rewards


class DsbrEngine(object):
    """
    一个引擎实例拥有一条轨迹 单线程执行。
    opponent: rationality 实验中给定 (玩家编号, 平稳策略) 该玩家不学习
    """

    def __init__(self, game: Game, config: RunConfig, opponent: Optional[Tuple[int, Policy]] = None):
        self.game = game
        self.config = config
        self.markov = game.as_markov if isinstance(game, MatrixGame) else game
        self.is_markov = isinstance(game, MarkovGame)
        self.T = config.T if self.is_markov else 1
        self.interval = config.checkpoint_interval(self.is_markov)
        self.streams = RandomStreams(config.seed)
        self.logger = DsbrLogger.logger()

        gamma = self.markov.discount
        self.ell = ell_tau(config.tau, gamma, max(self.markov.a_max, 2))
        self.bound = 1.0 / (1.0 - gamma)
        if not 0 <= config.initial_state < self.markov.n_states:
            raise InvalidArgument(
                f'initial state {config.initial_state} out of range [0, {self.markov.n_states})')

        report = check_conditions(config, self.markov.n_actions, gamma, self.markov.n_states)
        for check in report.violated:
            self.logger.warning(f'condition {check.name} does not hold: {check.detail}')
        if config.strict_theory:
            report.enforce()

        n_states, (m, n) = self.markov.n_states, self.markov.n_actions
        learners: List[Learner] = [LearnerState.initial(n_states, m, 1), LearnerState.initial(n_states, n, 2)]
        if opponent is not None:
            player, policy = opponent
            policy = policy if isinstance(policy, Policy) else Policy(policy)
            if policy.probs.shape != (n_states, learners[player - 1].policy.shape[1]):
                raise InvalidArgument(
                    f'opponent policy shape {policy.probs.shape} does not match player {player}')
            learners[player - 1] = StationaryOpponent(policy.probs, player)
        self.learners = tuple(learners)

        self.v_star = None
        if self.is_markov:
            self._check_uniform_ergodic()
            self.v_star = game_value_pair(game, config.tol)
        self.state = config.initial_state
        self.records: List[DiagnosticsRecord] = []

    def _check_uniform_ergodic(self):
        """ 以均匀联合策略下的遍历性作为充分条件的代理 不成立只警告 """
        uniform = JointPolicy.uniform(self.markov.n_states, self.markov.n_actions)
        try:
            check_ergodic(induce_chain(self.markov, uniform))
        except NotErgodicError as e:
            self.logger.warning(f'uniform joint policy does not induce an ergodic chain: {e}')

    def _check_invariants(self, n: int):
        for learner in self.learners:
            if not isinstance(learner, LearnerState):
                continue
            low = learner.policy.min()
            if low < self.ell - INVARIANT_ATOL:
                raise InvariantViolation(
                    f'step {n}: player {learner.player} policy entry {low!r} below margin {self.ell!r}')
            for name, array in (('q', learner.q), ('v', learner.v)):
                peak = np.abs(array).max()
                if peak > self.bound + INVARIANT_ATOL:
                    raise InvariantViolation(
                        f'step {n}: player {learner.player} |{name}| = {peak!r} exceeds {self.bound!r}')

    def _record(self, outer_t: int, inner_k: int):
        record = compute_record(
            self.game, self.learners, self.v_star, outer_t, inner_k, self.config.tau,
            p_o=self.config.p_o, tol=self.config.tol, c4=self.config.c4)
        self.records.append(record)
        self.logger.debug(f'checkpoint t={outer_t} k={inner_k} nash_gap={record.nash_gap:.6g}')

    def run(self) -> Tuple[JointPolicy, List[DiagnosticsRecord]]:
        K, config = self.config.K, self.config
        self._check_invariants(0)
        self._record(0, 0)
        n = 0
        for t in range(self.T):
            for k in range(K):
                alpha_k, beta_k = config.schedule.steps(k)
                self.learners, self.state, _, _ = _inner_step(
                    self.markov, self.learners, self.state, alpha_k, beta_k, config.tau, self.streams)
                n += 1
                self._check_invariants(n)
                if n % self.interval == 0 and (k < K - 1 or not self.is_markov):
                    self._record(t, k + 1)
            if self.is_markov:
                self.learners = tuple(learner.bootstrap() for learner in self.learners)
                self._check_invariants(n)
                if K > 0 and n % self.interval == 0:
                    self._record(t + 1, 0)
                output = self.policy()
                if t < self.T - 1:
                    self.learners = tuple(learner.restart() for learner in self.learners)
        return (output if self.is_markov else self.policy()), self.records

    def policy(self) -> JointPolicy:
        return JointPolicy(Policy(self.learners[0].policy), Policy(self.learners[1].policy))

    @property
    def values(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.learners[0].v, self.learners[1].v


def run_dsbr(game: MatrixGame, config: RunConfig) -> Tuple[JointPolicy, List[DiagnosticsRecord]]:
    if not isinstance(game, MatrixGame):
        raise InvalidArgument('run_dsbr expects a matrix game')
    return DsbrEngine(game, config).run()


def dsbr_vi_run(game: MarkovGame, config: RunConfig) -> Tuple[JointPolicy, List[DiagnosticsRecord]]:
    if not isinstance(game, MarkovGame):
        raise InvalidArgument('dsbr_vi_run expects a Markov game')
    return DsbrEngine(game, config).run()


def smoothed_br_step(game: MatrixGame, pi1, pi2, beta: float, tau: float) -> Tuple[np.ndarray, np.ndarray]:
    """ 完全信息下的期望动态: π^i ← π^i + β(σ_τ(R^iπ^-i) - π^i) """
    pi1, pi2 = np.asarray(pi1, dtype=float), np.asarray(pi2, dtype=float)
    target1 = softmax_rows(marginal_payoff(game, pi2, 1), tau)
    target2 = softmax_rows(marginal_payoff(game, pi1, 2), tau)
    return pi1 + beta * (target1 - pi1), pi2 + beta * (target2 - pi2)


def mean_field_step(game: MatrixGame, q1, q2, pi1, pi2, alpha: float, beta: float,
                    tau: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    DSBR 单步对采样取期望后的确定性版本 (平均场):
        π^i ← π^i + β(σ_τ(q^i) - π^i)
        q^i(a) ← q^i(a) + α π^i(a) ((R^i π^-i)(a) - q^i(a))   π 为更新后的策略
    返回 (q1, q2, pi1, pi2)。
    在均匀均衡处线性化: β/α = c 满足 c/(2τ²) < (c + ½)² 时 pennies 局部稳定 否则收敛到极限环
    """
    q1, q2 = np.asarray(q1, dtype=float), np.asarray(q2, dtype=float)
    pi1, pi2 = np.asarray(pi1, dtype=float), np.asarray(pi2, dtype=float)
    pi1 = pi1 + beta * (softmax_rows(q1, tau) - pi1)
    pi2 = pi2 + beta * (softmax_rows(q2, tau) - pi2)
    q1 = q1 + alpha * pi1 * (marginal_payoff(game, pi2, 1) - q1)
    q2 = q2 + alpha * pi2 * (marginal_payoff(game, pi1, 2) - q2)
    return q1, q2, pi1, pi2


def best_response_step(game: MatrixGame, pi1, pi2, k: int) -> Tuple[np.ndarray, np.ndarray]:
    """ 离散时间最优反应 (hardmax) 步长 1/(k+1) 平手取下标最小的动作 """
    pi1, pi2 = np.asarray(pi1, dtype=float), np.asarray(pi2, dtype=float)
    beta = 1.0 / (k + 1)
    br1 = np.eye(len(pi1))[np.argmax(marginal_payoff(game, pi2, 1))]
    br2 = np.eye(len(pi2))[np.argmax(marginal_payoff(game, pi1, 2))]
    return pi1 + beta * (br1 - pi1), pi2 + beta * (br2 - pi2)
