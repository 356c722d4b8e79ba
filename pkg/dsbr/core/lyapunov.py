"""
运行过程中记录的分析量:
  V_X(μ¹,μ²) = Σ_i max_μ̂ {(μ̂-μ^i)ᵀX_iμ^-i + τν(μ̂) - τν(μ^i)}
  L_v = Σ_i ‖v^i - v_*^i‖_∞,  L_sum = ‖v^1 + v^2‖_∞
  L_π = Σ_s V_{T(v),s}(π(s)),  L_q = Σ_i Σ_s ‖q^i(s) - q̄^i(s)‖²
内层最大值在 σ_τ(X_iμ^-i) 处取到 故直接用logsumexp的闭式。
"""
import math
from dataclasses import dataclass, astuple, fields
from typing import Optional, Sequence, Tuple
import numpy as np

from dsbr.core.games import (
    Game, MatrixGame, entropy, log_partition, softmax_rows, apply_T)
from dsbr.core.oracles import matrix_nash_gap, markov_nash_gap, q_target, DEFAULT_TOL
from dsbr.utils.errors import InvalidArgument


def _distribution(mu, size, name):
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (size,):
        raise InvalidArgument(f'{name} must have length {size}, got shape {mu.shape}')
    if np.any(mu < 0) or abs(mu.sum() - 1.0) > 1e-9:
        raise InvalidArgument(f'{name} is not a probability vector')
    return mu


def _check_payoffs(x1, x2, mu1, mu2, tau):
    x1, x2 = np.asarray(x1, dtype=float), np.asarray(x2, dtype=float)
    if x1.ndim != 2 or x2.shape != x1.T.shape:
        raise InvalidArgument(
            f'payoff shapes {x1.shape} and {x2.shape} are inconsistent')
    if not tau > 0:
        raise InvalidArgument(f'tau must be positive, got {tau}')
    mu1 = _distribution(mu1, x1.shape[0], 'mu1')
    mu2 = _distribution(mu2, x1.shape[1], 'mu2')
    return x1, x2, mu1, mu2


def lyapunov_V(x1, x2, mu1, mu2, tau: float) -> float:
    x1, x2, mu1, mu2 = _check_payoffs(x1, x2, mu1, mu2, tau)
    total = 0.0
    for x, mine, other in ((x1, mu1, mu2), (x2, mu2, mu1)):
        y = x @ other
        term = log_partition(y, tau) - mine @ y - tau * entropy(mine)
        total += max(term, 0.0)
    return total


def quadratic_growth_bound(x1, x2, mu1, mu2, tau: float) -> float:
    """ V_X >= τ/2 Σ_i ‖σ_τ(X_iμ^-i) - μ^i‖² """
    x1, x2, mu1, mu2 = _check_payoffs(x1, x2, mu1, mu2, tau)
    gap1 = softmax_rows(x1 @ mu2, tau) - mu1
    gap2 = softmax_rows(x2 @ mu1, tau) - mu2
    return 0.5 * tau * float(gap1 @ gap1 + gap2 @ gap2)


@dataclass(frozen=True)
class DiagnosticsRecord(object):
    outer_t: int
    inner_k: int
    nash_gap: float
    l_v: float
    l_sum: float
    l_pi: float
    l_q: float
    smoothing_bias: float

    @classmethod
    def header(cls) -> Tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    def as_row(self) -> tuple:
        return astuple(self)


def _snapshot(learner) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    return (np.atleast_2d(learner.q), np.atleast_2d(learner.policy), np.atleast_1d(learner.v))


def compute_record(game: Game, learners: Sequence, v_star: Optional[Tuple[np.ndarray, np.ndarray]],
                   outer_t: int, inner_k: int, tau: float, p_o=None,
                   tol: float = DEFAULT_TOL, c4: Optional[float] = None) -> DiagnosticsRecord:
    """
    learners: 两名玩家的状态 只读其 q / policy / v
    v_star: (v_*^1, v_*^2) 马尔可夫博弈时每次运行预先算好一次 矩阵博弈时忽略
    """
    (q1, pi1, v1), (q2, pi2, v2) = (_snapshot(learner) for learner in learners)
    if isinstance(game, MatrixGame):
        markov = game.as_markov
        nash_gap = matrix_nash_gap(game, pi1[0], pi2[0])
        l_v = l_sum = 0.0
        values = (np.zeros(1), np.zeros(1))
        smoothing_bias = 2.0 * tau * math.log(game.a_max)
    else:
        markov = game
        nash_gap = markov_nash_gap(game, pi1, pi2, p_o, tol)
        l_v = float(np.abs(v1 - v_star[0]).max() + np.abs(v2 - v_star[1]).max())
        l_sum = float(np.abs(v1 + v2).max())
        values = (v1, v2)
        smoothing_bias = (c4 * tau * math.log(game.a_max) / (1.0 - game.discount) ** 2
                          if c4 is not None else math.nan)

    x1, x2 = apply_T(markov, values[0], 1), apply_T(markov, values[1], 2)
    l_pi = sum(lyapunov_V(x1[s], x2[s], pi1[s], pi2[s], tau) for s in range(markov.n_states))
    l_q = 0.0
    for q, v, opponent, player in ((q1, values[0], pi2, 1), (q2, values[1], pi1, 2)):
        diff = q - q_target(markov, v, opponent, player)
        l_q += float(np.sum(diff * diff))

    return DiagnosticsRecord(
        outer_t=int(outer_t), inner_k=int(inner_k), nash_gap=float(nash_gap),
        l_v=l_v, l_sum=l_sum, l_pi=float(l_pi), l_q=l_q,
        smoothing_bias=float(smoothing_bias))


if __name__ == '__main__':
    pennies = MatrixGame([[1, -1], [-1, 1]])
    for tau in (1e-2, 1e-4, 1e-6):
        print(tau, lyapunov_V(pennies.reward(1), pennies.reward(2), [1, 0], [1, 0], tau))
