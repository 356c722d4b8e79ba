"""
精确(到给定容差)的求解器 作为学习动态的参照:
矩阵博弈Nash gap、minimax值迭代、最优反应值、策略评估、Markov博弈Nash gap。
全部是输入的纯函数。
"""
from dataclasses import dataclass
from typing import Tuple
import numpy as np
from scipy import linalg

from dsbr.core.games import MatrixGame, MarkovGame, Policy, JointPolicy, QFunction, ValueFunction, apply_T
from dsbr.core.simplex import matrix_game_value
from dsbr.utils.errors import InvalidArgument

DEFAULT_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class ValueIterationResult(object):
    v_star: ValueFunction
    iterations: int
    residual: float


def _probs(policy) -> np.ndarray:
    return policy.probs if isinstance(policy, Policy) else np.atleast_2d(np.asarray(policy, dtype=float))


def _stop_threshold(tol: float, gamma: float) -> float:
    """ ‖B(v)-v‖ <= 该阈值 => ‖B(v)-v*‖ <= tol/2 且残差 <= tol """
    if gamma == 0.0:
        return tol
    return tol * min(1.0, (1.0 - gamma) / (2.0 * gamma))


def _check_tol(tol):
    if not tol > 0:
        raise InvalidArgument(f'tol must be positive, got {tol}')


def matrix_nash_gap(game: MatrixGame, pi1, pi2) -> float:
    """ NG = Σ_i max_a (R^i π^-i)(a) - (π^i)ᵀ R^i π^-i """
    pi1, pi2 = np.asarray(pi1, dtype=float), np.asarray(pi2, dtype=float)
    m, n = game.n_actions
    if pi1.shape != (m,) or pi2.shape != (n,):
        raise InvalidArgument(
            f'policy shapes {pi1.shape}, {pi2.shape} do not match game {m}x{n}')
    gap = 0.0
    for mine, other, reward in ((pi1, pi2, game.reward(1)), (pi2, pi1, game.reward(2))):
        marginal = reward @ other
        gap += float(marginal.max() - mine @ marginal)
    return gap


def minimax_bellman(game: MarkovGame, v: ValueFunction, player: int = 1) -> ValueFunction:
    """ B^i(v)(s) = val^i(T^i(v)(s)) """
    q = apply_T(game, v, player)
    return np.array([matrix_game_value(q[s])[0] for s in range(game.n_states)])


def minimax_value_iteration(game: MarkovGame, player: int = 1,
                            tol: float = DEFAULT_TOL) -> ValueIterationResult:
    _check_tol(tol)
    v = np.zeros(game.n_states)
    if game.discount == 0.0:
        return ValueIterationResult(minimax_bellman(game, v, player), 1, 0.0)
    threshold = _stop_threshold(tol, game.discount)
    iterations = 0
    while True:
        new_v = minimax_bellman(game, v, player)
        iterations += 1
        residual = float(np.abs(new_v - v).max())
        v = new_v
        if residual <= threshold:
            return ValueIterationResult(v, iterations, residual)


def minimax_policies(game: MarkovGame, v_star) -> JointPolicy:
    """ 逐状态求解 T^1(v*)(s) 的矩阵博弈 得到均衡策略对 """
    q = apply_T(game, v_star, 1)
    pi1, pi2 = [], []
    for s in range(game.n_states):
        _, row, col = matrix_game_value(q[s])
        pi1.append(row)
        pi2.append(col)
    return JointPolicy(Policy(np.array(pi1)), Policy(np.array(pi2)))


def _marginal_mdp(game: MarkovGame, player: int, opponent_policy) -> Tuple[np.ndarray, np.ndarray]:
    """ 把对手策略边缘化 得到单智能体MDP的 (r[s,a], P[s,a,s']) """
    opp = _probs(opponent_policy)
    n_opp = game.n_actions[1] if player == 1 else game.n_actions[0]
    if opp.shape != (game.n_states, n_opp):
        raise InvalidArgument(
            f'opponent policy must have shape {(game.n_states, n_opp)}, got {opp.shape}')
    reward = np.einsum('sab,sb->sa', game.player_reward(player), opp)
    transition = np.einsum('sabt,sb->sat', game.player_transition(player), opp)
    return reward, transition


def best_response(game: MarkovGame, player: int, opponent_policy,
                  tol: float = DEFAULT_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """ 返回 (v^i_{*,π^-i}, 贪心策略) """
    _check_tol(tol)
    reward, transition = _marginal_mdp(game, player, opponent_policy)
    gamma = game.discount
    v = np.zeros(game.n_states)
    if gamma == 0.0:
        q = reward
    else:
        threshold = _stop_threshold(tol, gamma)
        while True:
            q = reward + gamma * (transition @ v)
            new_v = q.max(axis=1)
            residual = np.abs(new_v - v).max()
            v = new_v
            if residual <= threshold:
                break
        q = reward + gamma * (transition @ v)
    greedy = np.zeros_like(q)
    greedy[np.arange(game.n_states), q.argmax(axis=1)] = 1.0
    return q.max(axis=1), greedy


def best_response_value(game: MarkovGame, player: int, opponent_policy,
                        tol: float = DEFAULT_TOL) -> ValueFunction:
    return best_response(game, player, opponent_policy, tol)[0]


def policy_value(game: MarkovGame, pi1, pi2, player: int = 1) -> ValueFunction:
    """ 直接解线性方程 (I - γP_π) v = r_π """
    p1, p2 = _probs(pi1), _probs(pi2)
    reward = np.einsum('sa,sb,sab->s', p1, p2, game.reward)
    transition = np.einsum('sa,sb,sabt->st', p1, p2, game.transition)
    v = linalg.solve(np.eye(game.n_states) - game.discount * transition, reward)
    return v if player == 1 else -v


def uniform_initial(n_states: int) -> np.ndarray:
    return np.full(n_states, 1.0 / n_states)


def markov_nash_gap(game: MarkovGame, pi1, pi2, p_o=None,
                    tol: float = DEFAULT_TOL) -> float:
    """ NG = Σ_i <p_o, v^i_{*,π^-i}> - <p_o, v^i_π> """
    p_o = uniform_initial(game.n_states) if p_o is None else np.asarray(p_o, dtype=float)
    if p_o.shape != (game.n_states,) or np.any(p_o < 0) or abs(p_o.sum() - 1.0) > 1e-12:
        raise InvalidArgument('p_o must be a distribution over states')
    v1 = policy_value(game, pi1, pi2, 1)
    br1 = best_response_value(game, 1, pi2, tol)
    br2 = best_response_value(game, 2, pi1, tol)
    return float(p_o @ (br1 - v1) + p_o @ (br2 + v1))


def q_target(game: MarkovGame, v: ValueFunction, opponent_policy, player: int) -> QFunction:
    """ q̄(s,a^i) = Σ_b T^i(v)(s,a^i,b) π^-i(b|s) 内循环q迭代追踪的目标 """
    return np.einsum('sab,sb->sa', apply_T(game, v, player), _probs(opponent_policy))


def regret(game: MarkovGame, player: int, policy, opponent_policy,
           p_o=None, tol: float = DEFAULT_TOL) -> float:
    """ max_π̂ U^i(π̂, π^-i) - U^i(π^i, π^-i) """
    p_o = uniform_initial(game.n_states) if p_o is None else np.asarray(p_o, dtype=float)
    pi1, pi2 = (policy, opponent_policy) if player == 1 else (opponent_policy, policy)
    value = policy_value(game, pi1, pi2, player)
    return float(p_o @ (best_response_value(game, player, opponent_policy, tol) - value))


def game_value_pair(game: MarkovGame, tol: float = DEFAULT_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """ (v_*^1, v_*^2) 每次运行只计算一次 """
    return (minimax_value_iteration(game, 1, tol).v_star,
            minimax_value_iteration(game, 2, tol).v_star)


if __name__ == '__main__':
    pennies = MatrixGame([[1, -1], [-1, 1]])
    print(matrix_nash_gap(pennies, [1, 0], [1, 0]))
    result = minimax_value_iteration(pennies.as_markov)
    print(result)
