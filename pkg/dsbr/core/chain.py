"""
策略诱导的马尔可夫链: P_π(s,s') = Σ π¹(a¹|s)π²(a²|s)p(s'|s,a¹,a²)
平稳分布、TV距离、混合时间, 以及两状态例子的解析式。
"""
import math
from dataclasses import dataclass
from functools import reduce
from typing import Optional
import numpy as np
from scipy import linalg
from scipy.sparse import csgraph

from dsbr.core.games import MarkovGame, JointPolicy, check_simplex_rows, _frozen
from dsbr.utils.errors import InvalidArgument, NotErgodicError, MixingCapExceeded

MIXING_CAP = 10 ** 6


@dataclass(frozen=True, eq=False)
class InducedChain(object):

    transition: np.ndarray

    def __post_init__(self):
        transition = _frozen(self.transition)
        if transition.ndim != 2 or transition.shape[0] != transition.shape[1]:
            raise InvalidArgument(
                f'chain transition must be square, got shape {transition.shape}')
        check_simplex_rows(transition, 'chain')
        object.__setattr__(self, 'transition', transition)

    @property
    def n_states(self) -> int:
        return self.transition.shape[0]

    def power(self, k: int) -> np.ndarray:
        return np.linalg.matrix_power(self.transition, k)


def induce_chain(game: MarkovGame, joint: JointPolicy) -> InducedChain:
    joint.check_game(game)
    transition = np.einsum('sa,sb,sabt->st', joint.pi1.probs, joint.pi2.probs, game.transition)
    # 消除浮点误差带来的行和漂移
    transition = transition / transition.sum(axis=1, keepdims=True)
    return InducedChain(transition)


def total_variation(u, v) -> float:
    return 0.5 * float(np.abs(np.asarray(u, dtype=float) - np.asarray(v, dtype=float)).sum())


def is_irreducible(chain: InducedChain) -> bool:
    n_components, _ = csgraph.connected_components(
        (chain.transition > 0).astype(float), directed=True, connection='strong')
    return n_components == 1


def period(chain: InducedChain) -> int:
    """
    不可约链的周期: 从状态0做BFS得到层号level
    period = gcd{ level[u] + 1 - level[v] : 边 u->v }
    """
    adjacency = chain.transition > 0
    level = csgraph.shortest_path(adjacency.astype(float), unweighted=True, indices=0)
    if not np.all(np.isfinite(level)):
        raise NotErgodicError('chain is reducible')
    level = level.astype(int)
    u, v = np.nonzero(adjacency)
    return reduce(math.gcd, (int(d) for d in level[u] + 1 - level[v]), 0)


def check_ergodic(chain: InducedChain):
    if not is_irreducible(chain):
        raise NotErgodicError('chain is reducible (support graph not strongly connected)')
    d = period(chain)
    if d != 1:
        raise NotErgodicError(f'chain is periodic with period {d}')


def stationary_distribution(chain: InducedChain) -> np.ndarray:
    """ 解 (Pᵀ - I)μ = 0 并用 Σμ = 1 替换最后一个方程 """
    check_ergodic(chain)
    n = chain.n_states
    system = chain.transition.T - np.eye(n)
    system[-1] = 1.0
    rhs = np.zeros(n)
    rhs[-1] = 1.0
    mu = linalg.solve(system, rhs)
    return mu / mu.sum()


def mixing_time(chain: InducedChain, eta: float, cap: int = MIXING_CAP) -> int:
    """ t = min{k : max_s TV(P^k(s,·), μ) <= η} 迭代乘幂求得 """
    if not 0.0 < eta < 1.0:
        raise InvalidArgument(f'eta must lie in (0, 1), got {eta}')
    mu = stationary_distribution(chain)
    distribution = np.eye(chain.n_states)
    for k in range(cap + 1):
        if 0.5 * np.abs(distribution - mu).sum(axis=1).max() <= eta:
            return k
        distribution = distribution @ chain.transition
    raise MixingCapExceeded(f'mixing time exceeds cap {cap} (eta={eta})')


def positivity_index(chain: InducedChain) -> int:
    """ r_b = min{k >= 0 : P^k(s,s') > 0 对所有 (s,s')} 用支撑集的布尔乘法迭代 上限|S|² """
    n = chain.n_states
    adjacency = (chain.transition > 0).astype(np.int64)
    support = np.eye(n, dtype=np.int64)
    for k in range(n * n + 1):
        if np.all(support > 0):
            return k
        support = np.minimum(support @ adjacency, 1)
    raise NotErgodicError(f'no power of the chain up to {n * n} is strictly positive')


def uniform_mixing_bound(t_pib_eta: int, delta1: float, delta2: float,
                         mu_b_min: float, r_b: int) -> float:
    """ sup_{π∈Π_δ} t_{π,η} <= t_{π_b,η} / ((δ1δ2)^{r_b} μ_{b,min}) """
    _check_margins(delta1, delta2, mu_b_min, r_b)
    denominator = (delta1 * delta2) ** r_b * mu_b_min
    if denominator == 0.0:
        raise InvalidArgument('mixing bound denominator underflows to zero')
    return t_pib_eta / denominator


def rho_delta(rho_b: float, delta1: float, delta2: float, mu_b_min: float, r_b: int) -> float:
    """ ρ_δ = ρ_b ^ ((δ1δ2)^{r_b} μ_{b,min}) """
    _check_margins(delta1, delta2, mu_b_min, r_b)
    if not 0.0 < rho_b < 1.0:
        raise InvalidArgument(f'rho_b must lie in (0, 1), got {rho_b}')
    return rho_b ** ((delta1 * delta2) ** r_b * mu_b_min)


def stationary_lipschitz_constant(rho: float, n_states: int) -> float:
    """ L̂ = 2 log(8|S|/ρ) / log(1/ρ) """
    if not 0.0 < rho < 1.0:
        raise InvalidArgument(f'rho must lie in (0, 1), got {rho}')
    return 2.0 * math.log(8 * n_states / rho) / math.log(1.0 / rho)


def empirical_lipschitz_ratio(game: MarkovGame, joint_a: JointPolicy, joint_b: JointPolicy) -> float:
    """ ‖μ_π - μ_π'‖_∞ / ‖π - π'‖_∞ 两名玩家的策略差取最大 """
    distance = max(np.abs(joint_a.pi1.probs - joint_b.pi1.probs).max(),
                   np.abs(joint_a.pi2.probs - joint_b.pi2.probs).max())
    if distance == 0.0:
        raise InvalidArgument('policies coincide, ratio is undefined')
    mu_a = stationary_distribution(induce_chain(game, joint_a))
    mu_b = stationary_distribution(induce_chain(game, joint_b))
    return float(np.abs(mu_a - mu_b).max() / distance)


def _check_margins(delta1, delta2, mu_b_min, r_b):
    for name, x in (('delta1', delta1), ('delta2', delta2)):
        if not 0.0 < x <= 1.0:
            raise InvalidArgument(f'{name} must lie in (0, 1], got {x}')
    if not 0.0 < mu_b_min <= 1.0:
        raise InvalidArgument(f'mu_b_min must lie in (0, 1], got {mu_b_min}')
    if r_b < 0:
        raise InvalidArgument(f'r_b must be non-negative, got {r_b}')


# 两状态例子: P1 = I, P2 = 反对角, 每个状态以概率α选动作1

def _check_two_state_alpha(alpha):
    if not 0.5 < alpha < 1.0:
        raise InvalidArgument(f'alpha must lie in (1/2, 1), got {alpha}')


def two_state_chain(alpha: float) -> InducedChain:
    _check_two_state_alpha(alpha)
    return InducedChain([[alpha, 1.0 - alpha], [1.0 - alpha, alpha]])


def two_state_marginal(alpha: float, k: int) -> float:
    """ 从s1出发 k步后处于s1的概率 x_k = 1/2 + (2α-1)^k / 2 """
    _check_two_state_alpha(alpha)
    return 0.5 + (2.0 * alpha - 1.0) ** k / 2.0


def two_state_mixing_lower_bound(alpha: float, eta: float) -> float:
    _check_two_state_alpha(alpha)
    if not 0.0 < eta < 0.5:
        raise InvalidArgument(f'eta must lie in (0, 1/2), got {eta}')
    return math.log(1.0 / (2.0 * eta)) / math.log(1.0 / (2.0 * alpha - 1.0)) - 1.0


def match_two_state(game: MarkovGame, joint: JointPolicy, atol: float = 1e-12) -> Optional[float]:
    """ 输入符合两状态模板时返回α 否则返回None """
    if game.n_states != 2 or game.n_actions != (2, 1):
        return None
    template = np.zeros((2, 2, 1, 2))
    template[0, 0, 0, 0] = template[1, 0, 0, 1] = 1.0
    template[0, 1, 0, 1] = template[1, 1, 0, 0] = 1.0
    if not np.allclose(game.transition, template, rtol=0.0, atol=atol):
        return None
    probs = joint.pi1.probs
    if probs.shape != (2, 2) or not np.allclose(probs[0], probs[1], rtol=0.0, atol=atol):
        return None
    alpha = float(probs[0, 0])
    return alpha if 0.5 < alpha < 1.0 else None


if __name__ == '__main__':
    chain = two_state_chain(0.9)
    print(stationary_distribution(chain), mixing_time(chain, 0.05),
          two_state_mixing_lower_bound(0.9, 0.05))
