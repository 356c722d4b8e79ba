"""
矩阵博弈求值: 稠密单纯形法 + Bland规则。

平移 X' = X - min(X) + 1 > 0 之后 列玩家的问题
    max 1·y  s.t.  X' y <= 1, y >= 0
以松弛变量为初始基即可行 不需要两阶段法;
最优值 z 满足 val(X') = 1/z, 行玩家的最优策略由松弛列的检验数(对偶变量)给出。
"""
from typing import Tuple
import numpy as np

from dsbr.utils.errors import SolverError, InvalidArgument

PIVOT_EPS = 1e-12


def _pivot(tableau: np.ndarray, row: int, col: int):
    tableau[row] /= tableau[row, col]
    for r in range(tableau.shape[0]):
        if r != row and tableau[r, col] != 0.0:
            tableau[r] -= tableau[r, col] * tableau[row]


def solve_packing_lp(a: np.ndarray, max_pivots: int = 10000) -> Tuple[np.ndarray, np.ndarray, float]:
    """
    max 1·y s.t. a y <= 1, y >= 0 (a 的元素全为正)
    返回 (原始解y, 对偶解x, 最优值)
    Bland规则: 进基取下标最小的负检验数 出基在最小比值中取基变量下标最小者
    """
    m, n = a.shape
    # 列: [y_0..y_{n-1}, slack_0..slack_{m-1}, rhs] 最后一行为目标行
    tableau = np.zeros((m + 1, n + m + 1))
    tableau[:m, :n] = a
    tableau[:m, n:n + m] = np.eye(m)
    tableau[:m, -1] = 1.0
    tableau[m, :n] = -1.0
    basis = list(range(n, n + m))

    for _ in range(max_pivots):
        reduced = tableau[m, :-1]
        entering = np.flatnonzero(reduced < -PIVOT_EPS)
        if entering.size == 0:
            break
        col = int(entering[0])
        column = tableau[:m, col]
        rows = np.flatnonzero(column > PIVOT_EPS)
        if rows.size == 0:
            raise SolverError('unbounded packing LP: payoff shift failed')
        ratios = tableau[rows, -1] / column[rows]
        best = ratios.min()
        ties = rows[ratios <= best + PIVOT_EPS * max(1.0, abs(best))]
        row = int(min(ties, key=lambda r: basis[r]))
        _pivot(tableau, row, col)
        basis[row] = col
    else:
        raise SolverError(f'simplex did not terminate within {max_pivots} pivots')

    y = np.zeros(n)
    for r, var in enumerate(basis):
        if var < n:
            y[var] = tableau[r, -1]
    x = tableau[m, n:n + m].copy()
    return np.clip(y, 0.0, None), np.clip(x, 0.0, None), float(tableau[m, -1])


def matrix_game_value(x) -> Tuple[float, np.ndarray, np.ndarray]:
    """
    val(X) = max_μ min_ν μᵀXν
    返回 (value, 行玩家maximin策略, 列玩家minimax策略)
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or min(x.shape) < 1 or not np.all(np.isfinite(x)):
        raise InvalidArgument('payoff must be a finite non-empty matrix')
    shift = 1.0 - x.min()
    y, dual, z = solve_packing_lp(x + shift)
    if z <= 0 or y.sum() <= 0 or dual.sum() <= 0:
        raise SolverError(f'degenerate LP solution (objective {z})')
    row_policy = dual / dual.sum()
    col_policy = y / y.sum()
    value = 1.0 / z - shift
    # 对偶间隙检查
    lower = float(np.min(row_policy @ x))
    upper = float(np.max(x @ col_policy))
    if upper - lower > 1e-7 * max(1.0, np.abs(x).max()):
        raise SolverError(
            f'LP duality gap {upper - lower:.3e} too large (value {value})')
    return value, row_policy, col_policy


if __name__ == '__main__':
    print(matrix_game_value([[1, -1], [-1, 1]]))
    print(matrix_game_value([[0, 1, -1], [-1, 0, 1], [1, -1, 0]]))
    print(matrix_game_value([[0.3]]))
