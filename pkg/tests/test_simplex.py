import itertools
import numpy as np
import pytest
from scipy.optimize import linprog

from dsbr.core.simplex import matrix_game_value, solve_packing_lp
from dsbr.utils.errors import InvalidArgument


def _linprog_value(x):
    """ max v s.t. μᵀX >= v, μ在单纯形上 """
    m, n = x.shape
    cost = np.zeros(m + 1)
    cost[-1] = -1.0
    a_ub = np.hstack([-x.T, np.ones((n, 1))])
    a_eq = np.hstack([np.ones((1, m)), np.zeros((1, 1))])
    result = linprog(cost, A_ub=a_ub, b_ub=np.zeros(n), A_eq=a_eq, b_eq=[1.0],
                     bounds=[(0, None)] * m + [(None, None)], method='highs')
    assert result.success
    return -result.fun


def _assert_equilibrium(x, value, row, col, atol=1e-9):
    assert row.sum() == pytest.approx(1.0) and np.all(row >= 0)
    assert col.sum() == pytest.approx(1.0) and np.all(col >= 0)
    assert np.min(row @ x) == pytest.approx(value, abs=atol)
    assert np.max(x @ col) == pytest.approx(value, abs=atol)


def test_known_values():
    value, row, col = matrix_game_value([[1.0, -1.0], [-1.0, 1.0]])
    assert value == pytest.approx(0.0, abs=1e-12)
    assert row == pytest.approx([0.5, 0.5]) and col == pytest.approx([0.5, 0.5])
    value, row, col = matrix_game_value([[0, -1, 1], [1, 0, -1], [-1, 1, 0]])
    assert value == pytest.approx(0.0, abs=1e-12)
    assert row == pytest.approx([1 / 3] * 3)
    assert matrix_game_value([[0.3]])[0] == pytest.approx(0.3)
    # 鞍点
    assert matrix_game_value([[0.5, 0.8], [-0.5, 0.2]])[0] == pytest.approx(0.5)


def test_all_small_games():
    """ 元素取自 {-1, 0, 1} 的全部 2x2 博弈 """
    for entries in itertools.product((-1.0, 0.0, 1.0), repeat=4):
        x = np.array(entries).reshape(2, 2)
        value, row, col = matrix_game_value(x)
        _assert_equilibrium(x, value, row, col)
        assert x.min() - 1e-12 <= value <= x.max() + 1e-12


def test_against_linprog(rng):
    for _ in range(100):
        m, n = rng.integers(1, 6, size=2)
        x = rng.uniform(-1, 1, (m, n))
        value, row, col = matrix_game_value(x)
        assert value == pytest.approx(_linprog_value(x), abs=1e-7)
        _assert_equilibrium(x, value, row, col, atol=1e-8)


def test_shift_and_monotonicity(rng):
    for _ in range(50):
        x = rng.uniform(-1, 1, (3, 4))
        c = rng.uniform(-2, 2)
        value = matrix_game_value(x)[0]
        assert matrix_game_value(x + c)[0] == pytest.approx(value + c, abs=1e-9)
        y = x + rng.uniform(0, 0.5, x.shape)
        assert matrix_game_value(y)[0] >= value - 1e-9
        # 列玩家视角
        assert matrix_game_value(-x.T)[0] == pytest.approx(-value, abs=1e-9)


def test_packing_lp():
    y, x, z = solve_packing_lp(np.array([[2.0, 1.0], [1.0, 3.0]]))
    assert z == pytest.approx(0.6)
    assert y == pytest.approx([0.4, 0.2])
    assert x == pytest.approx([0.4, 0.2])


def test_rejects_bad_payoff():
    with pytest.raises(InvalidArgument):
        matrix_game_value(np.zeros((0, 3)))
    with pytest.raises(InvalidArgument):
        matrix_game_value([[np.nan, 0.0]])
