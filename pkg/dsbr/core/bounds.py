"""
收敛定理右端的数值求值。定理中的常数没有给定数值 必须由调用方显式传入
缺少常数时抛出 MissingConstants 不做任何默认填充。

  thm1_constant / thm1_linear / thm1_poly : 矩阵博弈 (E1 收敛偏差, E2 方差, E3 平滑偏差)
  thm2 : 马尔可夫博弈 常数步长 (E1 值迭代偏差, E2 内层收敛偏差, E3 内层方差, E4 平滑偏差)
  thm3 : 马尔可夫博弈 递减步长 (E1, E23, E4)
"""
import math
from dataclasses import dataclass, field
from typing import Dict, Mapping, Tuple

from dsbr.utils.errors import InvalidArgument, MissingConstants

BOUNDS = ('thm1_constant', 'thm1_linear', 'thm1_poly', 'thm2', 'thm3')

_REQUIRED = {
    'thm1_constant': (('alpha', 'ratio', 'K', 'a_max', 'tau'), ('c1',)),
    'thm1_linear': (('alpha', 'ratio', 'K', 'h', 'a_max', 'tau'), ('c2',)),
    'thm1_poly': (('alpha', 'ratio', 'K', 'h', 'z', 'a_max', 'tau'), ('c3',)),
    'thm2': (('alpha', 'ratio', 'K', 'T', 'z_beta', 'n_states', 'a_max', 'tau', 'gamma'),
             ('c_hat1', 'c_hat2', 'c_hat3', 'c_hat4', 'L_hat')),
    'thm3': (('alpha', 'ratio', 'K', 'T', 'h', 'z_K', 'alpha_k0', 'n_states', 'a_max', 'tau', 'gamma'),
             ('c_hat_p1', 'c_hat_p2', 'c_hat_p3', 'L_hat')),
}


@dataclass(frozen=True)
class BoundReport(object):
    which: str
    total: float
    terms: Dict[str, float] = field(default_factory=dict)


def required_names(which: str) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    """ 返回 (参数名, 常数名) """
    if which not in _REQUIRED:
        raise InvalidArgument(f'unknown bound {which!r}, expected one of {BOUNDS}')
    return _REQUIRED[which]


def theorem_bound(which: str, params: Mapping[str, float], constants: Mapping[str, float]) -> BoundReport:
    param_names, constant_names = required_names(which)
    missing = [name for name in param_names if name not in params]
    if missing:
        raise InvalidArgument(f'{which} needs parameters: {", ".join(missing)}')
    absent = [name for name in constant_names if constants.get(name) is None]
    if absent:
        raise MissingConstants(absent)
    p, c = dict(params), dict(constants)
    if not 0.0 < p['ratio'] < 1.0:
        raise InvalidArgument(f'ratio must lie in (0, 1), got {p["ratio"]}')
    if p['tau'] <= 0 or p['alpha'] <= 0:
        raise InvalidArgument('tau and alpha must be positive')
    terms = _EVALUATORS[which](p, c)
    return BoundReport(which, float(sum(terms.values())), terms)


def _thm1_constant(p, c):
    alpha, ratio, a_max = p['alpha'], p['ratio'], p['a_max']
    return {
        'E1': 3.0 * (1.0 - ratio * alpha / 2.0) ** p['K'],
        'E2': c['c1'] * a_max ** 1.5 / ratio * alpha,
        'E3': 2.0 * p['tau'] * math.log(a_max),
    }


def _thm1_linear(p, c):
    alpha, ratio, a_max, h, K = p['alpha'], p['ratio'], p['a_max'], p['h'], p['K']
    if ratio * alpha <= 2.0:
        raise InvalidArgument(f'linear bound needs ratio * alpha > 2, got {ratio * alpha}')
    return {
        'E1': 3.0 * (h / (K + h)) ** (ratio * alpha / 2.0),
        'E2': c['c2'] * a_max ** 1.5 * alpha / (ratio * alpha - 2.0) * alpha / (K + h),
        'E3': 2.0 * p['tau'] * math.log(a_max),
    }


def _thm1_poly(p, c):
    alpha, ratio, a_max, h, K, z = p['alpha'], p['ratio'], p['a_max'], p['h'], p['K'], p['z']
    if not 0.0 < z < 1.0:
        raise InvalidArgument(f'z must lie in (0, 1), got {z}')
    exponent = -alpha * ((K + h) ** (1.0 - z) - h ** (1.0 - z)) / (2.0 * ratio * (1.0 - z))
    return {
        'E1': 3.0 * math.exp(exponent),
        'E2': c['c3'] * a_max ** 1.5 / ratio * alpha / (K + h) ** z,
        'E3': 2.0 * p['tau'] * math.log(a_max),
    }


def _check_gamma(gamma):
    if not 0.0 <= gamma < 1.0:
        raise InvalidArgument(f'gamma must lie in [0, 1), got {gamma}')


def _value_iteration_bias(constant, p):
    s, a_max, tau, gamma, T = p['n_states'], p['a_max'], p['tau'], p['gamma'], p['T']
    return constant * s * a_max * T / (tau * (1.0 - gamma) ** 3) * ((1.0 + gamma) / 2.0) ** (T - 1)


def _thm2(p, c):
    _check_gamma(p['gamma'])
    s, a_max, tau, gamma = p['n_states'], p['a_max'], p['tau'], p['gamma']
    alpha, ratio, K, z_beta = p['alpha'], p['ratio'], p['K'], p['z_beta']
    if K < z_beta:
        raise InvalidArgument(f'bound holds for K >= z_beta, got K={K}, z_beta={z_beta}')
    return {
        'E1': _value_iteration_bias(c['c_hat1'], p),
        'E2': (c['c_hat2'] * (s * a_max) ** 1.5 * (K - z_beta) ** 0.5 / (tau * (1.0 - gamma) ** 5)
               * (1.0 - ratio * alpha / 2.0) ** ((K - z_beta - 1) / 2.0)),
        'E3': (c['c_hat3'] * s ** 2 * a_max ** 2 * c['L_hat'] / (ratio * (1.0 - gamma) ** 5)
               * z_beta ** 2 * alpha ** 0.5),
        'E4': c['c_hat4'] * tau * math.log(a_max) / (1.0 - gamma) ** 2,
    }


def _thm3(p, c):
    _check_gamma(p['gamma'])
    s, a_max, tau, gamma = p['n_states'], p['a_max'], p['tau'], p['gamma']
    alpha, ratio, K, h = p['alpha'], p['ratio'], p['K'], p['h']
    return {
        'E1': _value_iteration_bias(c['c_hat_p1'], p),
        'E23': (c['c_hat_p2'] * s ** 2 * a_max ** 2 * c['L_hat']
                / (p['alpha_k0'] * ratio * (1.0 - gamma) ** 5)
                * p['z_K'] ** 2 * alpha ** 0.5 / (K + h) ** 0.5),
        'E4': c['c_hat_p3'] * tau * math.log(a_max) / (1.0 - gamma) ** 2,
    }


_EVALUATORS = {
    'thm1_constant': _thm1_constant,
    'thm1_linear': _thm1_linear,
    'thm1_poly': _thm1_poly,
    'thm2': _thm2,
    'thm3': _thm3,
}
