import math
import pytest

from dsbr.core.bounds import theorem_bound, required_names, BOUNDS
from dsbr.utils.errors import InvalidArgument, MissingConstants

MATRIX = {'alpha': 0.1, 'ratio': 0.5, 'K': 1000, 'a_max': 2, 'tau': 0.05, 'h': 10.0, 'z': 0.5}
MARKOV = {'alpha': 0.01, 'ratio': 0.5, 'K': 10 ** 5, 'T': 50, 'h': 10.0, 'z_beta': 20, 'z_K': 20,
          'alpha_k0': 0.01, 'n_states': 3, 'a_max': 2, 'tau': 0.05, 'gamma': 0.6}
ONES = {name: 1.0 for name in ('c1', 'c2', 'c3', 'c_hat1', 'c_hat2', 'c_hat3', 'c_hat4',
                               'c_hat_p1', 'c_hat_p2', 'c_hat_p3', 'L_hat')}


def test_constant_schedule_terms():
    report = theorem_bound('thm1_constant', MATRIX, {'c1': 1.0})
    assert report.terms['E1'] == pytest.approx(3 * 0.975 ** 1000)
    assert report.terms['E2'] == pytest.approx(2 ** 1.5 / 0.5 * 0.1)
    assert report.terms['E3'] == pytest.approx(0.1 * math.log(2))
    assert report.total == pytest.approx(sum(report.terms.values()))


def test_smoothing_bias_survives():
    """ 先让 K 趋于无穷 再让 α 趋于0 只剩下平滑偏差 """
    params = dict(MATRIX, alpha=1e-9, K=10 ** 13)
    report = theorem_bound('thm1_constant', params, {'c1': 1.0})
    assert report.total == pytest.approx(2 * 0.05 * math.log(2), rel=1e-6)


def test_linear_bound_decreasing_in_K():
    params = dict(MATRIX, alpha=5.0)
    totals = [theorem_bound('thm1_linear', dict(params, K=K), {'c2': 1.0}).total
              for K in (10, 100, 1000, 10 ** 4)]
    assert all(a > b for a, b in zip(totals, totals[1:]))
    with pytest.raises(InvalidArgument):
        theorem_bound('thm1_linear', MATRIX, {'c2': 1.0})


def test_poly_bound():
    report = theorem_bound('thm1_poly', MATRIX, {'c3': 2.0})
    assert set(report.terms) == {'E1', 'E2', 'E3'}
    assert report.terms['E2'] == pytest.approx(2.0 * 2 ** 1.5 / 0.5 * 0.1 / 1010 ** 0.5)
    with pytest.raises(InvalidArgument):
        theorem_bound('thm1_poly', dict(MATRIX, z=1.0), {'c3': 1.0})


def test_markov_bounds():
    report = theorem_bound('thm2', MARKOV, ONES)
    assert set(report.terms) == {'E1', 'E2', 'E3', 'E4'}
    assert report.terms['E4'] == pytest.approx(0.05 * math.log(2) / 0.16)
    assert all(value >= 0 for value in report.terms.values())
    report = theorem_bound('thm3', MARKOV, ONES)
    assert set(report.terms) == {'E1', 'E23', 'E4'}
    with pytest.raises(InvalidArgument):
        theorem_bound('thm2', dict(MARKOV, K=10), ONES)
    with pytest.raises(InvalidArgument):
        theorem_bound('thm2', dict(MARKOV, gamma=1.0), ONES)


def test_missing_constants_are_named():
    with pytest.raises(MissingConstants) as info:
        theorem_bound('thm2', MARKOV, {'c_hat1': 1.0, 'c_hat4': None})
    assert info.value.names == ('c_hat2', 'c_hat3', 'c_hat4', 'L_hat')
    with pytest.raises(MissingConstants):
        theorem_bound('thm1_constant', MATRIX, {})


def test_parameter_checks():
    with pytest.raises(InvalidArgument, match='K'):
        theorem_bound('thm1_constant', {'alpha': 0.1, 'ratio': 0.5, 'a_max': 2, 'tau': 0.1}, {'c1': 1.0})
    with pytest.raises(InvalidArgument):
        theorem_bound('thm1_constant', dict(MATRIX, ratio=1.0), {'c1': 1.0})
    with pytest.raises(InvalidArgument):
        required_names('thm4')
    for which in BOUNDS:
        params, constants = required_names(which)
        assert 'tau' in params and constants
