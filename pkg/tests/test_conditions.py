import pytest

from dsbr.models.conditions import check_conditions, OK, VIOLATED, SYMBOLIC
from dsbr.models.dynamics import RunConfig
from dsbr.models.schedule import StepsizeSchedule
from dsbr.utils.errors import ScheduleError


def _config(**schedule):
    return RunConfig(tau=schedule.pop('tau', 0.01), schedule=StepsizeSchedule(**schedule))


def test_constant_schedule_ratio_bound_symbolic():
    report = check_conditions(_config(alpha=0.5, ratio=0.9), (2, 2))
    assert report.status('beta_le_one') == OK
    assert report.status('alpha_le_one') == OK
    assert report.status('ratio_bound') == SYMBOLIC
    assert report.status('linear_alpha') is None
    assert not report.violated
    report.enforce()


def test_ratio_bound_with_constant():
    # ℓ_τ 在 τ=0.01 时极小 任何正的比值都不满足
    report = check_conditions(_config(alpha=0.5, ratio=0.9), (2, 2), c0=1.0)
    assert report.status('ratio_bound') == VIOLATED
    with pytest.raises(ScheduleError, match='ratio_bound'):
        report.enforce()


def test_linear_schedule_conditions():
    report = check_conditions(_config(kind='linear', alpha=5.0, ratio=0.5, h=6.0), (2, 2))
    assert report.status('linear_alpha') == OK
    assert report.status('linear_h') == OK
    report = check_conditions(_config(kind='linear', alpha=3.0, ratio=0.5, h=6.0), (2, 2))
    assert report.status('linear_alpha') == VIOLATED
    report = check_conditions(_config(kind='linear', alpha=5.0, ratio=0.5, h=2.0), (2, 2))
    assert report.status('linear_h') == VIOLATED
    assert report.status('alpha_le_one') == VIOLATED
    assert report.status('beta_le_one') == VIOLATED


def test_poly_schedule_conditions():
    # (4z / (c α))^(1/(1-z)) = (2 / 0.5)^2 = 16
    report = check_conditions(_config(kind='poly', alpha=1.0, ratio=0.5, h=16.0, z=0.5), (3, 3))
    assert report.status('poly_h') == OK
    report = check_conditions(_config(kind='poly', alpha=1.0, ratio=0.5, h=15.0, z=0.5), (3, 3))
    assert report.status('poly_h') == VIOLATED


def test_markov_conditions():
    config = _config(alpha=0.1, ratio=0.5, tau=0.5)
    report = check_conditions(config, (2, 2), gamma=0.5, n_states=3)
    assert report.status('ratio_bound') == SYMBOLIC
    assert report.status('condition1_ratio') == SYMBOLIC
    assert report.status('condition1_window') == SYMBOLIC
    assert report.status('linear_h') is None

    report = check_conditions(config, (2, 2), gamma=0.5, n_states=3, c0=1.0, c_tau=1.0, window=2)
    assert report.status('condition1_window') == OK
    assert report.status('condition1_ratio') == VIOLATED
    assert report.status('ratio_bound') == VIOLATED
    report = check_conditions(config, (2, 2), gamma=0.5, n_states=3, window=3)
    assert report.status('condition1_window') == VIOLATED


def test_report_serialization():
    report = check_conditions(_config(alpha=0.5, ratio=0.9), (2, 2))
    as_dict = report.as_dict()
    assert set(as_dict) == {'ratio_range', 'alpha_le_one', 'beta_le_one', 'ratio_bound'}
    assert as_dict['ratio_bound']['status'] == SYMBOLIC
    assert 'c0' in as_dict['ratio_bound']['detail']
