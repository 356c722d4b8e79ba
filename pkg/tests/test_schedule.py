import pytest

from dsbr.models.schedule import StepsizeSchedule
from dsbr.utils.errors import InvalidArgument, ScheduleError


def test_constant_schedule():
    schedule = StepsizeSchedule(alpha=0.2, ratio=0.5)
    assert schedule.steps(0) == (0.2, 0.1)
    assert schedule.steps(10 ** 6) == (0.2, 0.1)
    assert schedule.window_sum(10, 3) == pytest.approx(0.6)
    assert schedule.window_sum(2, 5) == pytest.approx(0.4)


def test_linear_schedule():
    schedule = StepsizeSchedule(kind='linear', alpha=5.0, ratio=0.5, h=6.0)
    assert schedule.alpha_k(0) == pytest.approx(5 / 6)
    assert schedule.beta_k(4) == pytest.approx(0.25)
    alphas = [schedule.alpha_k(k) for k in range(100)]
    assert all(a > b for a, b in zip(alphas, alphas[1:]))


def test_poly_schedule():
    schedule = StepsizeSchedule(kind='polynomial', alpha=1.0, ratio=0.5, h=4.0, z=0.5)
    assert schedule.kind == 'poly'
    assert schedule.alpha_k(5) == pytest.approx(1 / 3)
    with pytest.raises(InvalidArgument):
        StepsizeSchedule(kind='poly', alpha=1.0, h=4.0)
    with pytest.raises(InvalidArgument):
        StepsizeSchedule(kind='poly', alpha=1.0, h=4.0, z=1.0)


def test_steps_leaving_feasible_region():
    with pytest.raises(ScheduleError, match='beta_0'):
        StepsizeSchedule(alpha=4.0, ratio=0.5).steps(0)
    with pytest.raises(ScheduleError, match='alpha_0'):
        StepsizeSchedule(alpha=1.5, ratio=0.5).steps(0)
    schedule = StepsizeSchedule(kind='linear', alpha=3.0, ratio=0.5, h=1.0)
    with pytest.raises(ScheduleError):
        schedule.steps(0)
    assert schedule.steps(2) == pytest.approx((1.0, 0.5))


def test_invalid_schedules():
    with pytest.raises(InvalidArgument):
        StepsizeSchedule(kind='cosine')
    with pytest.raises(InvalidArgument):
        StepsizeSchedule(alpha=0.0)
    with pytest.raises(InvalidArgument):
        StepsizeSchedule(ratio=1.0)
    with pytest.raises(InvalidArgument):
        StepsizeSchedule(kind='linear', alpha=1.0)
    with pytest.raises(InvalidArgument):
        StepsizeSchedule(h=-1.0)
