"""
步长与温度的理论条件检查。
能算的条件给出 ok / violated; 依赖论证中未给定数值常数的条件给出 symbolic 并打印不等式。
"""
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from dsbr.models.schedule import StepsizeSchedule
from dsbr.utils.errors import ScheduleError
from dsbr.utils.logger import DsbrLogger

OK, VIOLATED, SYMBOLIC = 'ok', 'violated', 'symbolic'
CONDITION1_NUMERAL = 512


@dataclass(frozen=True)
class ConditionCheck(object):
    name: str
    status: str
    detail: str


@dataclass
class ConditionReport(object):
    checks: List[ConditionCheck] = field(default_factory=list)

    def add(self, name, status, detail):
        self.checks.append(ConditionCheck(name, status, detail))

    def status(self, name) -> Optional[str]:
        for check in self.checks:
            if check.name == name:
                return check.status
        return None

    @property
    def violated(self) -> List[ConditionCheck]:
        return [c for c in self.checks if c.status == VIOLATED]

    def as_dict(self) -> dict:
        return {c.name: {'status': c.status, 'detail': c.detail} for c in self.checks}

    def enforce(self):
        """ strict_theory 模式: 任意可检查条件不成立即报错 """
        if self.violated:
            raise ScheduleError('violated conditions: ' + '; '.join(
                f'{c.name} ({c.detail})' for c in self.violated))


def _verdict(holds: bool) -> str:
    return OK if holds else VIOLATED


def check_conditions(config, n_actions: Sequence[int], gamma: float = 0.0, n_states: int = 1,
                     c0: Optional[float] = None, c_tau: Optional[float] = None,
                     window: Optional[int] = None) -> ConditionReport:
    """
    config: RunConfig (只用到 schedule 和 tau)
    c0: 比值条件中的数值常数 (矩阵博弈为 c_0, 马尔可夫博弈为 ĉ_0)
    c_tau, window: 带显式常数512的条件 以及窗口和 α_{k-z,k-1} <= 1/4 的窗口长度 z
    """
    from dsbr.models.dynamics import ell_tau

    schedule: StepsizeSchedule = config.schedule
    tau = config.tau
    a_max = max(max(n_actions), 2)
    ratio, alpha = schedule.ratio, schedule.alpha
    matrix = n_states == 1 and gamma == 0.0
    ell = ell_tau(tau, gamma, a_max)
    report = ConditionReport()

    report.add('ratio_range', _verdict(0.0 < ratio < 1.0), f'0 < c = {ratio} < 1')
    alpha_0 = schedule.alpha_k(0)
    report.add('alpha_le_one', _verdict(alpha_0 <= 1.0), f'max_k alpha_k = {alpha_0} <= 1')
    report.add('beta_le_one', _verdict(ratio * alpha_0 <= 1.0),
               f'max_k beta_k = {ratio * alpha_0} <= 1')

    if matrix:
        rhs = ell ** 3 * tau ** 3 / a_max ** 2
        inequality = f'c = {ratio} <= l^3 tau^3 / (c0 A_max^2) = {rhs:.6g} / c0'
    else:
        rhs = c_tau_free = tau ** 3 * ell ** 2 * (1.0 - gamma) ** 2 / (n_states * a_max ** 2)
        inequality = f'c = {ratio} <= c_tau tau^3 l^2 (1-gamma)^2 / (c0 |S| A_max^2) = c_tau * {c_tau_free:.6g} / c0'
        if c_tau is not None:
            rhs *= c_tau
    if c0 is None or (not matrix and c_tau is None):
        report.add('ratio_bound', SYMBOLIC, inequality + ' (constant unspecified)')
    else:
        report.add('ratio_bound', _verdict(ratio <= rhs / c0), inequality)

    if schedule.kind == 'linear':
        report.add('linear_alpha', _verdict(alpha > 2.0 / ratio),
                   f'alpha = {alpha} > 2 / c = {2.0 / ratio:.6g}')
        if matrix:
            report.add('linear_h', _verdict(schedule.h > alpha), f'h = {schedule.h} > alpha = {alpha}')
    elif schedule.kind == 'poly':
        threshold = (4.0 * schedule.z / (ratio * alpha)) ** (1.0 / (1.0 - schedule.z))
        report.add('poly_h', _verdict(schedule.h >= threshold),
                   f'h = {schedule.h} >= (4z / (c alpha))^(1/(1-z)) = {threshold:.6g}')

    if not matrix:
        bound = c_tau_free * (c_tau if c_tau is not None else 1.0) / CONDITION1_NUMERAL
        if c_tau is None:
            report.add('condition1_ratio', SYMBOLIC,
                       f'c = {ratio} <= c_tau l^2 tau^3 (1-gamma)^2 / ({CONDITION1_NUMERAL} |S| A_max^2)'
                       f' = c_tau * {bound:.6g} (c_tau unspecified)')
        else:
            report.add('condition1_ratio', _verdict(ratio <= bound),
                       f'c = {ratio} <= {bound:.6g}')
        if window is None:
            report.add('condition1_window', SYMBOLIC,
                       'alpha_{k-z,k-1} <= 1/4 (mixing window z unspecified)')
        else:
            total = schedule.window_sum(window, window)
            report.add('condition1_window', _verdict(total <= 0.25),
                       f'alpha_(k-{window},k-1) = {total:.6g} <= 1/4')

    for check in report.checks:
        DsbrLogger.logger().debug(f'condition {check.name}: {check.status} [{check.detail}]')
    return report
