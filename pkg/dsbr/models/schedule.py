from dataclasses import dataclass
from typing import Optional

from dsbr.utils.errors import InvalidArgument, ScheduleError

SCHEDULE_KINDS = ('constant', 'linear', 'poly')


@dataclass(frozen=True)
class StepsizeSchedule(object):
    """
    α_k = α (constant) | α/(k+h) (linear) | α/(k+h)^z (poly)
    β_k = ratio · α_k  单时间尺度 ratio = c_{α,β} ∈ (0,1)
    """

    kind: str = 'constant'
    alpha: float = 0.1
    ratio: float = 0.5
    h: float = 0.0
    z: Optional[float] = None

    def __post_init__(self):
        if self.kind == 'polynomial':
            object.__setattr__(self, 'kind', 'poly')
        if self.kind not in SCHEDULE_KINDS:
            raise InvalidArgument(
                f'schedule kind must be one of {SCHEDULE_KINDS}, got {self.kind!r}')
        if not self.alpha > 0:
            raise InvalidArgument(f'alpha must be positive, got {self.alpha}')
        if not 0.0 < self.ratio < 1.0:
            raise InvalidArgument(f'ratio must lie in (0, 1), got {self.ratio}')
        if self.h < 0:
            raise InvalidArgument(f'h must be non-negative, got {self.h}')
        if self.kind != 'constant' and self.h == 0:
            raise InvalidArgument(f'{self.kind} schedule needs h > 0 so that alpha_0 is finite')
        if self.kind == 'poly':
            if self.z is None or not 0.0 < self.z < 1.0:
                raise InvalidArgument(f'poly schedule needs z in (0, 1), got {self.z}')

    def alpha_k(self, k: int) -> float:
        if self.kind == 'constant':
            return self.alpha
        if self.kind == 'linear':
            return self.alpha / (k + self.h)
        return self.alpha / (k + self.h) ** self.z

    def beta_k(self, k: int) -> float:
        return self.ratio * self.alpha_k(k)

    def steps(self, k: int):
        """ (α_k, β_k) 超过1时策略或q的更新会离开可行域 """
        alpha_k = self.alpha_k(k)
        beta_k = self.ratio * alpha_k
        if beta_k > 1.0:
            raise ScheduleError(f'beta_{k} = {beta_k} exceeds 1, policy would leave the simplex')
        if alpha_k > 1.0:
            raise ScheduleError(f'alpha_{k} = {alpha_k} exceeds 1, q would leave its bound')
        return alpha_k, beta_k

    def window_sum(self, k: int, window: int) -> float:
        """ α_{k-window, k-1} = Σ_{j=k-window}^{k-1} α_j """
        return sum(self.alpha_k(j) for j in range(max(0, k - window), k))
