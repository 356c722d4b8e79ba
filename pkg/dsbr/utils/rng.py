from typing import Sequence
import numpy as np

from dsbr.utils.errors import InvalidArgument


class RandomStreams(object):
    """
    单条轨迹的随机源 由seed派生三条互不相关的Philox子流:
    玩家1 玩家2 环境(状态转移)。诊断计算不从这里取随机数。
    """

    def __init__(self, seed: int):
        if seed < 0:
            raise InvalidArgument(f'seed must be non-negative, got {seed}')
        self._seed = int(seed)
        root = np.random.SeedSequence(self._seed)
        p1, p2, env = root.spawn(3)
        self._players = (
            np.random.Generator(np.random.Philox(p1)),
            np.random.Generator(np.random.Philox(p2)),
        )
        self._env = np.random.Generator(np.random.Philox(env))

    @property
    def seed(self): return self._seed

    @property
    def env(self) -> np.random.Generator: return self._env

    def player(self, i: int) -> np.random.Generator:
        assert i in (1, 2)
        return self._players[i - 1]


def sample(rng: np.random.Generator, probs: Sequence[float]) -> int:
    """ 按概率向量采样一个下标 (单次uniform + 累积和) """
    u = rng.random()
    idx = int(np.searchsorted(np.cumsum(probs), u, side='right'))
    return min(idx, len(probs) - 1)


if __name__ == '__main__':
    streams = RandomStreams(7)
    print([sample(streams.player(1), [0.2, 0.8]) for _ in range(10)])
