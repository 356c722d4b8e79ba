"""
多次重复实验: 每次重复一个引擎 种子为 base_seed + i
并行(ProcessPoolExecutor)与串行结果按重复编号收集 输出完全一致。

输出目录:
  replication_000.csv ...   每个检查点一行 列为 DiagnosticsRecord 的字段
  long.csv                  (replication, step, metric, value) 供画图
  summary.json              最终 nash_gap 的均值/标准差 各检查点均值 (rationality 另有 regret)
  run.log
"""
import concurrent.futures
import csv
import dataclasses
import json
import os
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union
import numpy as np

from dsbr.core.games import Game, MatrixGame, MarkovGame, Policy, JointPolicy
from dsbr.core.lyapunov import DiagnosticsRecord
from dsbr.core.oracles import regret
from dsbr.datasets.loader import load_game, load_policy
from dsbr.datasets.generator.games import GeneratorSpec, generate_game, random_policy
from dsbr.models.dynamics import RunConfig, DsbrEngine
from dsbr.utils.errors import InvalidArgument
from dsbr.utils.logger import DsbrLogger

MODES = ('dsbr', 'dsbr-vi', 'rationality')
METRICS = ('nash_gap', 'l_v', 'l_sum', 'l_pi', 'l_q', 'smoothing_bias')


@dataclass
class ExperimentSpec(object):
    """
    game: 博弈文件路径 或 GeneratorSpec (生成种子为 base_seed)
    opponent: rationality 模式下对手策略文件 缺省时以 base_seed 随机生成一个平稳策略
    learner: rationality 模式下学习的玩家
    """

    game: Union[str, GeneratorSpec, dict]
    config: RunConfig = field(default_factory=RunConfig)
    n_replications: int = 1
    base_seed: int = 0
    output: Optional[str] = None
    mode: str = 'dsbr'
    workers: int = 1
    opponent: Optional[str] = None
    learner: int = 1

    def __post_init__(self):
        if isinstance(self.game, dict):
            self.game = GeneratorSpec(**self.game)
        if isinstance(self.config, dict):
            self.config = RunConfig(**self.config)
        if self.mode not in MODES:
            raise InvalidArgument(f'mode must be one of {MODES}, got {self.mode!r}')
        if self.n_replications < 1:
            raise InvalidArgument(f'n_replications must be at least 1, got {self.n_replications}')
        if self.workers < 1:
            raise InvalidArgument(f'workers must be at least 1, got {self.workers}')
        if self.learner not in (1, 2):
            raise InvalidArgument(f'learner must be 1 or 2, got {self.learner}')
        if self.base_seed < 0:
            raise InvalidArgument(f'base_seed must be non-negative, got {self.base_seed}')

    def replication_seed(self, index: int) -> int:
        return self.base_seed + index

    def load_game(self) -> Game:
        if isinstance(self.game, GeneratorSpec):
            return generate_game(self.game, self.base_seed)
        return load_game(self.game)


@dataclass(eq=False)
class ReplicationResult(object):
    index: int
    seed: int
    records: List[DiagnosticsRecord]
    policy: JointPolicy
    values: Tuple[np.ndarray, np.ndarray]
    regret: Optional[float] = None


def run_replication(index: int, seed: int, game: Game, config: RunConfig,
                    opponent: Optional[Tuple[int, Policy]] = None) -> ReplicationResult:
    config = dataclasses.replace(config, seed=seed)
    engine = DsbrEngine(game, config, opponent)
    DsbrLogger.logger().info(f'replication {index} (seed {seed}) started')
    policy, records = engine.run()
    value = None
    if opponent is not None:
        player, opponent_policy = opponent
        markov = game.as_markov if isinstance(game, MatrixGame) else game
        learner = 3 - player
        value = regret(markov, learner, policy.player(learner), opponent_policy,
                       config.p_o, config.tol)
    DsbrLogger.logger().info(
        f'replication {index} finished: nash_gap={records[-1].nash_gap:.6g}'
        + (f' regret={value:.6g}' if value is not None else ''))
    return ReplicationResult(index, seed, records, policy, engine.values, value)


def _opponent(spec: ExperimentSpec, game: Game) -> Tuple[int, Policy]:
    player = 3 - spec.learner
    n_states = game.n_states if isinstance(game, MarkovGame) else 1
    if spec.opponent is not None:
        return player, load_policy(spec.opponent, game).player(player)
    n_actions = game.n_actions[player - 1]
    return player, random_policy(n_states, n_actions, np.random.default_rng(spec.base_seed))


def _check_mode(spec: ExperimentSpec, game: Game):
    if spec.mode == 'dsbr' and not isinstance(game, MatrixGame):
        raise InvalidArgument('mode dsbr needs a matrix game')
    if spec.mode == 'dsbr-vi' and not isinstance(game, MarkovGame):
        raise InvalidArgument('mode dsbr-vi needs a Markov game')


def run_replications(spec: ExperimentSpec, game: Game) -> List[ReplicationResult]:
    opponent = _opponent(spec, game) if spec.mode == 'rationality' else None
    tasks = [(i, spec.replication_seed(i)) for i in range(spec.n_replications)]
    if spec.workers == 1:
        results = [run_replication(i, seed, game, spec.config, opponent) for i, seed in tasks]
    else:
        with concurrent.futures.ProcessPoolExecutor(spec.workers) as pool:
            futures = [pool.submit(run_replication, i, seed, game, spec.config, opponent)
                       for i, seed in tasks]
            results = [future.result() for future in futures]
    return sorted(results, key=lambda r: r.index)


def _number(value: float) -> Optional[float]:
    """ NaN (未提供常数时的 smoothing_bias) 写成 null 保证输出是严格的JSON """
    value = float(value)
    return None if np.isnan(value) else value


def summarize(spec: ExperimentSpec, results: List[ReplicationResult]) -> dict:
    finals = np.array([r.records[-1].nash_gap for r in results])
    checkpoints = []
    for rows in zip(*(r.records for r in results)):
        entry = {'outer_t': rows[0].outer_t, 'inner_k': rows[0].inner_k}
        for metric in METRICS:
            entry[metric] = _number(np.mean([getattr(row, metric) for row in rows]))
        checkpoints.append(entry)
    summary = {
        'mode': spec.mode,
        'n_replications': len(results),
        'seeds': [r.seed for r in results],
        'final_nash_gap': {'mean': float(finals.mean()), 'std': float(finals.std()),
                           'values': finals.tolist()},
        'checkpoints': checkpoints,
    }
    if spec.mode == 'rationality':
        regrets = np.array([r.regret for r in results])
        summary['regret'] = {'mean': float(regrets.mean()), 'std': float(regrets.std()),
                             'values': regrets.tolist()}
    return summary


def write_replication_csv(result: ReplicationResult, path):
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(DiagnosticsRecord.header())
        for record in result.records:
            writer.writerow(record.as_row())


def write_long_csv(results: List[ReplicationResult], K: int, path):
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(('replication', 'step', 'metric', 'value'))
        for result in results:
            for record in result.records:
                step = record.outer_t * K + record.inner_k
                for metric in METRICS:
                    writer.writerow((result.index, step, metric, getattr(record, metric)))


def run_experiment(spec: ExperimentSpec) -> dict:
    logger = DsbrLogger.logger()
    handler = None
    if spec.output is not None:
        os.makedirs(spec.output, exist_ok=True)
        handler = logger.to_file(os.path.join(spec.output, 'run.log'))
    try:
        game = spec.load_game()
        _check_mode(spec, game)
        logger.info(f'experiment mode={spec.mode} replications={spec.n_replications} '
                    f'base_seed={spec.base_seed} workers={spec.workers}')
        results = run_replications(spec, game)
        summary = summarize(spec, results)
        if spec.output is not None:
            for result in results:
                write_replication_csv(
                    result, os.path.join(spec.output, f'replication_{result.index:03d}.csv'))
            write_long_csv(results, spec.config.K, os.path.join(spec.output, 'long.csv'))
            with open(os.path.join(spec.output, 'summary.json'), 'w', encoding='utf-8') as f:
                json.dump(summary, f, indent=2, allow_nan=False)
        return summary
    finally:
        if handler is not None:
            logger.removeHandler(handler)
            handler.close()
