"""
博弈/策略文件的读写 (JSON)

  {"type": "matrix", "payoff": [[...]]}
  {"type": "markov", "n_states": N, "n_actions": [m, n], "gamma": g,
   "transition": [s][a1][a2][s'], "reward": [s][a1][a2]}
  策略: {"pi1": [[...]], "pi2": [[...]]} 每个状态一行 矩阵博弈可以直接给向量
"""
import json
from typing import Tuple, Union
import numpy as np

from dsbr.core.games import Game, MatrixGame, MarkovGame, Policy, JointPolicy
from dsbr.utils.errors import GameFormatError


def _require(obj: dict, *keys):
    if not isinstance(obj, dict):
        raise GameFormatError(f'expected a JSON object, got {type(obj).__name__}')
    missing = [key for key in keys if key not in obj]
    if missing:
        raise GameFormatError(f'missing fields: {", ".join(missing)}')


def _array(value, name) -> np.ndarray:
    try:
        return np.array(value, dtype=float)
    except (TypeError, ValueError) as e:
        raise GameFormatError(f'{name} is not a rectangular numeric array: {e}') from e


def _integer(value, name) -> int:
    # bool 是 int 的子类 要单独排除
    if isinstance(value, bool) or not isinstance(value, int):
        raise GameFormatError(f'{name} must be an integer, got {value!r}')
    return value


def _dimensions(obj: dict) -> Tuple[int, Tuple[int, int]]:
    n_states = _integer(obj['n_states'], 'n_states')
    n_actions = obj['n_actions']
    if not isinstance(n_actions, list) or len(n_actions) != 2:
        raise GameFormatError(f'n_actions must be a list of two integers, got {n_actions!r}')
    return n_states, (_integer(n_actions[0], 'n_actions[0]'), _integer(n_actions[1], 'n_actions[1]'))


def _discount(value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise GameFormatError(f'gamma must be a real number, got {value!r}')
    return float(value)


def game_from_object(obj: dict) -> Game:
    _require(obj, 'type')
    if obj['type'] == 'matrix':
        _require(obj, 'payoff')
        return MatrixGame(_array(obj['payoff'], 'payoff'))
    if obj['type'] != 'markov':
        raise GameFormatError(f'unknown game type {obj["type"]!r}')
    _require(obj, 'n_states', 'n_actions', 'gamma', 'transition', 'reward')
    n_states, n_actions = _dimensions(obj)
    gamma = _discount(obj['gamma'])
    reward = _array(obj['reward'], 'reward')
    transition = _array(obj['transition'], 'transition')
    if reward.ndim != 3 or reward.shape != (n_states, *n_actions):
        raise GameFormatError(
            f'reward shape {reward.shape} does not match n_states={n_states}, n_actions={list(n_actions)}')
    return MarkovGame(transition, reward, gamma)


def game_to_object(game: Game) -> dict:
    if isinstance(game, MatrixGame):
        return {'type': 'matrix', 'payoff': game.payoff.tolist()}
    return {
        'type': 'markov',
        'n_states': game.n_states,
        'n_actions': list(game.n_actions),
        'gamma': game.discount,
        'transition': game.transition.tolist(),
        'reward': game.reward.tolist(),
    }


def policy_from_object(obj: dict) -> JointPolicy:
    _require(obj, 'pi1', 'pi2')
    return JointPolicy(Policy(_array(obj['pi1'], 'pi1')), Policy(_array(obj['pi2'], 'pi2')))


def policy_to_object(joint: JointPolicy) -> dict:
    return {'pi1': joint.pi1.probs.tolist(), 'pi2': joint.pi2.probs.tolist()}


def _read(path) -> dict:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise GameFormatError(f'{path}: invalid JSON ({e})') from e


def load_game(path) -> Game:
    return game_from_object(_read(path))


def load_policy(path, game: Union[Game, None] = None) -> JointPolicy:
    joint = policy_from_object(_read(path))
    if game is not None:
        joint.check_game(game)
    return joint


def save_game(game: Game, path):
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(game_to_object(game), f)


def save_policy(joint: JointPolicy, path):
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(policy_to_object(joint), f)
