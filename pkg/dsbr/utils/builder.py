from importlib import import_module
from typing import Any
from copy import deepcopy

from dsbr.utils.errors import InvalidArgument

PACKAGE = 'dsbr'
# settings 文件中可以只写类名的配置类
CONFIG_CLASSES = {
    'StepsizeSchedule': 'dsbr.models.schedule.StepsizeSchedule',
    'RunConfig': 'dsbr.models.dynamics.RunConfig',
    'GeneratorSpec': 'dsbr.datasets.generator.games.GeneratorSpec',
    'ExperimentSpec': 'dsbr.apis.experiment.ExperimentSpec',
}


def _candidates(module_cls: str):
    if module_cls in CONFIG_CLASSES:
        yield CONFIG_CLASSES[module_cls]
        return
    yield module_cls
    if not module_cls.startswith(PACKAGE + '.'):
        # models.schedule.StepsizeSchedule -> dsbr.models.schedule.StepsizeSchedule
        yield f'{PACKAGE}.{module_cls}'


def _import(path: str):
    parts = path.split('.')
    for module_idx in range(len(parts) - 1, 0, -1):
        # 默认末尾为class 其余为module 逐级向前尝试
        try:
            obj = import_module('.'.join(parts[:module_idx]))
        except ModuleNotFoundError:
            continue
        try:
            for name in parts[module_idx:]:
                obj = getattr(obj, name)
        except AttributeError:
            return None
        return obj
    return None


def import_class(module_cls: str):
    """
    module_cls: 完整路径 dsbr.models.schedule.StepsizeSchedule
                相对dsbr的路径 models.schedule.StepsizeSchedule
                或 CONFIG_CLASSES 中的类名 StepsizeSchedule
    """
    for path in _candidates(module_cls):
        obj = _import(path)
        if obj is not None:
            return obj
    raise ImportError(module_cls)


def build_from_settings(settings: Any, cls='class'):
    """
    递归扫描dict/list 动态导入其中的cls并构建对象 不修改传入的settings。
    >> settings = {"config": {"K": 1000, "schedule": {"class": "StepsizeSchedule", "kind": "linear", ...}}}
    >> build_from_settings(settings)
    {"config": {"K": 1000, "schedule": StepsizeSchedule(kind='linear', ...)}}
    导入或构建失败时抛出 InvalidArgument 并指出所在的键路径
    """
    def _build(node, path):
        if isinstance(node, list):
            return [_build(item, f'{path}[{i}]') for i, item in enumerate(node)]
        if not isinstance(node, dict):
            return node
        for key in node:
            node[key] = _build(node[key], f'{path}.{key}' if path else str(key))
        if cls not in node:
            return node
        name = node.pop(cls)
        where = path or '<root>'
        try:
            factory = import_class(name)
        except ImportError:
            raise InvalidArgument(f'{where}: cannot import {name!r}') from None
        try:
            return factory(**node)
        except TypeError as e:
            raise InvalidArgument(f'{where}: cannot build {name}: {e}') from e
    return _build(deepcopy(settings), '')
