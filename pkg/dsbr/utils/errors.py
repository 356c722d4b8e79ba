class DsbrException(Exception):
    """ 所有异常的父类 """


class ValidationError(DsbrException, ValueError):
    """ 输入不满足约束 (CLI exit 2) """


class InvalidArgument(ValidationError):
    """ 参数取值非法 """


class GameFormatError(ValidationError):
    """ 博弈/策略文件违反类型约束 消息中给出首个违规位置 """


class ScheduleError(ValidationError):
    """ 步长会使策略离开单纯形 或严格模式下定理条件不成立 """


class MissingConstants(ValidationError):
    """ 定理界缺少未给定的常数 """

    def __init__(self, names):
        self.names = tuple(names)
        super().__init__('missing constants: ' + ', '.join(self.names))


class NumericalFailure(DsbrException, ArithmeticError):
    """ 数值计算失败 (CLI exit 3) """


class SolverError(NumericalFailure):
    """ 线性规划求解失败 """


class NotErgodicError(NumericalFailure):
    """ 马尔可夫链不可约或非周期条件不成立 """


class MixingCapExceeded(NumericalFailure):
    """ 混合时间超出搜索上限 """


class InvariantViolation(NumericalFailure):
    """ 迭代过程中的硬约束被破坏 """
