import logging


class DsbrLogger(logging.Logger):

    __logger_name__ = 'dsbr'
    # 并行重复实验时以进程名区分来源
    __console_format__ = '[%(asctime)s] [%(levelname)s] [%(processName)s] %(message)s'
    __console_level__ = 'INFO'

    @classmethod
    def logger(cls) -> 'DsbrLogger':
        if not hasattr(cls, '__logger__'):
            setattr(cls, '__logger__', cls())
        return getattr(cls, '__logger__')

    def __init__(self, **kwargs):
        super().__init__(self.__logger_name__, **kwargs)
        self.console = logging.StreamHandler()
        self.console.setFormatter(
            logging.Formatter(self.__console_format__))
        self.console.setLevel(self.__console_level__)
        self.addHandler(self.console)

    def to_file(self, path, level='DEBUG') -> logging.Handler:
        """ 追加文件输出 返回handler以便调用方移除 """
        handler = logging.FileHandler(path, encoding='utf-8')
        handler.setFormatter(logging.Formatter(self.__console_format__))
        handler.setLevel(level)
        self.addHandler(handler)
        return handler

    def set_console_level(self, level):
        self.console.setLevel(level)


if __name__ == '__main__':
    DsbrLogger.logger().info('test message')
    DsbrLogger.logger().warning('test message')
