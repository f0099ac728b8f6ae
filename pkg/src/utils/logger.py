"""
日志工具模块
报告写到标准输出，日志一律写到标准错误
"""

import logging
import logging.handlers
import sys
from pathlib import Path
from typing import Optional

from .constants import LOG_LEVEL, LOG_FORMAT, LOG_MAX_SIZE, LOG_BACKUP_COUNT

ROOT_LOGGER_NAME = 'src'


def _stderr_handler(level: int) -> logging.Handler:
    # 每次取当前的 sys.stderr，测试替换标准错误后同样生效
    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    return handler


def setup_logger(
    name: Optional[str] = None,
    level: str = LOG_LEVEL,
    log_file: Optional[str] = None
) -> logging.Logger:
    """
    配置包根记录器（或指定名称的记录器）

    重复调用会先移除旧处理器，命令行多次运行时不会叠加输出。

    Args:
        name: 日志记录器名称，默认为包根记录器
        level: 日志级别名，如 "INFO"
        log_file: 可选的轮转日志文件

    Returns:
        配置好的日志记录器
    """
    numeric_level = getattr(logging, level.upper())
    logger = logging.getLogger(name or ROOT_LOGGER_NAME)
    logger.setLevel(numeric_level)

    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()
    logger.addHandler(_stderr_handler(numeric_level))

    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.handlers.RotatingFileHandler(
            log_file, maxBytes=LOG_MAX_SIZE, backupCount=LOG_BACKUP_COUNT, encoding='utf-8'
        )
        file_handler.setLevel(numeric_level)
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(file_handler)

    logger.propagate = False
    logger.debug("🚀 日志系统初始化成功")
    return logger


def get_logger(name: str) -> logging.Logger:
    """
    获取指定名称的日志记录器

    包内模块（src.*）挂在包根记录器下，由 setup_logger 统一配置；
    包外名称在没有处理器时补一个标准错误处理器。
    """
    logger = logging.getLogger(name)
    if name == ROOT_LOGGER_NAME or name.startswith(ROOT_LOGGER_NAME + '.'):
        return logger

    if not logger.handlers:
        level = getattr(logging, LOG_LEVEL)
        logger.addHandler(_stderr_handler(level))
        logger.setLevel(level)
        logger.debug(f"🔧 为模块 {name} 配置日志记录器")
    return logger
