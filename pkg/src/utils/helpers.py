"""
辅助函数模块
提供通用的辅助功能
"""

import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence, Tuple

from .constants import SUPPORTED_INPUT_FORMATS, MAX_INPUT_FILE_SIZE
from .exceptions import ConfigurationError

_RATIONAL_RE = re.compile(r'^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$')


def validate_input_file(file_path: str) -> bool:
    """
    验证输入文件是否有效

    Args:
        file_path: 文件路径

    Returns:
        文件是否有效

    Raises:
        ConfigurationError: 文件格式不支持或文件过大
        FileNotFoundError: 文件不存在
    """
    file_path_obj = Path(file_path)

    if not file_path_obj.exists():
        raise FileNotFoundError(f"文件不存在: {file_path_obj}")

    if file_path_obj.suffix.lower() not in SUPPORTED_INPUT_FORMATS:
        raise ConfigurationError(
            f"不支持的文件格式: {file_path_obj.suffix}。"
            f"支持的格式: {', '.join(SUPPORTED_INPUT_FORMATS)}"
        )

    file_size = file_path_obj.stat().st_size
    if file_size > MAX_INPUT_FILE_SIZE:
        raise ConfigurationError(
            f"文件大小超限: {file_size / (1024*1024):.1f}MB。"
            f"最大支持: {MAX_INPUT_FILE_SIZE / (1024*1024):.1f}MB"
        )

    return True


def parse_rational(text: Any) -> Fraction:
    """
    将 "p/q"、整数或 Fraction 转换为精确有理数

    Raises:
        ValueError: 文本不是有理数
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if isinstance(text, float):
        raise ValueError(f"拒绝浮点数 {text!r}，请使用 p/q 形式")
    match = _RATIONAL_RE.match(str(text))
    if not match:
        raise ValueError(f"无法将 '{text}' 转换为有理数")
    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) else 1
    if denominator == 0:
        raise ValueError(f"分母为零: '{text}'")
    return Fraction(numerator, denominator)


def format_rational(value: Fraction) -> str:
    """有理数统一输出为 p/q 形式（整数也带 /1）"""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def permutation_sign(order: Sequence[int]) -> int:
    """
    计算排列的符号

    Args:
        order: 0..n-1 的一个排列

    Returns:
        偶排列为 +1，奇排列为 -1
    """
    seen = [False] * len(order)
    sign = 1
    for start in range(len(order)):
        if seen[start]:
            continue
        length = 0
        position = start
        while not seen[position]:
            seen[position] = True
            position = order[position]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def sort_permutation(items: Sequence[Any]) -> Tuple[Tuple[Any, ...], int]:
    """返回排序后的元组以及把原序列排成该顺序的排列符号"""
    order = sorted(range(len(items)), key=lambda i: items[i])
    return tuple(items[i] for i in order), permutation_sign(order)

