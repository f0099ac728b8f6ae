"""
报告输出模块
文本模式用 pandas 渲染表格，结构化模式输出排序后的 JSON
"""

import json
from typing import Any, List

import pandas as pd

from ..utils.constants import OUTPUT_FORMATS
from ..utils.exceptions import ConfigurationError
from ..workspace.models import Report

EMPTY_TABLE = '(empty)'


def _scalar(value: Any) -> str:
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, (list, tuple)):
        return ', '.join(_scalar(v) for v in value) or '-'
    return str(value)


def _field_lines(key: str, value: Any) -> List[str]:
    if isinstance(value, dict):
        lines = []
        for sub_key in sorted(value):
            lines.extend(_field_lines(f"{key}.{sub_key}", value[sub_key]))
        return lines or [f"{key}: -"]
    if isinstance(value, list) and value and isinstance(value[0], dict):
        return [f"{key}[{i}]: " + ', '.join(f"{k}={_scalar(v)}" for k, v in sorted(item.items()))
                for i, item in enumerate(value)]
    return [f"{key}: {_scalar(value)}"]


def render_table(rows: List[dict]) -> str:
    """表格按首行的列顺序输出，不带行号"""
    if not rows:
        return EMPTY_TABLE
    frame = pd.DataFrame(rows, columns=list(rows[0].keys()))
    return frame.to_string(index=False)


def format_text(report: Report) -> str:
    lines = [f"command: {report.command}", f"status: {report.status}"]
    for key, value in report.fields.items():
        lines.extend(_field_lines(key, value))
    for name, rows in report.tables.items():
        lines.append('')
        lines.append(f"[{name}]")
        lines.append(render_table(rows))
    return '\n'.join(lines) + '\n'


def format_structured(report: Report) -> str:
    return json.dumps(report.to_dict(), sort_keys=True, ensure_ascii=False, indent=2) + '\n'


def format_report(report: Report, output_format: str = 'text') -> str:
    """按输出格式渲染报告"""
    if output_format not in OUTPUT_FORMATS:
        raise ConfigurationError(f"未知的输出格式: {output_format}")
    if output_format == 'structured':
        return format_structured(report)
    return format_text(report)
