#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
SimplicialNormPro 命令行
主程序入口文件
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

# 添加src目录到Python路径
current_dir = Path(__file__).parent
sys.path.insert(0, str(current_dir))

from src.cli.commands import CommandOptions, run
from src.cli.formatter import format_report
from src.core.config_manager import ConfigManager
from src.utils.constants import (
    APP_NAME, CLI_LOG_LEVEL, COMMANDS, EXIT_ERROR, EXIT_INCONCLUSIVE, EXIT_OK, OUTPUT_FORMATS, VERSION,
)
from src.utils.exceptions import InconclusiveError, SimplicialNormError
from src.utils.logger import setup_logger
from src.workspace.models import RunSettings
from src.workspace.parser import parse


def build_parser() -> argparse.ArgumentParser:
    """构建参数解析器"""
    parser = argparse.ArgumentParser(
        prog='simplicialnorm',
        description=f"{APP_NAME} {VERSION}: 多重复形上的精确单纯范数计算",
    )
    parser.add_argument('command', choices=COMMANDS, help='要执行的命令')
    parser.add_argument('inputs', nargs='+', help='输入文件（.mcx）')

    selectors = parser.add_argument_group('选择器')
    selectors.add_argument('--complex')
    selectors.add_argument('--class', dest='class_name')
    selectors.add_argument('--chain', nargs='+')
    selectors.add_argument('--cochain')
    selectors.add_argument('--cochain2')
    selectors.add_argument('--sub')
    selectors.add_argument('--space')
    selectors.add_argument('--simplex')
    selectors.add_argument('--vertices', nargs='+', help='覆叠顶点: <顶点> 或 <元素>@<顶点>')
    selectors.add_argument('--word')
    selectors.add_argument('--datum')
    selectors.add_argument('--glue')
    selectors.add_argument('--action')
    selectors.add_argument('--degree', type=int)
    selectors.add_argument('--relative', nargs='?', const='', help='相对情形；复形命令需给出子复形名')
    selectors.add_argument('--collar')

    settings = parser.add_argument_group('运行设置')
    settings.add_argument('--max-word-length', type=int)
    settings.add_argument('--max-cover-radius', type=int)
    settings.add_argument('--membership-cap', type=int)
    settings.add_argument('--max-paths', type=int)
    settings.add_argument('--epsilon', help='ε 序列: p/q[,p/q...]')
    settings.add_argument('--format', choices=OUTPUT_FORMATS)
    settings.add_argument('--verify-choices', action='store_true', default=None)
    settings.add_argument('--lp-trace', action='store_true', default=None)
    settings.add_argument('--workers', type=int)
    settings.add_argument('--profile', help='配置档 JSON 文件，显式参数优先')

    logging_group = parser.add_argument_group('日志')
    logging_group.add_argument('--log-level', default=CLI_LOG_LEVEL)
    logging_group.add_argument('--log-file')
    return parser


def resolve_settings(args: argparse.Namespace) -> RunSettings:
    """配置档与显式参数合并为运行设置"""
    manager = ConfigManager()
    settings = manager.import_profile(args.profile) if args.profile else RunSettings()
    overrides = {
        name: getattr(args, name)
        for name in ('max_word_length', 'max_cover_radius', 'membership_cap', 'max_paths', 'epsilon',
                     'format', 'verify_choices', 'lp_trace', 'workers')
    }
    return manager.merge(settings, overrides)


def main(argv: Optional[List[str]] = None) -> int:
    """主函数；返回退出码"""
    args = build_parser().parse_args(argv)
    logger = setup_logger(level=args.log_level, log_file=args.log_file)

    try:
        settings = resolve_settings(args)
        workspace = parse(args.inputs, settings)
        report = run(args.command, workspace, settings, CommandOptions.from_namespace(args))
    except InconclusiveError as e:
        logger.warning(f"⚠️ 结果不确定: {e}")
        print(f"INCONCLUSIVE: {e}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except SimplicialNormError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_ERROR
    except FileNotFoundError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_ERROR

    sys.stdout.write(format_report(report, settings.format))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
