"""
命令行模块
负责命令分派与报告输出
"""
