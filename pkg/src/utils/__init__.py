"""
工具模块包
包含日志、异常、常量、有理数格式等工具函数
"""
