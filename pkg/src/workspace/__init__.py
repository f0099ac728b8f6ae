"""
工作区模块
负责输入文件解析与运行设置模型
"""
