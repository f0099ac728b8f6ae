"""
测试模块包
包含项目的所有测试用例
""" 