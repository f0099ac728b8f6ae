"""
核心计算模块
包含多重复形、链代数、群与正规形、精确线性规划、群作用、覆叠收缩与粘合构造
"""
