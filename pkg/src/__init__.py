"""
SimplicialNormPro核心包
"""

__version__ = "1.0.0"
__author__ = "开发团队"
__email__ = "dev@example.com"
