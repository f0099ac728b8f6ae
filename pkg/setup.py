#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
SimplicialNormPro - 多重复形上的精确单纯范数、收缩与粘合计算工具
"""

from setuptools import setup, find_packages
import pathlib

HERE = pathlib.Path(__file__).parent
README = (HERE / "README.md").read_text(encoding='utf-8')

setup(
    name="SimplicialNormPro",
    version="1.0.0",
    description="多重复形上的精确单纯范数、收缩与粘合计算工具",
    long_description=README,
    long_description_content_type="text/markdown",
    url="https://github.com/WriterGao/SimplicialNormPro",
    author="WriterGao",
    author_email="mrgao3306@163.com",
    license="MIT",
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    packages=find_packages(include=["src", "src.*"]),
    py_modules=["main"],
    python_requires=">=3.8",
    install_requires=[
        "pandas>=1.5.0",
        "pydantic>=2.0.0",
        "sympy>=1.10",
    ],
    extras_require={
        "dev": [
            "pytest>=7.0.0",
            "hypothesis>=6.0.0",
            "black>=22.0.0",
            "flake8>=4.0.0",
            "mypy>=0.991",
        ]
    },
    entry_points={
        "console_scripts": [
            "simplicialnorm=main:main",
        ],
    },
    package_data={
        "": ["*.json", "*.mcx"],
    },
    include_package_data=True,
    zip_safe=False,
)
