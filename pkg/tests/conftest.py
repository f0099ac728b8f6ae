"""
pytest配置文件
提供测试fixtures和配置
"""

import sys
import tempfile
from pathlib import Path

import pytest

# 添加项目根目录到测试路径
ROOT_DIR = Path(__file__).parent.parent
sys.path.insert(0, str(ROOT_DIR))

from src.workspace.models import RunSettings
from src.workspace.parser import parse

CORPUS_DIR = ROOT_DIR / "corpus"


def corpus_file(name: str) -> str:
    """语料文件的绝对路径"""
    return str(CORPUS_DIR / name)


def load_corpus(*names: str, settings: RunSettings = None):
    """解析若干语料文件为工作区"""
    return parse([corpus_file(n) for n in names], settings or RunSettings())


@pytest.fixture
def settings():
    """默认运行设置"""
    return RunSettings()


@pytest.fixture
def sphere_workspace():
    """四面体边界与两个平行三角形"""
    return load_corpus('sphere.mcx')


@pytest.fixture
def gluing_workspace():
    """粘合、自粘合、切开与加倍的小例子"""
    return load_corpus('gluing.mcx')


@pytest.fixture
def temp_directory():
    """创建临时目录"""
    with tempfile.TemporaryDirectory() as temp_dir:
        yield Path(temp_dir)


@pytest.fixture
def write_input(temp_directory):
    """把输入文本写成临时 .mcx 文件"""
    def _write(text: str, name: str = 'input.mcx') -> str:
        path = temp_directory / name
        path.write_text(text, encoding='utf-8')
        return str(path)
    return _write
