#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
基础功能测试
"""

import json
import logging
import sys
from fractions import Fraction

import pytest

from src.core.config_manager import ConfigManager
from src.utils.exceptions import ConfigurationError
from src.utils.helpers import (
    format_rational, parse_rational, permutation_sign, sort_permutation, validate_input_file,
)
from src.utils.logger import setup_logger
from src.workspace.models import RunSettings


class TestHelpers:
    """测试辅助函数"""

    def test_format_rational(self):
        assert format_rational(Fraction(4)) == '4/1'
        assert format_rational(Fraction(0)) == '0/1'
        assert format_rational(Fraction(-1, 2)) == '-1/2'

    def test_parse_rational(self):
        assert parse_rational('3/6') == Fraction(1, 2)
        assert parse_rational(' -2 / 3 ') == Fraction(-2, 3)
        assert parse_rational(5) == Fraction(5)
        assert parse_rational(Fraction(7, 3)) == Fraction(7, 3)

    def test_parse_rational_rejects_floats(self):
        with pytest.raises(ValueError):
            parse_rational(0.5)
        with pytest.raises(ValueError):
            parse_rational('0.5')

    def test_parse_rational_zero_denominator(self):
        with pytest.raises(ValueError):
            parse_rational('1/0')

    def test_permutation_sign(self):
        assert permutation_sign([0, 1, 2]) == 1
        assert permutation_sign([1, 0, 2]) == -1
        assert permutation_sign([1, 2, 0]) == 1

    def test_sort_permutation(self):
        assert sort_permutation([2, 0, 1]) == ((0, 1, 2), 1)
        assert sort_permutation([1, 0]) == ((0, 1), -1)

    def test_validate_input_file(self, write_input, temp_directory):
        assert validate_input_file(write_input("# 空文件\n"))
        with pytest.raises(FileNotFoundError):
            validate_input_file(str(temp_directory / 'missing.mcx'))
        with pytest.raises(ConfigurationError):
            validate_input_file(write_input("", name='data.csv'))


class TestConfigManager:
    """测试配置档管理"""

    def setup_method(self):
        self.manager = ConfigManager()
        self.settings = RunSettings(max_paths=8, epsilon="0,1/2")

    def test_save_load_list_delete(self):
        self.manager.save_profile('tight', self.settings)
        self.manager.save_profile('loose', RunSettings())
        assert self.manager.list_profiles() == ['loose', 'tight']

        loaded = self.manager.load_profile('tight')
        assert loaded.max_paths == 8
        assert loaded.epsilon_schedule == [Fraction(0), Fraction(1, 2)]

        assert self.manager.delete_profile('tight')
        assert not self.manager.delete_profile('tight')
        assert self.manager.list_profiles() == ['loose']

    def test_empty_name(self):
        with pytest.raises(ConfigurationError):
            self.manager.save_profile('  ', self.settings)

    def test_missing_profile(self):
        with pytest.raises(ConfigurationError):
            self.manager.load_profile('nothing')

    def test_export_and_import(self, temp_directory):
        path = temp_directory / 'profiles' / 'tight.json'
        self.manager.save_profile('tight', self.settings)
        self.manager.export_profile('tight', str(path))

        data = json.loads(path.read_text(encoding='utf-8'))
        assert data['name'] == 'tight'
        assert data['settings']['max_paths'] == 8

        other = ConfigManager()
        imported = other.import_profile(str(path))
        assert imported == self.settings
        assert other.list_profiles() == ['tight']

    def test_import_bare_settings(self, temp_directory):
        path = temp_directory / 'bare.json'
        path.write_text(json.dumps({'max_cover_radius': 2}), encoding='utf-8')
        settings = self.manager.import_profile(str(path), name='small')
        assert settings.max_cover_radius == 2
        assert self.manager.list_profiles() == ['small']

    def test_import_invalid(self, temp_directory):
        broken = temp_directory / 'broken.json'
        broken.write_text('{not json', encoding='utf-8')
        with pytest.raises(ConfigurationError):
            self.manager.import_profile(str(broken))

        invalid = temp_directory / 'invalid.json'
        invalid.write_text(json.dumps({'settings': {'format': 'xml'}}), encoding='utf-8')
        with pytest.raises(ConfigurationError):
            self.manager.import_profile(str(invalid))

    def test_merge_ignores_none(self):
        merged = ConfigManager.merge(self.settings, {'max_paths': None, 'max_cover_radius': 1})
        assert merged.max_paths == 8
        assert merged.max_cover_radius == 1

    def test_merge_rejects_invalid(self):
        with pytest.raises(ConfigurationError):
            ConfigManager.merge(self.settings, {'membership_cap': -3})


class TestLogger:
    """测试日志配置"""

    def test_logs_go_to_stderr(self):
        logger = setup_logger(level='DEBUG')
        assert logger.propagate is False
        assert logger.level == logging.DEBUG
        streams = [h.stream for h in logger.handlers if isinstance(h, logging.StreamHandler)]
        assert sys.stderr in streams


if __name__ == "__main__":
    pytest.main([__file__])
