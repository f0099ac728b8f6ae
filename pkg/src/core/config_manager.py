"""
配置管理模块
负责运行设置配置档的保存、加载和管理
"""

import json
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import ValidationError as PydanticValidationError

from ..utils.constants import DEFAULT_PROFILE_NAME
from ..utils.exceptions import ConfigurationError
from ..utils.logger import get_logger
from ..workspace.models import RunSettings


class ConfigManager:
    """配置档管理器：名字到 RunSettings 的映射，可导出为 JSON"""

    def __init__(self):
        self.logger = get_logger(__name__)
        self.profiles: Dict[str, RunSettings] = {}
        self.updated: Dict[str, datetime] = {}

    def save_profile(self, name: str, settings: RunSettings) -> str:
        """保存配置档（同名覆盖）"""
        if not name or not name.strip():
            raise ConfigurationError("配置档名称不能为空")
        self.profiles[name] = settings.model_copy()
        self.updated[name] = datetime.now()
        self.logger.info(f"保存配置档: {name}")
        return name

    def load_profile(self, name: str) -> RunSettings:
        """加载配置档"""
        settings = self.profiles.get(name)
        if settings is None:
            raise ConfigurationError(f"配置档 {name} 不存在")
        self.logger.info(f"加载配置档: {name}")
        return settings.model_copy()

    def list_profiles(self) -> List[str]:
        return sorted(self.profiles)

    def delete_profile(self, name: str) -> bool:
        """删除配置档"""
        if name in self.profiles:
            del self.profiles[name]
            self.updated.pop(name, None)
            self.logger.info(f"删除配置档: {name}")
            return True
        return False

    def export_profile(self, name: str, file_path: str):
        """导出配置档到文件"""
        settings = self.profiles.get(name)
        if settings is None:
            raise ConfigurationError(f"配置档 {name} 不存在")

        payload = {'name': name, 'settings': settings.model_dump()}
        try:
            path = Path(file_path)
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, 'w', encoding='utf-8') as f:
                json.dump(payload, f, ensure_ascii=False, indent=2, sort_keys=True)
            self.logger.info(f"配置档导出到: {file_path}")
        except OSError as e:
            raise ConfigurationError(f"导出失败: {str(e)}") from e

    def import_profile(self, file_path: str, name: Optional[str] = None) -> RunSettings:
        """
        从文件导入配置档

        文件可以是 export_profile 的输出，也可以直接是设置字典。
        """
        try:
            with open(file_path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigurationError(f"导入失败: {str(e)}") from e

        if not isinstance(data, dict):
            raise ConfigurationError(f"导入失败: {file_path} 不是 JSON 对象")
        raw = data.get('settings', data)
        try:
            settings = RunSettings(**raw)
        except PydanticValidationError as e:
            raise ConfigurationError(f"配置档内容无效: {e}") from e
        except TypeError as e:
            raise ConfigurationError(f"配置档内容无效: {e}") from e

        profile_name = name or data.get('name') or Path(file_path).stem or DEFAULT_PROFILE_NAME
        self.save_profile(profile_name, settings)
        self.logger.info(f"✅ 配置档导入成功: {profile_name}")
        return settings.model_copy()

    @staticmethod
    def merge(settings: RunSettings, overrides: Dict[str, object]) -> RunSettings:
        """显式给出的命令行参数覆盖配置档中的值"""
        values = settings.model_dump()
        values.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return RunSettings(**values)
        except PydanticValidationError as e:
            raise ConfigurationError(f"运行设置无效: {e}") from e
