"""
工作区数据模型
运行设置（pydantic）、报告以及解析后的工作区
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, field_validator

from ..core.actions import SimplicialAction
from ..core.algebra import Chain, Cochain
from ..core.cover import CoverCaps, GluedSpace
from ..core.glue import GlueMap, GlueResult
from ..core.groups import GroupOracle, Subgroup
from ..core.mcx import EdgeLabeling, Multicomplex, SubcomplexMask
from ..core.normal_forms import AMALGAM, HNN, GroupDatum, Syllable
from ..utils.constants import (
    DEFAULT_MAX_COVER_RADIUS, DEFAULT_MAX_PATHS, DEFAULT_MAX_WORD_LENGTH, DEFAULT_MEMBERSHIP_CAP,
    DEFAULT_OUTPUT_FORMAT, DEFAULT_WORKERS, OUTPUT_FORMATS, STATUS_OK,
)
from ..utils.exceptions import UnresolvedReferenceError
from ..utils.helpers import format_rational, parse_rational


class RunSettings(BaseModel):
    """一次运行的上限与输出设置"""
    max_word_length: int = DEFAULT_MAX_WORD_LENGTH
    max_cover_radius: int = DEFAULT_MAX_COVER_RADIUS
    membership_cap: int = DEFAULT_MEMBERSHIP_CAP
    max_paths: int = DEFAULT_MAX_PATHS
    epsilon: List[str] = ['0/1']
    format: str = DEFAULT_OUTPUT_FORMAT
    verify_choices: bool = False
    lp_trace: bool = False
    workers: int = DEFAULT_WORKERS

    @field_validator('max_word_length', 'max_cover_radius', 'membership_cap', 'max_paths', 'workers')
    @classmethod
    def _non_negative(cls, value: int) -> int:
        if value < 0:
            raise ValueError(f"上限不能为负: {value}")
        return value

    @field_validator('epsilon', mode='before')
    @classmethod
    def _exact_epsilon(cls, value: Any) -> List[str]:
        if isinstance(value, str):
            value = [part for part in value.split(',') if part.strip()]
        result = []
        for item in value:
            epsilon = parse_rational(item)
            if epsilon < 0:
                raise ValueError(f"ε 不能为负: {item}")
            result.append(format_rational(epsilon))
        return result

    @field_validator('format')
    @classmethod
    def _known_format(cls, value: str) -> str:
        if value not in OUTPUT_FORMATS:
            raise ValueError(f"未知的输出格式: {value}")
        return value

    @property
    def epsilon_schedule(self) -> List[Fraction]:
        return [parse_rational(e) for e in self.epsilon]

    def cover_caps(self) -> CoverCaps:
        return CoverCaps(
            max_cover_radius=self.max_cover_radius,
            max_word_length=self.max_word_length,
            max_paths=self.max_paths,
            verify_choices=self.verify_choices,
        )


@dataclass
class Report:
    """命令报告：有序字段加若干命名表格"""
    command: str
    status: str = STATUS_OK
    fields: Dict[str, Any] = field(default_factory=dict)
    tables: Dict[str, List[Dict[str, str]]] = field(default_factory=dict)

    def add(self, key: str, value: Any) -> 'Report':
        self.fields[key] = value
        return self

    def add_table(self, name: str, rows: List[Dict[str, str]]) -> 'Report':
        self.tables[name] = rows
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {
            'command': self.command,
            'status': self.status,
            'fields': self.fields,
            'tables': self.tables,
        }


@dataclass
class LabelSpec:
    name: str
    datum: str
    complex: str
    labeling: EdgeLabeling


@dataclass
class SpaceSpec:
    """space 声明；真正的粘合空间在运行时按上限构建"""
    name: str
    mode: str
    complex: str
    datum: str
    labels: str
    masks: Dict[str, str] = field(default_factory=dict)
    vertex_map: List[Tuple[str, str]] = field(default_factory=list)
    relative: Optional[str] = None
    base: Optional[str] = None
    action: Optional[str] = None
    line: int = 0


@dataclass
class Workspace:
    """解析后的全部对象；名字在各自的命名空间内唯一"""
    complexes: Dict[str, Multicomplex] = field(default_factory=dict)
    masks: Dict[str, Dict[str, SubcomplexMask]] = field(default_factory=dict)
    groups: Dict[str, GroupOracle] = field(default_factory=dict)
    subgroups: Dict[str, Subgroup] = field(default_factory=dict)
    data: Dict[str, GroupDatum] = field(default_factory=dict)
    labelings: Dict[str, LabelSpec] = field(default_factory=dict)
    spaces: Dict[str, SpaceSpec] = field(default_factory=dict)
    glues: Dict[str, GlueResult] = field(default_factory=dict)
    glue_sources: Dict[str, Tuple[str, ...]] = field(default_factory=dict)
    actions: Dict[str, SimplicialAction] = field(default_factory=dict)
    chains: Dict[str, Chain] = field(default_factory=dict)
    cochains: Dict[str, Cochain] = field(default_factory=dict)
    words: Dict[str, Tuple[str, List[Syllable]]] = field(default_factory=dict)
    sources: List[str] = field(default_factory=list)
    _built: Dict[Tuple[str, CoverCaps], GluedSpace] = field(default_factory=dict, repr=False)

    @staticmethod
    def _lookup(table: Dict[str, Any], name: str, kind: str) -> Any:
        try:
            return table[name]
        except KeyError:
            raise UnresolvedReferenceError(f"未声明的{kind}: {name}")

    def complex(self, name: str) -> Multicomplex:
        return self._lookup(self.complexes, name, '复形')

    def mask(self, complex_name: str, name: str) -> SubcomplexMask:
        self.complex(complex_name)
        return self._lookup(self.masks.get(complex_name, {}), name, f'子复形（{complex_name}）')

    def group(self, name: str) -> GroupOracle:
        return self._lookup(self.groups, name, '群')

    def subgroup(self, name: str) -> Subgroup:
        return self._lookup(self.subgroups, name, '子群')

    def datum(self, name: str) -> GroupDatum:
        return self._lookup(self.data, name, '群数据')

    def labeling(self, name: str) -> LabelSpec:
        return self._lookup(self.labelings, name, '边标签')

    def space_spec(self, name: str) -> SpaceSpec:
        return self._lookup(self.spaces, name, '粘合空间')

    def action(self, name: str) -> SimplicialAction:
        return self._lookup(self.actions, name, '群作用')

    def chain(self, name: str) -> Chain:
        return self._lookup(self.chains, name, '链')

    def cochain(self, name: str) -> Cochain:
        return self._lookup(self.cochains, name, '上链')

    def word(self, name: str) -> Tuple[str, List[Syllable]]:
        return self._lookup(self.words, name, '词')

    def glue(self, name: str) -> GlueResult:
        return self._lookup(self.glues, name, '粘合结果')

    def build_space(self, name: str, caps: CoverCaps) -> GluedSpace:
        """按给定上限构建（并缓存）粘合空间"""
        key = (name, caps)
        if key in self._built:
            return self._built[key]
        spec = self.space_spec(name)
        complex_ = self.complex(spec.complex)
        datum = self.datum(spec.datum)
        labels = self.labeling(spec.labels)
        if labels.complex != spec.complex:
            raise UnresolvedReferenceError(
                f"边标签 {labels.name} 属于复形 {labels.complex}，不是 {spec.complex}"
            )
        relative = self.mask(spec.complex, spec.relative) if spec.relative else None
        base = complex_.vertex_id(spec.base) if spec.base else None

        if spec.mode == AMALGAM:
            space = GluedSpace.amalgam(
                complex_, datum, labels.labeling,
                self.mask(spec.complex, spec.masks['K']),
                self.mask(spec.complex, spec.masks['L']),
                self.mask(spec.complex, spec.masks['A']),
                base=base, relative=relative, caps=caps, name=spec.name,
            )
            if spec.action:
                space.attach_action(self.action(spec.action))
        else:
            a1 = self.mask(spec.complex, spec.masks['A1'])
            a2 = self.mask(spec.complex, spec.masks['A2'])
            vertex_map = {complex_.vertex_id(v): complex_.vertex_id(w) for v, w in spec.vertex_map}
            glue_map = GlueMap(complex_, a1, complex_, a2, vertex_map)
            space = GluedSpace.hnn(
                complex_, datum, labels.labeling, a1, a2, glue_map,
                base=None, relative=relative, caps=caps, name=spec.name,
            )
            if spec.base:
                space = GluedSpace.hnn(
                    complex_, datum, labels.labeling, a1, a2, glue_map,
                    base=space.complex.vertex_id(spec.base), relative=relative, caps=caps,
                    name=spec.name,
                )
        self._built[key] = space
        return space


__all__ = [
    'AMALGAM', 'HNN', 'LabelSpec', 'Report', 'RunSettings', 'SpaceSpec', 'Workspace',
]
