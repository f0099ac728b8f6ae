"""
输入文件解析模块
把面向行的输入语法解析为 Workspace，所有交叉引用在命令运行前解析完毕
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from ..core.actions import SimplicialAction
from ..core.algebra import Chain, Cochain
from ..core.glue import GlueMap, GlueResult, amalgamated_glue, self_glue
from ..core.groups import DirectProduct, FiniteGroup, FreeGroup, Subgroup
from ..core.mcx import (
    ComplexDeclaration, EdgeLabeling, Multicomplex, SimplexDeclaration, SimplexRef, SubcomplexMask,
    build_multicomplex,
)
from ..core.normal_forms import AMALGAM, HNN, AmalgamDatum, HnnDatum
from ..utils.constants import COMMENT_CHAR
from ..utils.exceptions import (
    InconclusiveError, InvalidElementError, ParseError, SimplicialNormError, UnresolvedReferenceError,
    ValidationError,
)
from ..utils.helpers import parse_rational, validate_input_file
from ..utils.logger import get_logger
from .models import LabelSpec, RunSettings, SpaceSpec, Workspace

SPACE_KEYWORDS = {
    AMALGAM: ('K', 'L', 'A'),
    HNN: ('A1', 'A2'),
}
_OPTIONAL_KEYWORDS = ('rel', 'base', 'action')


@dataclass
class _Token:
    text: str
    column: int


@dataclass
class _Line:
    number: int
    tokens: List[_Token]

    @property
    def head(self) -> str:
        return self.tokens[0].text

    def texts(self, start: int = 0) -> List[str]:
        return [t.text for t in self.tokens[start:]]


@dataclass
class _Block:
    """尚未以 end 结束的块"""
    kind: str
    line: _Line
    args: List[_Token]
    rows: List[_Line] = field(default_factory=list)


def _tokenize(raw: str, number: int) -> Optional[_Line]:
    text = raw.split(COMMENT_CHAR, 1)[0]
    tokens = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        j = i
        while j < len(text) and not text[j].isspace():
            j += 1
        tokens.append(_Token(text[i:j], i + 1))
        i = j
    return _Line(number, tokens) if tokens else None


class WorkspaceParser:
    """
    输入语法解析器

    顶层声明逐行处理；complex / group finite / labels / action 为块，以 end 结束。
    多个文件按顺序解析到同一个工作区，后面的文件可以引用前面的名字。
    """

    def __init__(self, settings: Optional[RunSettings] = None):
        self.logger = get_logger(__name__)
        self.settings = settings or RunSettings()
        self.workspace = Workspace()
        self._source = ''
        self._block: Optional[_Block] = None
        self._handlers: Dict[str, Callable[[_Line], None]] = {
            'complex': self._open_block,
            'group': self._group,
            'subgroup': self._subgroup,
            'amalgam': self._amalgam,
            'hnn': self._hnn,
            'labels': self._open_block,
            'space': self._space,
            'glue': self._glue,
            'selfglue': self._selfglue,
            'action': self._open_block,
            'chain': self._chain,
            'cochain': self._cochain,
            'word': self._word,
        }

    # ------------------------------------------------------------------
    # 入口
    # ------------------------------------------------------------------

    def parse_files(self, paths: Sequence[str]) -> Workspace:
        for path in paths:
            validate_input_file(path)
            text = Path(path).read_text(encoding='utf-8')
            self.parse_text(text, str(path))
        return self.workspace

    def parse_text(self, text: str, source: str = '<input>') -> Workspace:
        self._source = source
        self._block = None
        self.logger.info(f"📖 开始解析 {source}")
        for number, raw in enumerate(text.splitlines(), start=1):
            line = _tokenize(raw, number)
            if line is None:
                continue
            self._dispatch(line)
        if self._block is not None:
            raise self._error(f"块 {self._block.kind} 缺少 end", self._block.line)
        self.workspace.sources.append(source)
        self.logger.info(
            f"✅ {source} 解析完成: {len(self.workspace.complexes)} 个复形, "
            f"{len(self.workspace.groups)} 个群, {len(self.workspace.spaces)} 个粘合空间"
        )
        return self.workspace

    # ------------------------------------------------------------------
    # 诊断
    # ------------------------------------------------------------------

    def _error(self, message: str, line: _Line, token: Optional[_Token] = None) -> ParseError:
        column = token.column if token else line.tokens[0].column
        return ParseError(message, line.number, column, self._source)

    def _unresolved(self, message: str, line: _Line, token: _Token) -> UnresolvedReferenceError:
        return UnresolvedReferenceError(message, line.number, token.column, self._source)

    def _dispatch(self, line: _Line):
        try:
            if self._block is not None:
                self._block_line(line)
                return
            handler = self._handlers.get(line.head)
            if handler is None:
                raise self._error(f"未知的声明 {line.head}", line)
            handler(line)
        except (ParseError, InconclusiveError):
            raise
        except SimplicialNormError as e:
            self.logger.error(f"❌ {self._source}:{line.number} 校验失败: {e}")
            raise ValidationError(f"{self._source}:{line.number}: {e}") from e

    def _expect(self, line: _Line, count: int, usage: str):
        if len(line.tokens) < count:
            raise self._error(f"参数不足，用法: {usage}", line)

    def _int(self, line: _Line, token: _Token) -> int:
        try:
            return int(token.text)
        except ValueError:
            raise self._error(f"需要整数: {token.text}", line, token)

    def _rational(self, line: _Line, token: _Token):
        try:
            return parse_rational(token.text)
        except ValueError:
            raise self._error(f"需要有理数 p/q: {token.text}", line, token)

    def _fresh(self, table: Dict[str, Any], line: _Line, token: _Token, kind: str) -> str:
        if token.text in table:
            raise self._error(f"{kind} {token.text} 重复声明", line, token)
        return token.text

    def _resolve(self, table: Dict[str, Any], line: _Line, token: _Token, kind: str) -> Any:
        if token.text not in table:
            raise self._unresolved(f"未声明的{kind}: {token.text}", line, token)
        return table[token.text]

    def _mask(self, complex_name: str, line: _Line, token: _Token) -> SubcomplexMask:
        return self._resolve(self.workspace.masks.get(complex_name, {}), line, token, f'子复形（{complex_name}）')

    def _simplex(self, complex_: Multicomplex, line: _Line, token: _Token) -> SimplexRef:
        if not complex_.has_id(token.text):
            raise self._unresolved(f"复形 {complex_.name} 中没有单形 {token.text}", line, token)
        return complex_.by_id(token.text)

    def _vertex(self, complex_: Multicomplex, line: _Line, token: _Token, name: str) -> int:
        if name not in complex_.vertex_names:
            raise self._unresolved(f"复形 {complex_.name} 中没有顶点 {name}", line, token)
        return complex_.vertex_id(name)

    def _pairs(self, line: _Line, tokens: Sequence[_Token]) -> List[Tuple[_Token, str, str]]:
        pairs = []
        for token in tokens:
            left, sep, right = token.text.partition(':')
            if not sep or not left or not right:
                raise self._error(f"映射项必须写成 v:w: {token.text}", line, token)
            pairs.append((token, left, right))
        return pairs

    # ------------------------------------------------------------------
    # 块
    # ------------------------------------------------------------------

    def _open_block(self, line: _Line):
        usage = {
            'complex': 'complex <name>',
            'labels': 'labels <name> <datum> <complex>',
            'action': 'action <name> <complex> <group>',
        }[line.head]
        self._expect(line, len(usage.split()), usage)
        self._block = _Block(line.head, line, line.tokens[1:])

    def _block_line(self, line: _Line):
        block = self._block
        if line.head != 'end':
            block.rows.append(line)
            return
        self._block = None
        if block.kind == 'complex':
            self._finish_complex(block)
        elif block.kind == 'finite':
            self._finish_finite_group(block)
        elif block.kind == 'labels':
            self._finish_labels(block)
        elif block.kind == 'action':
            self._finish_action(block)

    def _finish_complex(self, block: _Block):
        name_token = block.args[0]
        name = self._fresh(self.workspace.complexes, block.line, name_token, '复形')
        declaration = ComplexDeclaration(name)
        seen: Dict[str, int] = {}
        mask_rows: List[_Line] = []

        for row in block.rows:
            if row.head == 'vertex':
                self._expect(row, 2, 'vertex <v> [<v> ...]')
                for token in row.tokens[1:]:
                    if token.text in seen:
                        raise self._error(f"编号重复: {token.text}（第 {seen[token.text]} 行已声明）", row, token)
                    seen[token.text] = row.number
                    declaration.vertices.append(token.text)
            elif row.head == 'simplex':
                declaration.simplices.append(self._simplex_declaration(row, seen))
            elif row.head in ('sub', 'closure'):
                self._expect(row, 3, f'{row.head} <name> <id> [<id> ...]')
                mask_rows.append(row)
            else:
                raise self._error(f"complex 块中不允许 {row.head}", row)

        complex_ = build_multicomplex(declaration)
        masks: Dict[str, SubcomplexMask] = {}
        for row in mask_rows:
            mask_name = self._fresh(masks, row, row.tokens[1], '子复形')
            members = [self._simplex(complex_, row, t) for t in row.tokens[2:]]
            if row.head == 'sub':
                try:
                    masks[mask_name] = SubcomplexMask.from_members(complex_, members, mask_name)
                except SimplicialNormError as e:
                    raise self._error(str(e), row, row.tokens[1]) from e
            else:
                masks[mask_name] = SubcomplexMask.closure(complex_, members, mask_name)

        self.workspace.complexes[name] = complex_
        self.workspace.masks[name] = masks
        self.logger.debug(f"复形 {name}: {len(masks)} 个子复形")

    def _simplex_declaration(self, row: _Line, seen: Dict[str, int]) -> SimplexDeclaration:
        usage = 'simplex <dim> <id> <v0> ... <vdim> [copy <k>] [faces <id0> ... <iddim>]'
        self._expect(row, 4, usage)
        dim = self._int(row, row.tokens[1])
        if dim < 1:
            raise self._error(f"单形维数至少为 1: {dim}", row, row.tokens[1])
        sid_token = row.tokens[2]
        if sid_token.text in seen:
            raise self._error(
                f"单形编号重复: {sid_token.text}（第 {seen[sid_token.text]} 行已声明）", row, sid_token
            )
        rest = row.tokens[3:]
        if len(rest) < dim + 1:
            raise self._error(f"{dim} 维单形需要 {dim + 1} 个顶点", row, sid_token)
        vertices = tuple(t.text for t in rest[:dim + 1])
        rest = rest[dim + 1:]

        copy = None
        faces = None
        while rest:
            keyword = rest[0]
            if keyword.text == 'copy':
                if len(rest) < 2:
                    raise self._error("copy 后缺少副本序号", row, keyword)
                copy = self._int(row, rest[1])
                rest = rest[2:]
            elif keyword.text == 'faces':
                if len(rest) < dim + 2:
                    raise self._error(f"faces 需要 {dim + 1} 个编号", row, keyword)
                faces = tuple(t.text for t in rest[1:dim + 2])
                rest = rest[dim + 2:]
            else:
                raise self._error(f"多余的参数 {keyword.text}", row, keyword)

        seen[sid_token.text] = row.number
        return SimplexDeclaration(sid_token.text, vertices, copy, faces, row.number)

    def _finish_finite_group(self, block: _Block):
        name = block.args[0].text
        order = self._int(block.line, block.args[2])
        table = []
        for row in block.rows:
            if row.head != 'row':
                raise self._error(f"有限群块中只允许 row: {row.head}", row)
            values = [self._int(row, t) for t in row.tokens[1:]]
            if len(values) != order:
                raise self._error(f"乘法表的行需要 {order} 个元素", row)
            table.append(values)
        if len(table) != order:
            raise self._error(f"乘法表需要 {order} 行，实际 {len(table)} 行", block.line)
        self.workspace.groups[name] = FiniteGroup(name, table)

    def _finish_labels(self, block: _Block):
        name = self._fresh(self.workspace.labelings, block.line, block.args[0], '边标签')
        datum = self._resolve(self.workspace.data, block.line, block.args[1], '群数据')
        complex_ = self._resolve(self.workspace.complexes, block.line, block.args[2], '复形')
        labels: Dict[SimplexRef, Any] = {}
        for row in block.rows:
            self._expect(row, 2, '<edge-id> <word>')
            edge = self._simplex(complex_, row, row.tokens[0])
            if edge.dim != 1:
                raise self._error(f"{row.head} 不是边", row, row.tokens[0])
            if edge in labels:
                raise self._error(f"边 {row.head} 重复标注", row, row.tokens[0])
            labels[edge] = self._element(datum, row, row.tokens[1:])
        self.workspace.labelings[name] = LabelSpec(
            name, block.args[1].text, block.args[2].text, EdgeLabeling(complex_, datum, labels)
        )

    def _finish_action(self, block: _Block):
        name = self._fresh(self.workspace.actions, block.line, block.args[0], '群作用')
        complex_ = self._resolve(self.workspace.complexes, block.line, block.args[1], '复形')
        group = self._resolve(self.workspace.groups, block.line, block.args[2], '群')
        generator_maps: Dict[Any, Dict[int, int]] = {}
        preserved: List[SubcomplexMask] = []
        for row in block.rows:
            if row.head == 'preserve':
                self._expect(row, 2, 'preserve <sub> [...]')
                preserved.extend(self._mask(block.args[1].text, row, t) for t in row.tokens[1:])
                continue
            if row.head != 'gen':
                raise self._error(f"action 块中只允许 gen 与 preserve: {row.head}", row)
            self._expect(row, 2, 'gen <element> <v:w> [...]')
            element = self._element(group, row, row.tokens[1:2])
            vertex_map = {v: v for v in range(complex_.vertex_count)}
            for token, left, right in self._pairs(row, row.tokens[2:]):
                vertex_map[self._vertex(complex_, row, token, left)] = self._vertex(complex_, row, token, right)
            generator_maps[element] = vertex_map
        self.workspace.actions[name] = SimplicialAction(
            complex_, group, generator_maps, masks=preserved, name=name,
        )

    def _element(self, group: Any, line: _Line, tokens: Sequence[_Token]) -> Any:
        try:
            return group.parse_element(' '.join(t.text for t in tokens))
        except InvalidElementError as e:
            raise self._error(str(e), line, tokens[0]) from e

    # ------------------------------------------------------------------
    # 群
    # ------------------------------------------------------------------

    def _group(self, line: _Line):
        self._expect(line, 3, 'group <name> finite|free|product ...')
        self._fresh(self.workspace.groups, line, line.tokens[1], '群')
        name = line.tokens[1].text
        kind = line.tokens[2].text
        if kind == 'finite':
            self._expect(line, 4, 'group <name> finite <n>')
            self._int(line, line.tokens[3])
            self._block = _Block('finite', line, line.tokens[1:])
        elif kind == 'free':
            self._expect(line, 4, 'group <name> free <g1> [<g2> ...]')
            self.workspace.groups[name] = FreeGroup(name, line.texts(3))
        elif kind == 'product':
            self._expect(line, 5, 'group <name> product <g1> <g2> [...]')
            factors = [self._resolve(self.workspace.groups, line, t, '群') for t in line.tokens[3:]]
            self.workspace.groups[name] = DirectProduct(name, factors)
        else:
            raise self._error(f"未知的群类型 {kind}", line, line.tokens[2])

    def _subgroup(self, line: _Line):
        self._expect(line, 4, 'subgroup <name> <group> <elem> [<elem> ...]')
        name = self._fresh(self.workspace.subgroups, line, line.tokens[1], '子群')
        group = self._resolve(self.workspace.groups, line, line.tokens[2], '群')
        generators = [self._element(group, line, [t]) for t in line.tokens[3:]]
        self.workspace.subgroups[name] = Subgroup(group, generators, name, cap=self.settings.membership_cap)

    def _subgroup_of(self, line: _Line, token: _Token, group: Any) -> Subgroup:
        sub = self._resolve(self.workspace.subgroups, line, token, '子群')
        if sub.group is not group:
            raise self._error(f"子群 {token.text} 不在群 {group.name} 中", line, token)
        return sub

    def _amalgam(self, line: _Line):
        self._expect(line, 6, 'amalgam <name> <groupK> <groupL> <subK> <subL>')
        name = self._fresh(self.workspace.data, line, line.tokens[1], '群数据')
        gk = self._resolve(self.workspace.groups, line, line.tokens[2], '群')
        gl = self._resolve(self.workspace.groups, line, line.tokens[3], '群')
        sub_k = self._subgroup_of(line, line.tokens[4], gk)
        sub_l = self._subgroup_of(line, line.tokens[5], gl)
        self.workspace.data[name] = AmalgamDatum(name, sub_k, sub_l)

    def _hnn(self, line: _Line):
        self._expect(line, 5, 'hnn <name> <groupK> <subA1> <subA2>')
        name = self._fresh(self.workspace.data, line, line.tokens[1], '群数据')
        gk = self._resolve(self.workspace.groups, line, line.tokens[2], '群')
        sub_a1 = self._subgroup_of(line, line.tokens[3], gk)
        sub_a2 = self._subgroup_of(line, line.tokens[4], gk)
        self.workspace.data[name] = HnnDatum(name, sub_a1, sub_a2)

    # ------------------------------------------------------------------
    # 粘合
    # ------------------------------------------------------------------

    def _space(self, line: _Line):
        usage = ('space <name> amalgam|hnn <complex> <datum> <labels> '
                 'K/L/A 或 A1/A2 ... [map <v:w> ...] [rel <sub>] [base <v>] [action <name>]')
        self._expect(line, 6, usage)
        name = self._fresh(self.workspace.spaces, line, line.tokens[1], '粘合空间')
        mode_token = line.tokens[2]
        if mode_token.text not in SPACE_KEYWORDS:
            raise self._error(f"未知的粘合方式 {mode_token.text}", line, mode_token)
        mode = mode_token.text
        complex_name = line.tokens[3].text
        complex_ = self._resolve(self.workspace.complexes, line, line.tokens[3], '复形')
        datum = self._resolve(self.workspace.data, line, line.tokens[4], '群数据')
        labels = self._resolve(self.workspace.labelings, line, line.tokens[5], '边标签')
        if datum.context != mode:
            raise self._error(f"群数据 {datum.name} 不是 {mode} 类型", line, line.tokens[4])
        if labels.complex != complex_name or labels.datum != datum.name:
            raise self._error(
                f"边标签 {labels.name} 声明在 {labels.complex}/{labels.datum} 上", line, line.tokens[5]
            )

        spec = SpaceSpec(name, mode, complex_name, datum.name, labels.name, line=line.number)
        keywords = SPACE_KEYWORDS[mode] + _OPTIONAL_KEYWORDS
        rest = line.tokens[6:]
        while rest:
            keyword = rest[0]
            if keyword.text == 'map' and mode == HNN:
                j = 1
                while j < len(rest) and rest[j].text not in keywords:
                    j += 1
                for token, left, right in self._pairs(line, rest[1:j]):
                    self._vertex(complex_, line, token, left)
                    self._vertex(complex_, line, token, right)
                    spec.vertex_map.append((left, right))
                rest = rest[j:]
                continue
            if keyword.text not in keywords:
                raise self._error(f"未知的关键字 {keyword.text}", line, keyword)
            if len(rest) < 2:
                raise self._error(f"{keyword.text} 后缺少参数", line, keyword)
            value = rest[1]
            if keyword.text == 'base':
                # HNN 的基点在自粘合后的复形中，构建时再检查
                if mode == AMALGAM:
                    self._vertex(complex_, line, value, value.text)
                spec.base = value.text
            elif keyword.text == 'rel':
                self._mask(complex_name, line, value)
                spec.relative = value.text
            elif keyword.text == 'action':
                if mode == HNN:
                    raise self._error("HNN 粘合空间不接受显式群作用", line, keyword)
                action = self._resolve(self.workspace.actions, line, value, '群作用')
                if action.complex is not complex_:
                    raise self._error(f"群作用 {value.text} 不在复形 {complex_name} 上", line, value)
                spec.action = value.text
            else:
                self._mask(complex_name, line, value)
                spec.masks[keyword.text] = value.text
            rest = rest[2:]

        missing = [k for k in SPACE_KEYWORDS[mode] if k not in spec.masks]
        if missing:
            raise self._error(f"缺少 {', '.join(missing)}", line)
        if mode == HNN and not spec.vertex_map:
            raise self._error("HNN 粘合空间需要 map <v:w>", line)
        self.workspace.spaces[name] = spec

    def _glue_map(self, line: _Line, tokens: Sequence[_Token], m1: Multicomplex, a1: SubcomplexMask,
                  m2: Multicomplex, a2: SubcomplexMask) -> GlueMap:
        if not tokens or tokens[0].text != 'map':
            raise self._error("缺少 map <v:w> ...", line)
        vertex_map: Dict[int, int] = {}
        copy_map: Dict[SimplexRef, int] = {}
        rest = list(tokens[1:])
        mode = 'map'
        for token in rest:
            if token.text == 'copy':
                mode = 'copy'
                continue
            (_, left, right), = self._pairs(line, [token])
            if mode == 'map':
                vertex_map[self._vertex(m1, line, token, left)] = self._vertex(m2, line, token, right)
            else:
                source = self._simplex(m1, line, _Token(left, token.column))
                copy_map[source] = self._int(line, _Token(right, token.column))
        return GlueMap(m1, a1, m2, a2, vertex_map, copy_map)

    def _glue(self, line: _Line):
        self._expect(line, 8, 'glue <name> <complex1> <sub1> <complex2> <sub2> map <v:w> [...]')
        name = self._fresh(self.workspace.complexes, line, line.tokens[1], '复形')
        m1 = self._resolve(self.workspace.complexes, line, line.tokens[2], '复形')
        a1 = self._mask(line.tokens[2].text, line, line.tokens[3])
        m2 = self._resolve(self.workspace.complexes, line, line.tokens[4], '复形')
        a2 = self._mask(line.tokens[4].text, line, line.tokens[5])
        f = self._glue_map(line, line.tokens[6:], m1, a1, m2, a2)
        result = amalgamated_glue(m1, a1, m2, a2, f, name)
        self._register_glue(name, result, (m1.name, m2.name))

    def _selfglue(self, line: _Line):
        self._expect(line, 7, 'selfglue <name> <complex> <sub1> <sub2> map <v:w> [...]')
        name = self._fresh(self.workspace.complexes, line, line.tokens[1], '复形')
        m = self._resolve(self.workspace.complexes, line, line.tokens[2], '复形')
        a1 = self._mask(line.tokens[2].text, line, line.tokens[3])
        a2 = self._mask(line.tokens[2].text, line, line.tokens[4])
        f = self._glue_map(line, line.tokens[5:], m, a1, m, a2)
        result = self_glue(m, a1, a2, f, name)
        self._register_glue(name, result, (m.name,))

    def _register_glue(self, name: str, result: GlueResult, sources: Tuple[str, ...]):
        self.workspace.complexes[name] = result.complex
        self.workspace.masks[name] = dict(result.masks)
        self.workspace.glues[name] = result
        self.workspace.glue_sources[name] = sources
        self.logger.debug(f"粘合复形 {name}: f-向量 {result.complex.f_vector()}")

    # ------------------------------------------------------------------
    # 链、上链与词
    # ------------------------------------------------------------------

    def _terms(self, line: _Line, complex_: Multicomplex, dim: int) -> List[Tuple[Any, SimplexRef]]:
        tokens = line.tokens[4:]
        if not tokens or len(tokens) % 2:
            raise self._error("系数与单形编号必须成对出现", line)
        terms = []
        for coeff_token, id_token in zip(tokens[::2], tokens[1::2]):
            simplex = self._simplex(complex_, line, id_token)
            if simplex.dim != dim:
                raise self._error(f"{id_token.text} 的维数是 {simplex.dim}，不是 {dim}", line, id_token)
            terms.append((self._rational(line, coeff_token), simplex))
        return terms

    def _chain(self, line: _Line):
        self._expect(line, 6, 'chain <name> <complex> <dim> <coeff> <id> [...]')
        name = self._fresh(self.workspace.chains, line, line.tokens[1], '链')
        complex_ = self._resolve(self.workspace.complexes, line, line.tokens[2], '复形')
        dim = self._int(line, line.tokens[3])
        self.workspace.chains[name] = Chain.from_terms(complex_, dim, self._terms(line, complex_, dim))

    def _cochain(self, line: _Line):
        self._expect(line, 6, 'cochain <name> <complex> <dim> <value> <id> [...]')
        name = self._fresh(self.workspace.cochains, line, line.tokens[1], '上链')
        complex_ = self._resolve(self.workspace.complexes, line, line.tokens[2], '复形')
        dim = self._int(line, line.tokens[3])
        values: Dict[SimplexRef, Any] = {}
        for value, simplex in self._terms(line, complex_, dim):
            if simplex in values:
                raise self._error(f"上链在 {complex_.label(simplex)} 上重复取值", line)
            values[simplex] = value
        self.workspace.cochains[name] = Cochain(complex_, dim, values)

    def _word(self, line: _Line):
        self._expect(line, 3, 'word <name> <datum> [<syllable> ...]')
        name = self._fresh(self.workspace.words, line, line.tokens[1], '词')
        datum = self._resolve(self.workspace.data, line, line.tokens[2], '群数据')
        try:
            syllables = datum.parse_word(line.texts(3))
        except InvalidElementError as e:
            raise self._error(str(e), line, line.tokens[min(3, len(line.tokens) - 1)]) from e
        self.workspace.words[name] = (datum.name, syllables)


def parse(paths: Sequence[str], settings: Optional[RunSettings] = None) -> Workspace:
    """解析输入文件为工作区"""
    return WorkspaceParser(settings).parse_files(paths)


def parse_text(text: str, settings: Optional[RunSettings] = None, source: str = '<input>') -> Workspace:
    return WorkspaceParser(settings).parse_text(text, source)
