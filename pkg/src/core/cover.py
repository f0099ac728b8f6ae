"""
覆叠模块
粘合空间的截面与和乐、有界万有覆叠上的广度优先搜索、
按正规形构造的最短路径以及中心单形搜索
"""

from collections import defaultdict, deque
from dataclasses import dataclass, replace
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from .actions import SimplicialAction
from .glue import GlueMap, SimplexMap, self_glue
from .mcx import (
    EdgeLabeling, Multicomplex, SimplexRef, SubcomplexMask, VertexId,
    canonical_orientation, check_aspherical, check_edge_complete,
)
from .normal_forms import AMALGAM, HNN, GroupDatum, NormalForm
from ..utils.constants import (
    DEFAULT_MAX_COVER_RADIUS, DEFAULT_MAX_PATHS, DEFAULT_MAX_WORD_LENGTH,
    TAG_A, TAG_K, TAG_L, TAG_T,
)
from ..utils.exceptions import (
    CapExceededError, HolonomyOutsideFactors, HypothesisViolation, MulticomplexError,
    UniquenessViolation,
)
from ..utils.logger import get_logger


@dataclass(frozen=True)
class CoverCaps:
    """覆叠展开的上限"""
    max_cover_radius: int = DEFAULT_MAX_COVER_RADIUS
    max_word_length: int = DEFAULT_MAX_WORD_LENGTH
    max_paths: int = DEFAULT_MAX_PATHS
    verify_choices: bool = False


@dataclass(frozen=True)
class CoverVertex:
    """覆叠顶点 g·ṽ"""
    g: NormalForm
    v: VertexId


@dataclass(frozen=True)
class BaseEdge:
    """
    底空间中的有向边（含 HNN 的环边）

    key 对同一条边的两个方向相同；ref 为有向单形，环边为 None。
    """
    tail: VertexId
    head: VertexId
    key: Tuple
    tag: str
    hol: NormalForm
    ref: Optional[SimplexRef] = None

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True)
class CoverEdge:
    start: CoverVertex
    end: CoverVertex
    base: BaseEdge

    @property
    def identity(self) -> Tuple[FrozenSet[CoverVertex], Tuple]:
        return frozenset((self.start, self.end)), self.base.key


@dataclass(frozen=True)
class MinimizingPath:
    """覆叠中两点之间的一条最短路径"""
    start: CoverVertex
    end: CoverVertex
    edges: Tuple[CoverEdge, ...] = ()
    pattern: Tuple[str, ...] = ()
    # 正规形模式没有实现时由球内搜索得到
    fallback: bool = False

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> Tuple[CoverVertex, ...]:
        return (self.start,) + tuple(e.end for e in self.edges)

    @property
    def a_sequence(self) -> Tuple[VertexId, ...]:
        """中间顶点（都在 A₀ 中）"""
        return tuple(e.end.v for e in self.edges[:-1])

    def edge_identities(self) -> List[Tuple[FrozenSet[CoverVertex], Tuple]]:
        return [e.identity for e in self.edges]


@dataclass
class CentralSimplexResult:
    """
    中心单形搜索结果

    simplex 为底复形中的规范单形；correspondence[i] 是输入第 i 个顶点
    对应的中心单形顶点（底顶点）。
    """
    simplex: Optional[SimplexRef] = None
    tag: str = ''
    lift: Tuple[CoverVertex, ...] = ()
    correspondence: Tuple[VertexId, ...] = ()
    sign: int = 1
    candidates_checked: int = 0

    @property
    def found(self) -> bool:
        return self.simplex is not None


@dataclass
class _Hop:
    tag: str
    element: NormalForm
    flexible: bool


class GluedSpace:
    """
    粘合空间 M = K ∪_A L（融合）或 L = K/F（HNN）

    边标签 λ 取值于群数据的规范正规形；固定 p ∈ A₀ 后，每个顶点 v 取一条
    p→v 的截面边 s_v，边 u→w 的和乐为 λ(s_u)·λ(e)·λ(s_w)⁻¹。
    覆叠顶点 (g, v) 表示 g·ṽ，边 (g,u)→(g·hol, w)。
    """

    def __init__(
        self,
        mode: str,
        complex_: Multicomplex,
        datum: GroupDatum,
        labeling: EdgeLabeling,
        k_mask: SubcomplexMask,
        l_mask: SubcomplexMask,
        a_mask: SubcomplexMask,
        base: Optional[VertexId] = None,
        relative: Optional[SubcomplexMask] = None,
        caps: CoverCaps = CoverCaps(),
        name: str = '',
        loops: Sequence[Tuple[VertexId, object]] = (),
        original: Optional[Multicomplex] = None,
        projection: Optional[SimplexMap] = None,
        original_relative: Optional[SubcomplexMask] = None,
    ):
        self.logger = get_logger(__name__)
        self.mode = mode
        self.name = name or complex_.name
        self.complex = complex_
        self.datum = datum
        self.labeling = labeling
        self.k_mask = k_mask
        self.l_mask = l_mask
        self.a_mask = a_mask
        self.relative = relative
        self.caps = caps
        self.original = original
        self.projection = projection or {}
        self.original_relative = original_relative
        self.action: Optional[SimplicialAction] = None
        self.discrepancies: List[str] = []

        if datum.context != mode:
            raise HypothesisViolation(f"群数据 {datum.name} 的类型 {datum.context} 与空间类型 {mode} 不符")

        self.a_vertices = a_mask.vertices
        if not self.a_vertices:
            raise HypothesisViolation("A₀ 为空，无法选取基点 p")
        self.base = min(self.a_vertices) if base is None else base
        if self.base not in self.a_vertices:
            raise HypothesisViolation(f"基点 {complex_.vertex_names[self.base]} 不在 A₀ 中")

        self._check_masks()
        self._section: Dict[VertexId, Optional[SimplexRef]] = {}
        self._section_label: Dict[VertexId, NormalForm] = {}
        self._hol: Dict[SimplexRef, NormalForm] = {}
        self._build_section()
        self._build_holonomy()

        self._out: Dict[VertexId, List[BaseEdge]] = defaultdict(list)
        self._build_base_edges(loops)
        self._check_observation_a()

        self._simplices_at: Dict[Tuple[int, VertexId], List[SimplexRef]] = defaultdict(list)
        for simplex in self.candidate_simplices():
            for v in simplex.vertices:
                self._simplices_at[(simplex.dim, v)].append(simplex)

        self._preimages: Dict[SimplexRef, List[Tuple[SimplexRef, int]]] = defaultdict(list)
        for simplex, image in self.projection.items():
            if image is not None:
                self._preimages[image[0]].append((simplex, image[1]))
        for value in self._preimages.values():
            value.sort()

        self.logger.info(
            f"✅ 粘合空间 {self.name} 构建完成: 模式 {mode}, 基点 {complex_.vertex_names[self.base]}, "
            f"覆叠边 {sum(len(v) for v in self._out.values()) // 2} 条"
        )

    def attach_action(self, action: SimplicialAction) -> 'GluedSpace':
        """
        挂上显式自同构作用；此后轨道规范化以它为准，
        与 A-相关规范化不一致之处记入 discrepancies

        Raises:
            HypothesisViolation: HNN 模式、作用不在本复形上或不保持 K、L、A
        """
        if self.mode != AMALGAM:
            raise HypothesisViolation("显式自同构作用只用于融合模式")
        if action.complex is not self.complex:
            raise HypothesisViolation(f"群作用 {action.name} 不在复形 {self.complex.name} 上")
        for mask in (self.k_mask, self.l_mask, self.a_mask):
            if not action.preserves(mask):
                raise HypothesisViolation(f"群作用 {action.name} 不保持 {mask.name}")
        self.action = action
        self.discrepancies = []
        self.logger.info(f"🔗 粘合空间 {self.name} 使用显式群作用 {action.name}")
        return self

    # ---- 构造 ----

    @classmethod
    def amalgam(cls, complex_: Multicomplex, datum: GroupDatum, labeling: EdgeLabeling,
                k_mask: SubcomplexMask, l_mask: SubcomplexMask, a_mask: SubcomplexMask,
                base: Optional[VertexId] = None, relative: Optional[SubcomplexMask] = None,
                caps: CoverCaps = CoverCaps(), name: str = '') -> 'GluedSpace':
        for mask in (k_mask, l_mask):
            for report in (check_aspherical(complex_, mask), check_edge_complete(complex_, mask)):
                if not report.passed:
                    raise HypothesisViolation(
                        f"{mask.name or '子复形'} 不满足 {report.check}: {', '.join(report.details[:5])}"
                    )
        if a_mask.members != (k_mask.members & l_mask.members):
            raise HypothesisViolation("A 必须等于 K∩L")
        return cls(AMALGAM, complex_, datum, labeling, k_mask, l_mask, a_mask,
                   base=base, relative=relative, caps=caps, name=name)

    @classmethod
    def hnn(cls, original: Multicomplex, datum: GroupDatum, labeling: EdgeLabeling,
            a1: SubcomplexMask, a2: SubcomplexMask, glue_map: GlueMap,
            base: Optional[VertexId] = None, relative: Optional[SubcomplexMask] = None,
            caps: CoverCaps = CoverCaps(), name: str = '') -> 'GluedSpace':
        """
        HNN 模式：K 自粘合得到 L，标签由 K 的边推到 L

        塌缩的边 (a, F(a)) 成为 L 中的环边，按从 A₁ 端到 A₂ 端的方向取标签。
        """
        for report in (check_aspherical(original), check_edge_complete(original)):
            if not report.passed:
                raise HypothesisViolation(
                    f"{original.name} 不满足 {report.check}: {', '.join(report.details[:5])}"
                )
        _check_flat(original, labeling, datum)

        glued = self_glue(original, a1, a2, glue_map, name or f"{original.name}/F")
        target = glued.complex
        projection = glued.maps['projection']

        labels: Dict[SimplexRef, NormalForm] = {}
        for edge in original.simplices(1):
            image = projection[edge]
            if image is None or not labeling.has_label(edge):
                continue
            value = labeling.edge_label(edge)
            if image[1] < 0:
                value = datum.invert(value)
            previous = labels.setdefault(image[0], value)
            if previous != value:
                raise HypothesisViolation(
                    f"边 {target.label(image[0])} 的两个原像标签不一致"
                )

        loops = []
        a2_vertices = a2.vertices
        for w, edge in glued.loops:
            tail, head = edge.vertices
            oriented = SimplexRef((head, tail), edge.copy) if tail in a2_vertices else edge
            loops.append((w, labeling.edge_label(oriented)))

        relative_image = None
        if relative is not None:
            relative.validate(original)
            relative_image = SubcomplexMask(
                frozenset(projection[s][0] for s in relative.members if projection[s] is not None),
                f"P({relative.name})",
            )
        return cls(
            HNN, target, datum, EdgeLabeling(target, datum, labels),
            SubcomplexMask.full(target, 'L'), SubcomplexMask.empty('∅'), glued.masks['A'],
            base=base, relative=relative_image, caps=caps, name=name or target.name,
            loops=loops, original=original, projection=projection, original_relative=relative,
        )

    def _check_masks(self):
        for mask in (self.k_mask, self.l_mask, self.a_mask) + ((self.relative,) if self.relative else ()):
            try:
                mask.validate(self.complex)
            except MulticomplexError as e:
                raise HypothesisViolation(f"子复形 {mask.name} 不合法: {e}")
        covered = self.k_mask.vertices | self.l_mask.vertices
        missing = [self.complex.vertex_names[v] for v in range(self.complex.vertex_count) if v not in covered]
        if missing:
            raise HypothesisViolation(f"M₀ ≠ K₀ ∪ L₀，多出顶点: {', '.join(missing)}")
        if self.mode == AMALGAM:
            _check_flat(self.complex, self.labeling, self.datum)

    def _in_union(self, simplex: SimplexRef) -> bool:
        return simplex in self.k_mask or simplex in self.l_mask

    def _build_section(self):
        """s_v：p 到 v 副本最小的边；v ∈ A 时只在 A 中选"""
        p = self.base
        self._section[p] = None
        self._section_label[p] = self.datum.identity()
        for v in range(self.complex.vertex_count):
            if v == p:
                continue
            choices = [e for e in self.complex.edges_between(p, v) if self._in_union(e)]
            if v in self.a_vertices:
                choices = [e for e in choices if e in self.a_mask]
            if not choices:
                raise HypothesisViolation(
                    f"边完备性不成立: 基点 {self.complex.vertex_names[p]} 与 "
                    f"{self.complex.vertex_names[v]} 之间没有可用的截面边"
                )
            edge = choices[0]
            self._section[v] = edge
            self._section_label[v] = self.labeling.edge_label(edge)

    def conjugate_label(self, u: VertexId, value: NormalForm, w: VertexId) -> NormalForm:
        d = self.datum
        return d.multiply(d.multiply(self._section_label[u], value), d.invert(self._section_label[w]))

    def _build_holonomy(self):
        for edge in self.complex.simplices(1):
            u, w = edge.vertices
            self._hol[edge] = self.conjugate_label(u, self.labeling.edge_label(edge), w)

    def _edge_tag(self, edge: SimplexRef, hol: NormalForm) -> str:
        if self.mode == HNN:
            return TAG_K if self.datum.factor_element(hol, TAG_K) is not None else TAG_T
        in_k, in_l = edge in self.k_mask, edge in self.l_mask
        if in_k and in_l:
            return TAG_A
        return TAG_K if in_k else TAG_L

    def _build_base_edges(self, loops: Sequence[Tuple[VertexId, NormalForm]]):
        for edge in self.complex.simplices(1):
            if not self._in_union(edge):
                continue
            u, w = edge.vertices
            hol = self._hol[edge]
            tag = self._edge_tag(edge, hol)
            key = ('e', edge)
            self._out[u].append(BaseEdge(u, w, key, tag, hol, edge))
            self._out[w].append(BaseEdge(w, u, key, tag, self.datum.invert(hol), edge.reversed_edge()))
        self.loops: List[Tuple[VertexId, NormalForm]] = []
        for index, (w, label) in enumerate(loops):
            hol = self.conjugate_label(w, label, w)
            if hol.is_identity:
                raise HypothesisViolation(f"顶点 {self.complex.vertex_names[w]} 处的环边和乐平凡")
            self.loops.append((w, hol))
            key = ('loop', index)
            tag = self._edge_tag(SimplexRef((w,), 0), hol)
            self._out[w].append(BaseEdge(w, w, key, tag, hol))
            self._out[w].append(BaseEdge(w, w, key, tag, self.datum.invert(hol)))

    def _check_observation_a(self):
        """K 的边和乐在 GK 中、L 的边和乐在 GL 中；HNN 中为 GK 或 t^{±1}"""
        d = self.datum
        stable = {d.element([(TAG_T, 1)]), d.element([(TAG_T, -1)])} if self.mode == HNN else set()
        for edges in self._out.values():
            for base in edges:
                hol = base.hol
                if self.mode == HNN:
                    ok = d.factor_element(hol, TAG_K) is not None or hol in stable
                else:
                    ok = True
                    if base.ref is not None and base.ref in self.k_mask:
                        ok = ok and d.factor_element(hol, TAG_K) is not None
                    if base.ref is not None and base.ref in self.l_mask:
                        ok = ok and d.factor_element(hol, TAG_L) is not None
                if not ok:
                    label = self.complex.label(base.ref) if base.ref is not None else f"loop{base.key[1]}"
                    raise HolonomyOutsideFactors(
                        f"边 {label} 的和乐 {d.format_element(hol)} 不在对应的因子群中"
                    )

    # ---- 查询 ----

    @property
    def a_members(self) -> FrozenSet[SimplexRef]:
        return self.a_mask.members

    def section_edge(self, v: VertexId) -> Optional[SimplexRef]:
        return self._section[v]

    def holonomy(self, edge: SimplexRef) -> NormalForm:
        """有向边 u→w 的和乐"""
        canonical, sign = edge.canonical()
        try:
            value = self._hol[canonical]
        except KeyError:
            raise MulticomplexError(f"{self.complex.name} 中没有边 {edge}")
        return value if sign > 0 else self.datum.invert(value)

    def holonomy_table(self) -> List[Tuple[SimplexRef, NormalForm]]:
        return sorted(self._hol.items())

    def vertex_tag(self, v: VertexId) -> str:
        if v in self.a_vertices:
            return TAG_A
        if self.mode == HNN or v in self.k_mask.vertices:
            return TAG_K
        return TAG_L

    def simplex_tag(self, simplex: SimplexRef) -> str:
        """收缩目标所在的一侧；A 中的单形归 K"""
        if self.mode == HNN or simplex in self.k_mask:
            return TAG_K
        return TAG_L

    def candidate_simplices(self) -> Iterator[SimplexRef]:
        for simplex in self.complex.all_simplices():
            if simplex.dim >= 2 and (self.mode == HNN or self._in_union(simplex)):
                yield simplex

    def preimages(self, simplex: SimplexRef) -> List[Tuple[SimplexRef, int]]:
        return list(self._preimages.get(simplex.canonical()[0], []))

    def vertex_key(self, x: CoverVertex) -> Tuple:
        return (self.datum.sort_key(x.g), x.v)

    def format_vertex(self, x: CoverVertex) -> str:
        return f"{self.datum.format_element(x.g)}·{self.complex.vertex_names[x.v]}"

    def in_ball(self, g: NormalForm) -> bool:
        return (self.datum.syllable_length(g) <= self.caps.max_cover_radius
                and self.datum.word_length(g) <= self.caps.max_word_length)

    def neighbours(self, x: CoverVertex) -> Iterator[CoverEdge]:
        for base in self._out.get(x.v, []):
            yield CoverEdge(x, CoverVertex(self.datum.multiply(x.g, base.hol), base.head), base)

    # ---- 提升 ----

    def lift_simplex(self, simplex: SimplexRef, start: Optional[CoverVertex] = None) -> Tuple[CoverVertex, ...]:
        """按单形自身的边提升，第 0 个顶点落在 start（缺省为 1·ṽ₀）"""
        v0 = simplex.vertices[0]
        g0 = start.g if start is not None else self.datum.identity()
        if start is not None and start.v != v0:
            raise MulticomplexError("提升起点与单形第 0 个顶点不符")
        edges = self.complex.edges_of(simplex)
        lifted = [CoverVertex(g0, v0)]
        for v in simplex.vertices[1:]:
            edge = edges[(min(v0, v), max(v0, v))]
            oriented = edge if edge.vertices[0] == v0 else edge.reversed_edge()
            lifted.append(CoverVertex(self.datum.multiply(g0, self.holonomy(oriented)), v))
        return tuple(lifted)

    def lifted_edge_identities(self, simplex: SimplexRef, lift: Sequence[CoverVertex]):
        edges = self.complex.edges_of(simplex)
        result = {}
        for i, x in enumerate(lift):
            for j in range(i + 1, len(lift)):
                y = lift[j]
                edge = edges[(min(x.v, y.v), max(x.v, y.v))]
                result[(i, j)] = (frozenset((x, y)), ('e', edge))
        return result

    # ---- 距离与最短路径 ----

    def bfs_distance(self, u: CoverVertex, w: CoverVertex) -> int:
        """
        球内广度优先搜索的最短距离

        Raises:
            CapExceededError: 终点不在球内或在球内不可达
        """
        if not (self.in_ball(u.g) and self.in_ball(w.g)):
            raise CapExceededError(f"顶点 {self.format_vertex(u)} 或 {self.format_vertex(w)} 超出覆叠球")
        if u == w:
            return 0
        distance = {u: 0}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            for edge in self.neighbours(x):
                y = edge.end
                if y in distance or not self.in_ball(y.g):
                    continue
                distance[y] = distance[x] + 1
                if y == w:
                    return distance[y]
                queue.append(y)
        raise CapExceededError(
            f"在半径 {self.caps.max_cover_radius} 的球内 {self.format_vertex(u)} 与 "
            f"{self.format_vertex(w)} 不连通"
        )

    def _syllable_hops(self, delta: NormalForm) -> List[_Hop]:
        d = self.datum
        if delta.is_identity:
            return []
        if d.in_edge_group(delta):
            return [_Hop(TAG_A, delta, True)]
        hops = []
        for syllable in delta.syllables:
            tag = syllable[0]
            hops.append(_Hop(tag, NormalForm((syllable,), delta.context), False))
        return hops

    def _mergeable(self, block: Sequence[_Hop]) -> bool:
        if sum(1 for hop in block if not hop.flexible) > 1:
            return False
        if self.mode == HNN:
            return True
        tags = {hop.tag for hop in block if hop.tag != TAG_A}
        return len(tags) <= 1

    def _block(self, block: Sequence[_Hop]) -> Tuple[str, NormalForm]:
        element = self.datum.identity()
        for hop in block:
            element = self.datum.multiply(element, hop.element)
        fixed = [hop.tag for hop in block if not hop.flexible]
        if fixed:
            return fixed[0], element
        tags = [hop.tag for hop in block if hop.tag != TAG_A]
        return (tags[0] if tags else TAG_A), element

    def _hop_variants(self, hops: List[_Hop]) -> List[List[Tuple[str, NormalForm]]]:
        """把连接段与 A-音节并入相邻段的全部方式"""
        variants: List[List[Tuple[str, NormalForm]]] = []

        def split(start: int, blocks: List[Tuple[str, NormalForm]]):
            if start == len(hops):
                variants.append(list(blocks))
                return
            for end in range(start + 1, len(hops) + 1):
                block = hops[start:end]
                if not self._mergeable(block):
                    break
                blocks.append(self._block(block))
                split(end, blocks)
                blocks.pop()

        split(0, [])
        variants.sort(key=len)
        return variants

    def _edge_allowed(self, base: BaseEdge, tag: str) -> bool:
        if self.mode == HNN or tag == TAG_A:
            return True
        return base.tag in (tag, TAG_A)

    def _realize(self, u: CoverVertex, w: CoverVertex,
                 blocks: List[Tuple[str, NormalForm]]) -> List[MinimizingPath]:
        d = self.datum
        results: List[MinimizingPath] = []
        pattern = tuple(tag for tag, _ in blocks)
        inverses = [d.invert(element) for _, element in blocks]
        last = len(blocks) - 1

        def extend(i: int, x: CoverVertex, offset: NormalForm, edges: List[CoverEdge]):
            tag, _ = blocks[i]
            for base in self._out.get(x.v, []):
                if not self._edge_allowed(base, tag):
                    continue
                if i == last:
                    if base.head != w.v:
                        continue
                elif base.head not in self.a_vertices:
                    continue
                new_offset = d.multiply(d.multiply(inverses[i], offset), base.hol)
                if i == last:
                    if not new_offset.is_identity:
                        continue
                elif not d.in_edge_group(new_offset):
                    continue
                y = CoverVertex(d.multiply(x.g, base.hol), base.head)
                edges.append(CoverEdge(x, y, base))
                if i == last:
                    results.append(MinimizingPath(u, w, tuple(edges), pattern))
                    if len(results) > self.caps.max_paths:
                        raise CapExceededError(f"最短路径数超过上限 {self.caps.max_paths}")
                else:
                    extend(i + 1, y, new_offset, edges)
                edges.pop()

        extend(0, u, d.identity(), [])
        return results

    def minimizing_paths(self, u: CoverVertex, w: CoverVertex) -> List[MinimizingPath]:
        """
        两覆叠顶点之间按正规形模式构造的全部最短路径

        g₁⁻¹g₂ 的规范正规形的每个音节对应一段，端点不在 A 中时在首尾补连接段；
        连接段与落在边群中的音节可以并入相邻段。中间顶点都在 A₀ 中，
        每一步的余量须落在边群里。取边数最少的一组模式。

        Raises:
            CapExceededError: 正规形超出半径或路径数超出上限

        没有路径实现该模式时退回球内分层搜索，返回的路径带 fallback 标记。
        """
        if u == w:
            return [MinimizingPath(u, w)]
        d = self.datum
        delta = d.multiply(d.invert(u.g), w.g)
        if d.syllable_length(delta) > self.caps.max_cover_radius:
            raise CapExceededError(
                f"正规形 {d.format_element(delta)} 的长度超过覆叠半径 {self.caps.max_cover_radius}"
            )
        hops = self._syllable_hops(delta)
        if u.v not in self.a_vertices:
            hops.insert(0, _Hop(self.vertex_tag(u.v), d.identity(), True))
        if w.v not in self.a_vertices:
            hops.append(_Hop(self.vertex_tag(w.v), d.identity(), True))
        if not hops:
            hops.append(_Hop(TAG_A, d.identity(), True))

        variants = self._hop_variants(hops)
        index = 0
        while index < len(variants):
            length = len(variants[index])
            found: Dict[Tuple, MinimizingPath] = {}
            while index < len(variants) and len(variants[index]) == length:
                for path in self._realize(u, w, variants[index]):
                    found.setdefault(tuple(path.edge_identities()), path)
                index += 1
            if found:
                paths = sorted(found.values(), key=self.path_key)
                if len(paths) > self.caps.max_paths:
                    raise CapExceededError(f"最短路径数超过上限 {self.caps.max_paths}")
                self.logger.debug(
                    f"{self.format_vertex(u)} → {self.format_vertex(w)}: {len(paths)} 条长度 {length} 的路径"
                )
                return paths
        self.logger.warning(
            f"⚠️ 没有路径实现 {self.format_vertex(u)} → {self.format_vertex(w)} 的正规形模式，改用球内搜索"
        )
        return [replace(path, fallback=True) for path in self.shortest_paths(u, w)]

    def shortest_paths(self, u: CoverVertex, w: CoverVertex) -> List[MinimizingPath]:
        """
        球内分层搜索得到的全部最短路径

        Raises:
            CapExceededError: 球内不可达或路径数超出上限
        """
        if u == w:
            return [MinimizingPath(u, w)]
        target = self.bfs_distance(u, w)
        distance = {u: 0}
        parents: Dict[CoverVertex, List[CoverEdge]] = defaultdict(list)
        queue = deque([u])
        while queue:
            x = queue.popleft()
            if distance[x] >= target:
                break
            for edge in self.neighbours(x):
                y = edge.end
                if not self.in_ball(y.g):
                    continue
                if y not in distance:
                    distance[y] = distance[x] + 1
                    queue.append(y)
                if distance[y] == distance[x] + 1:
                    parents[y].append(edge)

        pattern = ('search',) * target
        paths: List[MinimizingPath] = []

        def back(y: CoverVertex, suffix: List[CoverEdge]):
            if y == u:
                paths.append(MinimizingPath(u, w, tuple(reversed(suffix)), pattern))
                if len(paths) > self.caps.max_paths:
                    raise CapExceededError(f"最短路径数超过上限 {self.caps.max_paths}")
                return
            for edge in parents.get(y, []):
                suffix.append(edge)
                back(edge.start, suffix)
                suffix.pop()

        back(w, [])
        return sorted(paths, key=self.path_key)

    def path_key(self, path: MinimizingPath) -> Tuple:
        return tuple((self.vertex_key(e.end), e.base.key) for e in path.edges)

    # ---- 中心单形 ----

    def central_simplex(self, vertices: Sequence[CoverVertex],
                        paths: Dict[Tuple[int, int], MinimizingPath]) -> CentralSimplexResult:
        """
        一维骨架全部落在所选路径上的 n 维单形（至多一个）

        Raises:
            UniquenessViolation: 找到多个候选，或路径与单形的对应不一致
        """
        n = len(vertices) - 1
        used = set()
        on_paths = set(vertices)
        for path in paths.values():
            for edge in path.edges:
                used.add(edge.identity)
                on_paths.add(edge.end)

        candidates: Dict[Tuple, Tuple[SimplexRef, Tuple[CoverVertex, ...]]] = {}
        checked = 0
        for x in sorted(on_paths, key=self.vertex_key):
            for simplex in self._simplices_at.get((n, x.v), []):
                checked += 1
                v0 = simplex.vertices[0]
                if x.v == v0:
                    start = x
                else:
                    edges = self.complex.edges_of(simplex)
                    edge = edges[(v0, x.v)]
                    start = CoverVertex(self.datum.multiply(x.g, self.datum.invert(self.holonomy(edge))), v0)
                lift = self.lift_simplex(simplex, start)
                identities = self.lifted_edge_identities(simplex, lift)
                if all(identity in used for identity in identities.values()):
                    candidates[(simplex, lift)] = (simplex, lift)

        if not candidates:
            return CentralSimplexResult(candidates_checked=checked)
        if len(candidates) > 1:
            found = ', '.join(self.complex.label(s) for s, _ in candidates.values())
            raise UniquenessViolation(f"找到多个中心单形: {found}")

        simplex, lift = next(iter(candidates.values()))
        identities = set(self.lifted_edge_identities(simplex, lift).values())
        assignment: Dict[int, CoverVertex] = {}
        for (i, j), path in paths.items():
            hits = [e for e in path.edges if e.identity in identities]
            if len(hits) != 1:
                raise UniquenessViolation(
                    f"路径 {i}→{j} 上有 {len(hits)} 条中心单形的边"
                )
            for index, vertex in ((i, hits[0].start), (j, hits[0].end)):
                if assignment.setdefault(index, vertex) != vertex:
                    raise UniquenessViolation(f"顶点 {index} 的对应不一致")
        if len(assignment) != n + 1 or len(set(assignment.values())) != n + 1:
            raise UniquenessViolation("中心单形与输入顶点不成双射")

        correspondence = tuple(assignment[i].v for i in range(n + 1))
        canonical, sign = canonical_orientation(correspondence, simplex.copy, self.complex)
        return CentralSimplexResult(
            simplex=canonical,
            tag=self.simplex_tag(canonical),
            lift=tuple(assignment[i] for i in range(n + 1)),
            correspondence=correspondence,
            sign=sign,
            candidates_checked=checked,
        )

    def describe(self) -> Dict[str, object]:
        """报告用的空间概况"""
        names = self.complex.vertex_names
        return {
            'name': self.name,
            'mode': self.mode,
            'base': names[self.base],
            'section': {
                names[v]: (self.complex.label(e) if e is not None else '-')
                for v, e in sorted(self._section.items())
            },
            'holonomy': {
                self.complex.label(e): self.datum.format_element(h) for e, h in self.holonomy_table()
            },
            'loops': [
                {'vertex': names[w], 'holonomy': self.datum.format_element(h)} for w, h in self.loops
            ],
            'action': self.action.name if self.action is not None else '-',
        }


def _check_flat(complex_: Multicomplex, labeling: EdgeLabeling, datum: GroupDatum):
    """每个三角形的边标签满足 λ(ab)·λ(bc) = λ(ac)"""
    for triangle in complex_.simplices(2):
        a, b, c = triangle.vertices
        edges = complex_.edges_of(triangle)
        lhs = datum.multiply(labeling.edge_label(edges[(a, b)]), labeling.edge_label(edges[(b, c)]))
        if lhs != labeling.edge_label(edges[(a, c)]):
            raise HypothesisViolation(
                f"三角形 {complex_.label(triangle)} 的边标签不平坦: "
                f"{datum.format_element(lhs)} ≠ {datum.format_element(labeling.edge_label(edges[(a, c)]))}"
            )


def build_glued_space(*args, mode: str = AMALGAM, **kwargs) -> GluedSpace:
    if mode == HNN:
        return GluedSpace.hnn(*args, **kwargs)
    return GluedSpace.amalgam(*args, **kwargs)


def minimizing_paths(u: CoverVertex, w: CoverVertex, space: GluedSpace) -> List[MinimizingPath]:
    return space.minimizing_paths(u, w)


def central_simplex(vertices: Sequence[CoverVertex], paths: Dict[Tuple[int, int], MinimizingPath],
                    space: GluedSpace) -> CentralSimplexResult:
    return space.central_simplex(vertices, paths)
