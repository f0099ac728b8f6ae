"""
群作用模块
多重复形上的单纯群作用、有限群平均算子，
以及 Π 型元素（带词的路径束）在一维骨架上的共轭作用
"""

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from .algebra import Cochain
from .groups import GroupOracle
from .mcx import Multicomplex, PathWordContext, SimplexRef, SubcomplexMask, VertexId
from ..utils.exceptions import (
    InfiniteGroupError, InvalidActionError, TargetSimplexMissing, ValidationError,
)
from ..utils.logger import get_logger

# 单形 → (规范像, 符号)
ActionTable = Dict[SimplexRef, Tuple[SimplexRef, int]]


class SimplicialAction:
    """
    有限群在多重复形上的单纯作用

    作用由生成元上的顶点置换（以及可选的平行副本映射）给出，
    按 (s·h)·σ = s·(h·σ) 广度优先扩张到整个群；
    扩张时出现冲突说明给出的映射不满足群律。
    """

    def __init__(
        self,
        complex_: Multicomplex,
        group: GroupOracle,
        generator_maps: Dict[Any, Dict[VertexId, VertexId]],
        copy_maps: Optional[Dict[Any, Dict[SimplexRef, int]]] = None,
        masks: Iterable[SubcomplexMask] = (),
        name: str = '',
    ):
        self.logger = get_logger(__name__)
        self.complex = complex_
        self.group = group
        self.name = name or f"{group.name}↻{complex_.name}"
        self.masks = list(masks)
        if not group.is_finite:
            raise InfiniteGroupError(f"群 {group.name} 不是有限群，无法建立作用表")

        self._tables: Dict[Any, ActionTable] = {}
        generator_tables = {}
        for generator, vertex_map in generator_maps.items():
            copies = (copy_maps or {}).get(generator, {})
            generator_tables[generator] = self._generator_table(generator, vertex_map, copies)
        self._close(generator_tables)
        self.logger.info(f"✅ 群作用 {self.name} 构建完成: |G| = {len(self._tables)}")

    # ------------------------------------------------------------------
    # 构建
    # ------------------------------------------------------------------

    def _generator_table(self, generator: Any, vertex_map: Dict[VertexId, VertexId],
                         copies: Dict[SimplexRef, int]) -> ActionTable:
        complex_ = self.complex
        label = self.group.format_element(generator)
        full_map = {v: vertex_map.get(v, v) for v in range(complex_.vertex_count)}
        if sorted(full_map.values()) != list(range(complex_.vertex_count)):
            raise InvalidActionError(f"生成元 {label} 的顶点映射不是双射")

        table: ActionTable = {}
        for simplex in complex_.all_simplices():
            image_vertices = tuple(full_map[v] for v in simplex.vertices)
            image = SimplexRef(image_vertices, copies.get(simplex, simplex.copy))
            canonical, sign = image.canonical()
            if canonical not in complex_:
                raise InvalidActionError(
                    f"生成元 {label} 把 {complex_.label(simplex)} 映到不存在的单形 {image}"
                )
            table[simplex] = (canonical, sign)

        for dim in range(complex_.dimension + 1):
            images = [table[s][0] for s in complex_.simplices(dim)]
            if len(set(images)) != len(images):
                raise InvalidActionError(f"生成元 {label} 在 {dim} 维单形上不是双射")

        # 面映射交换：d_j(g·σ) = g·(d_jσ)
        for simplex in complex_.all_simplices():
            if simplex.dim == 0:
                continue
            image_vertices = tuple(full_map[v] for v in simplex.vertices)
            image = SimplexRef(image_vertices, table[simplex][0].copy)
            for j, face_ref in enumerate(complex_.faces(simplex)):
                if complex_.face(image, j).copy != table[face_ref][0].copy:
                    raise InvalidActionError(
                        f"生成元 {label} 与 {complex_.label(simplex)} 的第 {j} 个面映射不交换"
                    )

        for mask in self.masks:
            for simplex in mask:
                if table[simplex][0] not in mask:
                    raise InvalidActionError(f"生成元 {label} 不保持子复形 {mask.name}")
        return table

    def _close(self, generator_tables: Dict[Any, ActionTable]):
        identity = self.group.identity()
        self._tables[identity] = {s: (s, 1) for s in self.complex.all_simplices()}
        queue = deque([identity])
        while queue:
            h = queue.popleft()
            table_h = self._tables[h]
            for s, table_s in generator_tables.items():
                product = self.group.multiply(s, h)
                composed = {}
                for simplex, (image, sign) in table_h.items():
                    image2, sign2 = table_s[image]
                    composed[simplex] = (image2, sign * sign2)
                known = self._tables.get(product)
                if known is None:
                    self._tables[product] = composed
                    queue.append(product)
                elif known != composed:
                    raise InvalidActionError(
                        f"作用不满足群律: 元素 {self.group.format_element(product)} 得到两种不同的作用"
                    )
        if len(self._tables) != self.group.order():
            raise InvalidActionError(
                f"生成元只生成了 {len(self._tables)} 个元素，群 {self.group.name} 的阶为 {self.group.order()}"
            )

    # ------------------------------------------------------------------
    # 查询
    # ------------------------------------------------------------------

    def elements(self) -> List[Any]:
        return sorted(self._tables, key=self.group.sort_key)

    def act(self, g: Any, simplex: SimplexRef) -> Tuple[SimplexRef, int]:
        """g·σ：返回规范像与定向符号（σ 可以是非规范顺序）"""
        canonical, sign = simplex.canonical()
        try:
            image, image_sign = self._tables[g][canonical]
        except KeyError:
            raise ValidationError(f"无法计算 {self.group.format_element(g)}·{simplex}")
        return image, sign * image_sign

    def act_ordered(self, g: Any, simplex: SimplexRef) -> SimplexRef:
        """保持顶点顺序的像 (g·v₀, …, g·v_k)"""
        image, _ = self.act(g, simplex)
        vertex_image = {v: self._tables[g][SimplexRef((v,), 0)][0].vertices[0] for v in simplex.vertices}
        return SimplexRef(tuple(vertex_image[v] for v in simplex.vertices), image.copy)

    def act_cochain(self, g: Any, c: Cochain) -> Cochain:
        """(g·c)(σ) = c(g⁻¹·σ)"""
        inverse = self.group.invert(g)
        values = {}
        for simplex in self.complex.simplices(c.dim):
            image, sign = self.act(inverse, simplex)
            value = sign * c(image)
            if value != 0:
                values[simplex] = value
        return Cochain(self.complex, c.dim, values)

    def is_invariant(self, c: Cochain) -> bool:
        return all(self.act_cochain(g, c) == c for g in self._tables)

    def orbit(self, simplex: SimplexRef) -> List[SimplexRef]:
        return sorted({self.act(g, simplex)[0] for g in self._tables})

    def preserves(self, mask: SubcomplexMask) -> bool:
        return all(self.act(g, simplex)[0] in mask for g in self._tables for simplex in mask)

    def verify(self) -> bool:
        """穷举核对群律 g·(h·σ) = (gh)·σ"""
        for g in self._tables:
            for h in self._tables:
                gh = self.group.multiply(g, h)
                for simplex in self.complex.all_simplices():
                    inner, s1 = self.act(h, simplex)
                    outer, s2 = self.act(g, inner)
                    if (outer, s1 * s2) != self.act(gh, simplex):
                        return False
        return True


def average(c: Cochain, action: SimplicialAction) -> Cochain:
    """
    有限群平均：(Av c)(σ) = (1/|G|) Σ_g sign·c(g·σ)

    Raises:
        InfiniteGroupError: 群不是有限群
    """
    if not action.group.is_finite:
        raise InfiniteGroupError(f"群 {action.group.name} 不是有限群，平均算子不可构造")
    elements = action.elements()
    order = Fraction(len(elements))
    values = {}
    for simplex in action.complex.simplices(c.dim):
        total = Fraction(0)
        for g in elements:
            image, sign = action.act(g, simplex)
            total += sign * c(image)
        if total != 0:
            values[simplex] = total / order
    return Cochain(action.complex, c.dim, values)


# ----------------------------------------------------------------------
# Π 型元素
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Strand:
    """从 start 到 end 的一条路径的同伦类（用群中的词表示）"""
    start: VertexId
    end: VertexId
    word: Any


class PiElement:
    """
    有限支撑的路径束：起点两两不同，且起点集合等于终点集合

    在顶点上的作用是 v ↦ 以 v 为起点的路径的终点（无路径时不动）。
    """

    def __init__(self, strands: Iterable[Strand], context: PathWordContext):
        self.context = context
        strands = list(strands)
        starts = [s.start for s in strands]
        ends = [s.end for s in strands]
        if len(set(starts)) != len(starts):
            raise ValidationError("Π 元素的路径起点必须两两不同")
        if set(starts) != set(ends):
            raise ValidationError(f"Π 元素的起点集合 {sorted(starts)} 与终点集合 {sorted(ends)} 不同")
        self.strands: Tuple[Strand, ...] = tuple(sorted(strands, key=lambda s: s.start))

    @classmethod
    def identity(cls, context: PathWordContext) -> 'PiElement':
        return cls((), context)

    def strand_at(self, v: VertexId) -> Optional[Strand]:
        return next((s for s in self.strands if s.start == v), None)

    def move(self, v: VertexId) -> VertexId:
        strand = self.strand_at(v)
        return strand.end if strand else v

    def word_at(self, v: VertexId) -> Any:
        strand = self.strand_at(v)
        return strand.word if strand else None

    def is_identity(self) -> bool:
        return not self.strands

    def inverse(self) -> 'PiElement':
        return PiElement(
            (Strand(s.end, s.start, self.context.invert(s.word)) for s in self.strands),
            self.context,
        )

    def equals(self, other: 'PiElement') -> bool:
        """按路径束逐条比较，词的相等交给群判定"""
        if [(s.start, s.end) for s in self.strands] != [(s.start, s.end) for s in other.strands]:
            return False
        return all(
            self.context.is_identity(self.context.multiply(a.word, self.context.invert(b.word)))
            for a, b in zip(self.strands, other.strands)
        )

    def __repr__(self) -> str:
        body = ', '.join(f"{s.start}→{s.end}:{s.word}" for s in self.strands)
        return f"PiElement({body})"


def pi_multiply(g1: PiElement, g2: PiElement) -> PiElement:
    """
    乘积 g1·g2：g1 中终点为 g2 某条路径起点的路径与之拼接，
    其余路径原样保留；拼接后为平凡环的路径被约去
    """
    context = g1.context
    result: List[Strand] = []
    used = set()
    for strand in g1.strands:
        follow = g2.strand_at(strand.end)
        if follow is None:
            result.append(strand)
            continue
        used.add(follow.start)
        result.append(Strand(strand.start, follow.end, context.multiply(strand.word, follow.word)))
    ends_of_first = {s.end for s in g1.strands}
    for strand in g2.strands:
        if strand.start not in used and strand.start not in ends_of_first:
            result.append(strand)
    kept = [s for s in result if not (s.start == s.end and context.is_identity(s.word))]
    return PiElement(kept, context)


def pi_act_edge(g: PiElement, edge: SimplexRef, complex_: Multicomplex,
                labeling: PathWordContext) -> SimplexRef:
    """
    Π 元素在边上的作用

    e: a → b 的像是 g(a) → g(b) 上类为 γ̄_a ∗ e ∗ γ_b 的那条边，
    标签为 λ(γ_a)⁻¹·λ(e)·λ(γ_b)（端点上没有路径时对应因子取单位元）。

    Raises:
        TargetSimplexMissing: 复形中没有这样的边
    """
    logger = get_logger(__name__)
    a, b = edge.vertices
    target_label = labeling.edge_label(edge)
    word_a = g.word_at(a)
    if word_a is not None:
        target_label = labeling.multiply(labeling.invert(word_a), target_label)
    word_b = g.word_at(b)
    if word_b is not None:
        target_label = labeling.multiply(target_label, word_b)

    ga, gb = g.move(a), g.move(b)
    if ga == gb:
        raise TargetSimplexMissing(f"边 {complex_.label(edge)} 的两个端点被映到同一个顶点 {ga}")
    matches = [
        candidate for candidate in complex_.edges_between(ga, gb)
        if labeling.is_identity(labeling.multiply(labeling.edge_label(candidate), labeling.invert(target_label)))
    ]
    if not matches:
        raise TargetSimplexMissing(
            f"复形 {complex_.name} 中 {complex_.vertex_names[ga]}→{complex_.vertex_names[gb]} "
            f"没有同伦类匹配的边"
        )
    if len(matches) > 1:
        logger.warning(f"⚠️ {len(matches)} 条平行边的同伦类相同，取副本最小者")
    return matches[0]


def pi_act_simplex(g: PiElement, simplex: SimplexRef, complex_: Multicomplex,
                   labeling: PathWordContext) -> SimplexRef:
    """
    高维单形上的作用：取一维骨架为变换后骨架的唯一单形

    返回保持顶点顺序 (g·v₀, …, g·v_k) 的单形引用。
    """
    if simplex.dim == 0:
        return SimplexRef((g.move(simplex.vertices[0]),), 0)
    if simplex.dim == 1:
        return pi_act_edge(g, simplex, complex_, labeling)

    vertices = simplex.vertices
    edges = complex_.edges_of(simplex)
    targets: Dict[Tuple[VertexId, VertexId], int] = {}
    for i in range(len(vertices)):
        for j in range(i + 1, len(vertices)):
            u, w = vertices[i], vertices[j]
            key = (min(u, w), max(u, w))
            oriented = SimplexRef((u, w), edges[key].copy)
            image = pi_act_edge(g, oriented, complex_, labeling)
            image_key = (min(image.vertices), max(image.vertices))
            targets[image_key] = image.copy

    moved = tuple(g.move(v) for v in vertices)
    for candidate in complex_.simplices_on(moved):
        skeleton = complex_.edges_of(candidate)
        if all(skeleton[key].copy == copy for key, copy in targets.items()):
            return SimplexRef(moved, candidate.copy)
    raise TargetSimplexMissing(
        f"复形 {complex_.name} 中没有一维骨架为 {sorted(targets.items())} 的单形"
    )


def strands_from_words(
    entries: Sequence[Tuple[VertexId, VertexId, Any]], context: PathWordContext
) -> PiElement:
    return PiElement((Strand(a, b, w) for a, b, w in entries), context)
