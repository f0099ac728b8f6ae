"""
粘合构造模块
融合粘合、自粘合、加倍、沿余维一子复形切开，链的推前，以及小复形同构判定
"""

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .algebra import Chain, boundary, restrict
from .mcx import Multicomplex, SimplexRef, SubcomplexMask, VertexId, star_closure
from .normlp import filling_min
from ..utils.exceptions import (
    InvalidGlueMap, NotABoundaryError, NotFillableError, NotTwoSidedError, OverlappingSubcomplexes,
)
from ..utils.helpers import sort_permutation
from ..utils.logger import get_logger

logger = get_logger(__name__)

# 旧单形 → (新规范单形, 符号)；None 表示塌缩
SimplexMap = Dict[SimplexRef, Optional[Tuple[SimplexRef, int]]]


class _ComplexBuilder:
    """按维数递增逐个登记单形，平行副本序号自动分配"""

    def __init__(self, name: str):
        self.name = name
        self.vertex_names: List[str] = []
        self._names = set()
        self._faces: Dict[SimplexRef, Tuple[SimplexRef, ...]] = {}
        self._copies: Dict[Tuple[VertexId, ...], int] = defaultdict(int)
        self._ids: Dict[SimplexRef, str] = {}
        self._used_ids = set()

    def unique_name(self, name: str) -> str:
        while name in self._names or name in self._used_ids:
            name += "'"
        return name

    def add_vertex(self, name: str) -> VertexId:
        name = self.unique_name(name)
        self.vertex_names.append(name)
        self._names.add(name)
        return len(self.vertex_names) - 1

    def new_simplex(self, vertices: Tuple[VertexId, ...], faces: Tuple[SimplexRef, ...],
                    sid: Optional[str] = None) -> SimplexRef:
        simplex = SimplexRef(vertices, self._copies[vertices])
        self._copies[vertices] += 1
        self._faces[simplex] = faces
        if sid:
            sid = self.unique_name(sid)
            self._ids[simplex] = sid
            self._used_ids.add(sid)
        return simplex

    def build(self) -> Multicomplex:
        return Multicomplex(self.name, self.vertex_names, self._faces, self._ids)


def _transport(simplex: SimplexRef, source: Multicomplex, vertex_map: Dict[VertexId, VertexId],
               images: SimplexMap) -> Optional[Tuple[Tuple[VertexId, ...], Tuple[SimplexRef, ...], int]]:
    """
    按顶点映射搬运一个单形

    Returns:
        (新排序顶点元组, 新面元组, 排列符号)；顶点重合时返回 None
    """
    ordered = tuple(vertex_map[v] for v in simplex.vertices)
    if len(set(ordered)) != len(ordered):
        return None
    new_vertices, sign = sort_permutation(ordered)
    old_faces = source.faces(simplex)
    faces = []
    for w in new_vertices:
        position = ordered.index(w)
        image = images[old_faces[position]]
        faces.append(image[0])
    return new_vertices, tuple(faces), sign


def push_chain(z: Chain, projection: SimplexMap, target: Multicomplex) -> Chain:
    """沿单纯映射推前链；塌缩的单形推前为 0"""
    terms = []
    for simplex, value in z:
        image = projection.get(simplex)
        if image is None:
            continue
        ref, sign = image
        terms.append((sign * value, ref))
    return Chain.from_terms(target, z.dim, terms)


class GlueMap:
    """
    子复形间的单纯双射 f: A₁ → A₂

    由顶点映射与可选的平行副本映射给出；校验保维数、双射、与面映射交换。
    """

    def __init__(self, source_complex: Multicomplex, source: SubcomplexMask,
                 target_complex: Multicomplex, target: SubcomplexMask,
                 vertex_map: Dict[VertexId, VertexId],
                 copy_map: Optional[Dict[SimplexRef, int]] = None):
        self.source_complex = source_complex
        self.source = source
        self.target_complex = target_complex
        self.target = target
        self.vertex_map = dict(vertex_map)
        self.copy_map = dict(copy_map or {})
        self._images: Dict[SimplexRef, Tuple[SimplexRef, int]] = {}
        self._preimages: Dict[SimplexRef, Tuple[SimplexRef, int]] = {}
        self._validate()

    def _validate(self):
        if set(self.vertex_map) != set(self.source.vertices):
            raise InvalidGlueMap(f"顶点映射的定义域不是 {self.source.name} 的顶点集")
        if sorted(self.vertex_map.values()) != sorted(self.target.vertices):
            raise InvalidGlueMap(f"顶点映射不是到 {self.target.name} 顶点集的双射")

        for simplex in sorted(self.source.members, key=lambda s: (s.dim, s)):
            ordered = tuple(self.vertex_map[v] for v in simplex.vertices)
            copy = self.copy_map.get(simplex, simplex.copy)
            canonical, sign = SimplexRef(ordered, copy).canonical()
            if canonical not in self.target or canonical not in self.target_complex:
                raise InvalidGlueMap(
                    f"{self.source_complex.label(simplex)} 的像 {ordered}#{copy} 不在 {self.target.name} 中"
                )
            if canonical in self._preimages:
                raise InvalidGlueMap(f"粘合映射不是单射: 两个单形都映到 {self.target_complex.label(canonical)}")
            self._images[simplex] = (canonical, sign)
            self._preimages[canonical] = (simplex, sign)

            if simplex.dim == 0:
                continue
            image = SimplexRef(ordered, copy)
            for j, face_ref in enumerate(self.source_complex.faces(simplex)):
                if self.target_complex.face(image, j).copy != self._images[face_ref][0].copy:
                    raise InvalidGlueMap(
                        f"粘合映射与 {self.source_complex.label(simplex)} 的第 {j} 个面映射不交换"
                    )
        if len(self._preimages) != len(self.target):
            raise InvalidGlueMap(f"粘合映射不是满射: {len(self._preimages)} / {len(self.target)}")

    def image(self, simplex: SimplexRef) -> Tuple[SimplexRef, int]:
        return self._images[simplex.canonical()[0]]

    def preimage(self, simplex: SimplexRef) -> Tuple[SimplexRef, int]:
        return self._preimages[simplex.canonical()[0]]


@dataclass
class GlueResult:
    """构造结果：新复形、子复形掩码、从原复形出发的单纯映射与塌缩记录"""
    complex: Multicomplex
    masks: Dict[str, SubcomplexMask]
    maps: Dict[str, SimplexMap]
    loops: List[Tuple[VertexId, SimplexRef]] = field(default_factory=list)
    collapsed: List[SimplexRef] = field(default_factory=list)

    def push(self, z: Chain, which: str) -> Chain:
        return push_chain(z, self.maps[which], self.complex)


def amalgamated_glue(m1: Multicomplex, a1: SubcomplexMask, m2: Multicomplex, a2: SubcomplexMask,
                     f: GlueMap, name: str = '') -> GlueResult:
    """
    融合粘合 M = M₁ ∪_f M₂

    M₁ 的顶点与单形保持原编号；M₂ 中不在 A₂ 的顶点追加在后（重名时加 '），
    A₂ 中的单形与其在 A₁ 中的原像等同。

    Raises:
        InvalidGlueMap: f 与 A₁、A₂ 不匹配
    """
    if f.source.members != a1.members or f.target.members != a2.members:
        raise InvalidGlueMap("粘合映射的定义域或值域与给定子复形不符")
    a1.validate(m1)
    a2.validate(m2)
    name = name or f"{m1.name}∪{m2.name}"
    builder = _ComplexBuilder(name)
    first: SimplexMap = {}
    second: SimplexMap = {}

    for vname in m1.vertex_names:
        builder.add_vertex(vname)
    ids1 = m1.simplex_ids()
    for simplex in m1.all_simplices():
        if simplex.dim == 0:
            first[simplex] = (simplex, 1)
            continue
        builder.new_simplex(simplex.vertices, m1.faces(simplex), ids1.get(simplex))
        first[simplex] = (simplex, 1)

    vertex_map: Dict[VertexId, VertexId] = {}
    for v, vname in enumerate(m2.vertex_names):
        vertex_ref = SimplexRef((v,), 0)
        if vertex_ref in a2:
            preimage, _ = f.preimage(vertex_ref)
            vertex_map[v] = preimage.vertices[0]
        else:
            vertex_map[v] = builder.add_vertex(vname)
        second[vertex_ref] = (SimplexRef((vertex_map[v],), 0), 1)

    ids2 = m2.simplex_ids()
    for simplex in m2.all_simplices():
        if simplex.dim == 0:
            continue
        if simplex in a2:
            preimage, sign = f.preimage(simplex)
            second[simplex] = (preimage, sign)
            continue
        new_vertices, faces, sign = _transport(simplex, m2, vertex_map, second)
        second[simplex] = (builder.new_simplex(new_vertices, faces, ids2.get(simplex)), sign)

    complex_ = builder.build()
    k_mask = SubcomplexMask(frozenset(ref for ref, _ in first.values()), 'K')
    l_mask = SubcomplexMask(frozenset(ref for ref, _ in second.values()), 'L')
    a_mask = SubcomplexMask(frozenset(first[s][0] for s in a1.members), 'A')
    logger.info(f"✅ 粘合完成: {complex_!r}")
    return GlueResult(complex_, {'K': k_mask, 'L': l_mask, 'A': a_mask}, {'first': first, 'second': second})


def self_glue(m: Multicomplex, a1: SubcomplexMask, a2: SubcomplexMask, f: GlueMap,
              name: str = '') -> GlueResult:
    """
    自粘合：把 A₂ 中的每个单形与它在 A₁ 中的原像等同

    等同后出现重复顶点的单形塌缩；一维的塌缩单形记为环边。
    投影 P 记在 maps['projection'] 中。

    Raises:
        OverlappingSubcomplexes: A₁ 与 A₂ 相交
        InvalidGlueMap: f 不是 A₁ → A₂ 的合法映射
    """
    overlap = a1.members & a2.members
    if overlap:
        raise OverlappingSubcomplexes(f"自粘合的两个子复形相交: {len(overlap)} 个公共单形")
    if f.source.members != a1.members or f.target.members != a2.members:
        raise InvalidGlueMap("粘合映射的定义域或值域与给定子复形不符")

    name = name or f"{m.name}/~"
    builder = _ComplexBuilder(name)
    projection: SimplexMap = {}
    quotient: Dict[VertexId, VertexId] = {}
    a2_vertices = a2.vertices
    for v, vname in enumerate(m.vertex_names):
        if v not in a2_vertices:
            quotient[v] = builder.add_vertex(vname)
    for v in sorted(a2_vertices):
        preimage, _ = f.preimage(SimplexRef((v,), 0))
        quotient[v] = quotient[preimage.vertices[0]]
    for v in range(m.vertex_count):
        projection[SimplexRef((v,), 0)] = (SimplexRef((quotient[v],), 0), 1)

    ids = m.simplex_ids()
    loops: List[Tuple[VertexId, SimplexRef]] = []
    collapsed: List[SimplexRef] = []
    for dim in range(1, m.dimension + 1):
        simplices = m.simplices(dim)
        for simplex in [s for s in simplices if s not in a2] + [s for s in simplices if s in a2]:
            if simplex in a2:
                preimage, sign = f.preimage(simplex)
                image = projection[preimage]
                projection[simplex] = None if image is None else (image[0], sign * image[1])
                continue
            moved = _transport(simplex, m, quotient, projection)
            if moved is None:
                projection[simplex] = None
                collapsed.append(simplex)
                if dim == 1:
                    loops.append((quotient[simplex.vertices[0]], simplex))
                continue
            new_vertices, faces, sign = moved
            projection[simplex] = (builder.new_simplex(new_vertices, faces, ids.get(simplex)), sign)

    complex_ = builder.build()
    image_a = SubcomplexMask(
        frozenset(projection[s][0] for s in a1.members if projection[s] is not None), 'A'
    )
    logger.info(f"✅ 自粘合完成: {complex_!r}, 塌缩 {len(collapsed)} 个单形, 环边 {len(loops)} 条")
    return GlueResult(complex_, {'A': image_a}, {'projection': projection}, loops, collapsed)


@dataclass
class DoubleResult:
    """加倍 DM 与链映射 D(z) = ι₁z − ι₂z"""
    glued: GlueResult

    @property
    def complex(self) -> Multicomplex:
        return self.glued.complex

    def apply(self, z: Chain) -> Chain:
        return self.glued.push(z, 'first') - self.glued.push(z, 'second')


def double(m: Multicomplex, boundary_mask: SubcomplexMask, name: str = '') -> DoubleResult:
    """沿边界子复形把 M 与其反定向副本粘合"""
    boundary_mask.validate(m)
    identity = GlueMap(m, boundary_mask, m, boundary_mask, {v: v for v in boundary_mask.vertices})
    glued = amalgamated_glue(m, boundary_mask, m, boundary_mask, identity, name or f"D{m.name}")
    return DoubleResult(glued)


def glue_cycles(z1: Chain, z2: Chain, glued: GlueResult,
                support: Optional[SubcomplexMask] = None,
                filler: Callable = filling_min) -> Tuple[Chain, Chain]:
    """
    粘合两个相对闭链并修正 A 上的边缘

    w = ι₁z₁ + ι₂z₂，b = (∂w)|_A，c 为 b 在 A′（缺省为 A 的闭星形）内的最小填充，
    结果 z = w − c。

    Returns:
        (z, c)

    Raises:
        NotFillableError: b 在 A′ 内不是边缘
    """
    complex_ = glued.complex
    a_mask = glued.masks['A']
    w = glued.push(z1, 'first') + glued.push(z2, 'second')
    b = restrict(boundary(w), a_mask)
    if b.is_zero():
        return w, Chain.zero(complex_, w.dim)
    support = support or star_closure(complex_, a_mask, "A'")
    try:
        _, c = filler(b, support)
    except NotABoundaryError as e:
        logger.error(f"❌ A 上的边缘无法在 {support.name} 内填充")
        raise NotFillableError(f"粘合修正失败: {e}") from e
    return w - c, c


@dataclass
class CutResult:
    """切开结果：新复形、F 的两份拷贝与到原复形的投影"""
    complex: Multicomplex
    plus: SubcomplexMask
    minus: SubcomplexMask
    projection: SimplexMap


class _UnionFind:
    def __init__(self):
        self.parent: Dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def cut(m: Multicomplex, f_mask: SubcomplexMask, name: str = '') -> CutResult:
    """
    沿余维一子复形 F 切开

    要求每个单形与 F 至多交于一个面；与 F 相接的单形按“侧”分成两类，
    F 的顶点 v 分裂为 v+ 与 v-，含最小单形的一侧取 +。

    Raises:
        NotTwoSidedError: 组合二侧性检查失败
    """
    f_mask.validate(m)
    f_vertices = f_mask.vertices
    touching = []
    for simplex in m.all_simplices():
        if simplex in f_mask:
            continue
        shared = tuple(v for v in simplex.vertices if v in f_vertices)
        if not shared:
            continue
        face_on_f = next(
            (s for s in m.skeleton(simplex, len(shared) - 1) if s.vertices == shared), None
        ) if len(shared) < len(simplex.vertices) else None
        if face_on_f is None or face_on_f not in f_mask:
            raise NotTwoSidedError(f"单形 {m.label(simplex)} 与 F 的交不是 F 中的单个面")
        touching.append(simplex)

    sides = _UnionFind()
    touching_set = set(touching)
    for simplex in touching:
        sides.find(simplex)
        if simplex.dim > 0:
            for face_ref in m.faces(simplex):
                if face_ref in touching_set:
                    sides.union(simplex, face_ref)

    components = _UnionFind()
    for edge in f_mask.simplices(1):
        components.union(edge.vertices[0], edge.vertices[1])
    for v in f_vertices:
        components.find(v)

    side_of_component: Dict[VertexId, List[SimplexRef]] = defaultdict(list)
    for simplex in touching:
        component = components.find(next(v for v in simplex.vertices if v in f_vertices))
        root = sides.find(simplex)
        if root not in side_of_component[component]:
            side_of_component[component].append(root)
    sign_of_side: Dict[SimplexRef, str] = {}
    for component in sorted({components.find(v) for v in f_vertices}):
        roots = sorted(side_of_component.get(component, []))
        if len(roots) != 2:
            raise NotTwoSidedError(f"F 的一个连通分支旁有 {len(roots)} 侧（需要恰好 2 侧）")
        sign_of_side[roots[0]] = '+'
        sign_of_side[roots[1]] = '-'

    builder = _ComplexBuilder(name or f"{m.name}_{f_mask.name or 'F'}")
    keep: Dict[VertexId, VertexId] = {}
    split: Dict[Tuple[VertexId, str], VertexId] = {}
    for v, vname in enumerate(m.vertex_names):
        if v in f_vertices:
            split[(v, '+')] = builder.add_vertex(f"{vname}+")
            split[(v, '-')] = builder.add_vertex(f"{vname}-")
        else:
            keep[v] = builder.add_vertex(vname)

    images: Dict[str, SimplexMap] = {'+': {}, '-': {}, '': {}}
    projection: SimplexMap = {}
    ids = m.simplex_ids()

    def vertex_map_for(sign: str) -> Dict[VertexId, VertexId]:
        mapping = dict(keep)
        if sign:
            mapping.update({v: split[(v, sign)] for v in f_vertices})
        return mapping

    maps = {sign: vertex_map_for(sign) for sign in ('+', '-', '')}
    for v in range(m.vertex_count):
        ref = SimplexRef((v,), 0)
        if v in f_vertices:
            for sign in ('+', '-'):
                new_ref = SimplexRef((split[(v, sign)],), 0)
                images[sign][ref] = (new_ref, 1)
                projection[new_ref] = (ref, 1)
        else:
            new_ref = SimplexRef((keep[v],), 0)
            for sign in ('+', '-', ''):
                images[sign][ref] = (new_ref, 1)
            projection[new_ref] = (ref, 1)

    plus_members, minus_members = set(), set()
    for dim in range(1, m.dimension + 1):
        for simplex in m.simplices(dim):
            if simplex in f_mask:
                signs = ('+', '-')
            elif simplex in touching_set:
                signs = (sign_of_side[sides.find(simplex)],)
            else:
                signs = ('',)
            for sign in signs:
                new_vertices, faces, permutation = _transport(simplex, m, maps[sign], images[sign])
                sid = ids.get(simplex)
                if sid and simplex in f_mask:
                    sid = f"{sid}{sign}"
                new_ref = builder.new_simplex(new_vertices, faces, sid)
                images[sign][simplex] = (new_ref, permutation)
                projection[new_ref] = (simplex, permutation)
                if sign == '' and simplex not in touching_set:
                    images['+'][simplex] = images['-'][simplex] = (new_ref, permutation)
                if simplex in f_mask:
                    (plus_members if sign == '+' else minus_members).add(new_ref)

    for v in f_vertices:
        plus_members.add(SimplexRef((split[(v, '+')],), 0))
        minus_members.add(SimplexRef((split[(v, '-')],), 0))
    complex_ = builder.build()
    logger.info(f"✅ 切开完成: {complex_!r}")
    return CutResult(
        complex_,
        SubcomplexMask(frozenset(plus_members), 'F+'),
        SubcomplexMask(frozenset(minus_members), 'F-'),
        projection,
    )


def are_isomorphic(m1: Multicomplex, m2: Multicomplex) -> bool:
    """
    小复形的同构判定（回溯）

    先逐个匹配顶点并核对每对顶点上的边数，再按维数递增为每个单形
    选一个面相容且未用过的像。
    """
    if m1.f_vector() != m2.f_vector():
        return False
    n = m1.vertex_count
    degree1 = [len(m1.neighbours(v)) for v in range(n)]
    degree2 = [len(m2.neighbours(v)) for v in range(n)]
    simplices1 = [s for s in m1.all_simplices() if s.dim > 0]

    def match_simplices(vertex_map: Dict[VertexId, VertexId]) -> bool:
        images: Dict[SimplexRef, SimplexRef] = {SimplexRef((v,), 0): SimplexRef((w,), 0)
                                                for v, w in vertex_map.items()}
        used = set()

        def assign(index: int) -> bool:
            if index == len(simplices1):
                return True
            simplex = simplices1[index]
            ordered = tuple(vertex_map[v] for v in simplex.vertices)
            expected = {ordered[j]: images[face_ref] for j, face_ref in enumerate(m1.faces(simplex))}
            for candidate in m2.simplices_on(ordered):
                if candidate in used:
                    continue
                actual = dict(zip(candidate.vertices, m2.faces(candidate)))
                if actual != expected:
                    continue
                used.add(candidate)
                images[simplex] = candidate
                if assign(index + 1):
                    return True
                used.discard(candidate)
                del images[simplex]
            return False

        return assign(0)

    def extend(vertex_map: Dict[VertexId, VertexId]) -> bool:
        v = len(vertex_map)
        if v == n:
            return match_simplices(vertex_map)
        taken = set(vertex_map.values())
        for w in range(n):
            if w in taken or degree1[v] != degree2[w]:
                continue
            if any(m1.copies((u, v)) != m2.copies((vertex_map[u], w)) for u in vertex_map):
                continue
            vertex_map[v] = w
            if extend(vertex_map):
                return True
            del vertex_map[v]
        return False

    return extend({})


def euler_characteristic_with_loops(result: GlueResult) -> int:
    """把环边计入一维单形后的欧拉示性数"""
    return result.complex.euler_characteristic() - len(result.loops)
