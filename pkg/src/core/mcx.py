"""
多重复形模块
负责多重复形的构建、面映射、定向、子复形以及有限结构检查
"""

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, Optional, Protocol, Sequence, Tuple

from ..utils.logger import get_logger
from ..utils.helpers import sort_permutation
from ..utils.exceptions import (
    AmbiguousFaceError, DanglingFaceError, DuplicateDeclarationError, FaceIdentityViolation,
    IndexOutOfRangeError, MulticomplexError, NotFaceClosedError, UnknownSimplexError,
    ValidationError,
)

VertexId = int

logger = get_logger(__name__)


@dataclass(frozen=True, order=True)
class SimplexRef:
    """单形引用：有序顶点元组加平行副本序号"""
    vertices: Tuple[VertexId, ...]
    copy: int = 0

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @property
    def vertex_set(self) -> FrozenSet[VertexId]:
        return frozenset(self.vertices)

    def is_canonical(self) -> bool:
        return all(a < b for a, b in zip(self.vertices, self.vertices[1:]))

    def canonical(self) -> Tuple['SimplexRef', int]:
        """按顶点序排序，返回代表元与排列符号（I_π 在副本上取恒等）"""
        ordered, sign = sort_permutation(self.vertices)
        return SimplexRef(ordered, self.copy), sign

    def reversed_edge(self) -> 'SimplexRef':
        return SimplexRef(tuple(reversed(self.vertices)), self.copy)


@dataclass(frozen=True)
class OrientedSimplex:
    """带符号的定向单形"""
    simplex: SimplexRef
    sign: int = 1


@dataclass
class SimplexDeclaration:
    """单形声明（输入文件中的一行 simplex）"""
    sid: str
    vertices: Tuple[str, ...]
    copy: Optional[int] = None
    faces: Optional[Tuple[str, ...]] = None
    line: int = 0


@dataclass
class ComplexDeclaration:
    """复形声明"""
    name: str
    vertices: List[str] = field(default_factory=list)
    simplices: List[SimplexDeclaration] = field(default_factory=list)


@dataclass
class CheckReport:
    """结构检查结果"""
    check: str
    passed: bool
    details: List[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        return 'PASS' if self.passed else 'FAIL'


class Multicomplex:
    """
    多重复形

    顶点为声明顺序的序号；每个维数的单形按 (排序顶点元组, 副本) 存储，
    面映射对规范代表元记录第 j 个面（删去第 j 个顶点）。构建后不可变。
    """

    def __init__(
        self,
        name: str,
        vertex_names: Sequence[str],
        face_table: Dict[SimplexRef, Tuple[SimplexRef, ...]],
        simplex_ids: Optional[Dict[SimplexRef, str]] = None,
    ):
        self.name = name
        self.vertex_names: Tuple[str, ...] = tuple(vertex_names)
        self._vertex_index = {vname: i for i, vname in enumerate(self.vertex_names)}
        self._faces: Dict[SimplexRef, Tuple[SimplexRef, ...]] = dict(face_table)
        for v in range(len(self.vertex_names)):
            self._faces.setdefault(SimplexRef((v,), 0), ())

        self._by_dim: Dict[int, List[SimplexRef]] = defaultdict(list)
        self._copies: Dict[Tuple[VertexId, ...], int] = defaultdict(int)
        for simplex in sorted(self._faces):
            self._by_dim[simplex.dim].append(simplex)
            self._copies[simplex.vertices] += 1
        for dim in self._by_dim:
            self._by_dim[dim].sort()

        self._ids: Dict[SimplexRef, str] = {}
        self._refs: Dict[str, SimplexRef] = {}
        for v, vname in enumerate(self.vertex_names):
            self._register_id(SimplexRef((v,), 0), vname)
        for simplex, sid in (simplex_ids or {}).items():
            if simplex.dim > 0:
                self._register_id(simplex, sid)

        self._validate()

    def _register_id(self, simplex: SimplexRef, sid: str):
        if sid in self._refs and self._refs[sid] != simplex:
            raise DuplicateDeclarationError(f"复形 {self.name} 中单形编号重复: {sid}")
        self._ids[simplex] = sid
        self._refs[sid] = simplex

    def _validate(self):
        """检查副本连续、面存在且满足面恒等式"""
        for simplex, faces in self._faces.items():
            if not simplex.is_canonical():
                raise MulticomplexError(f"单形 {simplex} 不是规范顺序")
            if any(v < 0 or v >= self.vertex_count for v in simplex.vertices):
                raise MulticomplexError(f"单形 {simplex} 引用了不存在的顶点")
            if simplex.copy >= self._copies[simplex.vertices]:
                raise MulticomplexError(
                    f"单形 {self.label(simplex)} 的副本序号不连续: {simplex.copy}"
                )
            if simplex.dim == 0:
                continue
            if len(faces) != simplex.dim + 1:
                raise DanglingFaceError(f"单形 {self.label(simplex)} 的面数目错误")
            for j, face_ref in enumerate(faces):
                expected = simplex.vertices[:j] + simplex.vertices[j + 1:]
                if face_ref.vertices != expected or face_ref not in self._faces:
                    raise DanglingFaceError(
                        f"单形 {self.label(simplex)} 的第 {j} 个面 {face_ref} 不存在"
                    )

        for simplex in self._faces:
            if simplex.dim < 2:
                continue
            for j in range(simplex.dim + 1):
                for i in range(j):
                    left = self.face(self.face(simplex, j), i)
                    right = self.face(self.face(simplex, i), j - 1)
                    if left != right:
                        raise FaceIdentityViolation(
                            f"单形 {self.label(simplex)} 违反 d_{i}∘d_{j} = d_{j-1}∘d_{i}"
                        )

    # ---- 基本查询 ----

    @property
    def vertex_count(self) -> int:
        return len(self.vertex_names)

    @property
    def dimension(self) -> int:
        return max(self._by_dim) if self._by_dim else -1

    def vertex_id(self, vname: str) -> VertexId:
        try:
            return self._vertex_index[vname]
        except KeyError:
            raise UnknownSimplexError(f"复形 {self.name} 中没有顶点 {vname}")

    def vertex(self, v: VertexId) -> SimplexRef:
        return SimplexRef((v,), 0)

    def simplices(self, dim: int) -> List[SimplexRef]:
        return list(self._by_dim.get(dim, []))

    def all_simplices(self) -> List[SimplexRef]:
        return [s for dim in sorted(self._by_dim) for s in self._by_dim[dim]]

    def __contains__(self, simplex: SimplexRef) -> bool:
        return simplex.canonical()[0] in self._faces

    def __len__(self) -> int:
        return len(self._faces)

    def copies(self, vertices: Iterable[VertexId]) -> int:
        """顶点集上的平行副本数 |I_F|"""
        return self._copies.get(tuple(sorted(vertices)), 0)

    def simplices_on(self, vertices: Iterable[VertexId]) -> List[SimplexRef]:
        key = tuple(sorted(vertices))
        return [SimplexRef(key, c) for c in range(self._copies.get(key, 0))]

    def faces(self, simplex: SimplexRef) -> Tuple[SimplexRef, ...]:
        canonical, _ = simplex.canonical()
        try:
            return self._faces[canonical]
        except KeyError:
            raise UnknownSimplexError(f"复形 {self.name} 中没有单形 {simplex}")

    def face(self, simplex: SimplexRef, j: int) -> SimplexRef:
        """
        第 j 个面：删去有序顶点元组中的第 j 个顶点

        规范代表元的面直接取存储的面映射；非规范顺序的单形沿用相同副本，
        返回的面保持剩余顶点的原有顺序。
        """
        if simplex.dim < 1 or j < 0 or j > simplex.dim:
            raise IndexOutOfRangeError(f"面索引 {j} 超出单形 {simplex} 的范围")
        canonical, _ = simplex.canonical()
        stored = self.faces(canonical)
        removed = simplex.vertices[j]
        position = canonical.vertices.index(removed)
        face_copy = stored[position].copy
        return SimplexRef(simplex.vertices[:j] + simplex.vertices[j + 1:], face_copy)

    def skeleton(self, simplex: SimplexRef, k: int) -> FrozenSet[SimplexRef]:
        """k 维骨架（递归取各面的骨架之并，结果为规范代表元）"""
        if k < 0 or k > simplex.dim:
            raise IndexOutOfRangeError(f"骨架维数 {k} 超出单形 {simplex} 的范围")
        canonical, _ = simplex.canonical()
        if canonical not in self._faces:
            raise UnknownSimplexError(f"复形 {self.name} 中没有单形 {simplex}")
        if k == canonical.dim:
            return frozenset([canonical])
        result = set()
        for face_ref in self._faces[canonical]:
            result |= self.skeleton(face_ref, k)
        return frozenset(result)

    def edges_of(self, simplex: SimplexRef) -> Dict[Tuple[VertexId, VertexId], SimplexRef]:
        """单形一维骨架中各顶点对对应的边"""
        if simplex.dim < 1:
            return {}
        return {edge.vertices: edge for edge in self.skeleton(simplex, 1)}

    def edges_between(self, u: VertexId, w: VertexId) -> List[SimplexRef]:
        """u 到 w 的全部有向边（副本递增）"""
        if u == w:
            return []
        key = (min(u, w), max(u, w))
        return [SimplexRef((u, w), c) for c in range(self._copies.get(key, 0))]

    def neighbours(self, v: VertexId) -> List[VertexId]:
        result = set()
        for edge in self._by_dim.get(1, []):
            if v in edge.vertices:
                result.add(edge.vertices[1] if edge.vertices[0] == v else edge.vertices[0])
        return sorted(result)

    def cofaces(self, simplex: SimplexRef) -> List[Tuple[SimplexRef, int]]:
        """以 simplex 为面的高一维单形及其面索引"""
        canonical, _ = simplex.canonical()
        result = []
        for upper in self._by_dim.get(canonical.dim + 1, []):
            for j, face_ref in enumerate(self._faces[upper]):
                if face_ref == canonical:
                    result.append((upper, j))
        return result

    # ---- 命名 ----

    def simplex_id(self, simplex: SimplexRef) -> Optional[str]:
        return self._ids.get(simplex.canonical()[0])

    def by_id(self, sid: str) -> SimplexRef:
        try:
            return self._refs[sid]
        except KeyError:
            raise UnknownSimplexError(f"复形 {self.name} 中没有单形编号 {sid}")

    def has_id(self, sid: str) -> bool:
        return sid in self._refs

    def label(self, simplex: SimplexRef) -> str:
        """报告用标签：优先使用声明编号，否则为顶点名加副本"""
        canonical, _ = simplex.canonical()
        sid = self._ids.get(canonical)
        if sid is not None and simplex.is_canonical():
            return sid
        names = ','.join(self.vertex_names[v] for v in simplex.vertices)
        suffix = f"#{simplex.copy}" if self._copies.get(canonical.vertices, 1) > 1 else ''
        return f"({names}){suffix}"

    def face_table(self) -> Dict[SimplexRef, Tuple[SimplexRef, ...]]:
        return dict(self._faces)

    def simplex_ids(self) -> Dict[SimplexRef, str]:
        return dict(self._ids)

    # ---- 统计 ----

    def f_vector(self) -> List[int]:
        return [len(self._by_dim.get(d, [])) for d in range(self.dimension + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * n for d, n in enumerate(self.f_vector()))

    def __repr__(self) -> str:
        return f"Multicomplex({self.name!r}, f={self.f_vector()})"


def build_multicomplex(declaration: ComplexDeclaration) -> Multicomplex:
    """
    根据声明构建多重复形

    Args:
        declaration: 顶点与单形声明

    Returns:
        校验通过的多重复形

    Raises:
        DuplicateDeclarationError: 编号或 (顶点集, 副本) 重复
        DanglingFaceError: 声明的面不存在
        AmbiguousFaceError: 平行副本使面无法推断
        FaceIdentityViolation: 面恒等式不成立
    """
    logger.info(f"开始构建复形 {declaration.name}")
    vertex_names: List[str] = []
    vertex_index: Dict[str, int] = {}
    for vname in declaration.vertices:
        if vname in vertex_index:
            raise DuplicateDeclarationError(f"顶点重复声明: {vname}")
        vertex_index[vname] = len(vertex_names)
        vertex_names.append(vname)

    face_table: Dict[SimplexRef, Tuple[SimplexRef, ...]] = {
        SimplexRef((v,), 0): () for v in range(len(vertex_names))
    }
    ids: Dict[str, SimplexRef] = {vname: SimplexRef((v,), 0) for vname, v in vertex_index.items()}
    simplex_ids: Dict[SimplexRef, str] = {}
    next_copy: Dict[Tuple[int, ...], int] = defaultdict(int)
    by_vertex_set: Dict[Tuple[int, ...], List[SimplexRef]] = defaultdict(list)
    for v in range(len(vertex_names)):
        by_vertex_set[(v,)].append(SimplexRef((v,), 0))
        next_copy[(v,)] = 1

    ordered = sorted(declaration.simplices, key=lambda d: len(d.vertices))
    for decl in ordered:
        if len(decl.vertices) < 2:
            raise MulticomplexError(f"第 {decl.line} 行: 单形 {decl.sid} 至少需要两个顶点")
        if decl.sid in ids:
            raise DuplicateDeclarationError(f"第 {decl.line} 行: 单形编号重复 {decl.sid}")
        try:
            declared = tuple(vertex_index[v] for v in decl.vertices)
        except KeyError as e:
            raise DanglingFaceError(f"第 {decl.line} 行: 单形 {decl.sid} 引用了未声明的顶点 {e}")
        if len(set(declared)) != len(declared):
            raise MulticomplexError(f"第 {decl.line} 行: 单形 {decl.sid} 的顶点必须两两不同")

        key = tuple(sorted(declared))
        copy = decl.copy if decl.copy is not None else next_copy[key]
        simplex = SimplexRef(key, copy)
        if simplex in face_table:
            raise DuplicateDeclarationError(
                f"第 {decl.line} 行: 顶点集 {decl.vertices} 的副本 {copy} 重复声明"
            )

        faces: List[Optional[SimplexRef]] = [None] * len(key)
        if decl.faces is not None:
            if len(decl.faces) != len(declared):
                raise DanglingFaceError(f"第 {decl.line} 行: 单形 {decl.sid} 的面数目错误")
            for j, face_sid in enumerate(decl.faces):
                if face_sid not in ids:
                    raise DanglingFaceError(
                        f"第 {decl.line} 行: 单形 {decl.sid} 的面 {face_sid} 不存在"
                    )
                face_ref = ids[face_sid]
                expected = frozenset(declared[:j] + declared[j + 1:])
                if face_ref.vertex_set != expected:
                    raise DanglingFaceError(
                        f"第 {decl.line} 行: 面 {face_sid} 不在顶点 {decl.vertices[j]} 的对面"
                    )
                faces[key.index(declared[j])] = face_ref
        else:
            for j in range(len(key)):
                face_key = key[:j] + key[j + 1:]
                candidates = by_vertex_set.get(face_key, [])
                if not candidates:
                    raise DanglingFaceError(
                        f"第 {decl.line} 行: 单形 {decl.sid} 缺少面 "
                        f"{tuple(vertex_names[v] for v in face_key)}"
                    )
                if len(candidates) > 1:
                    raise AmbiguousFaceError(
                        f"第 {decl.line} 行: 单形 {decl.sid} 的面存在平行副本，请显式给出 faces"
                    )
                faces[j] = candidates[0]

        face_table[simplex] = tuple(faces)
        by_vertex_set[key].append(simplex)
        next_copy[key] = max(next_copy[key], copy + 1)
        ids[decl.sid] = simplex
        simplex_ids[simplex] = decl.sid

    complex_ = Multicomplex(declaration.name, vertex_names, face_table, simplex_ids)
    logger.info(f"✅ 复形 {declaration.name} 构建完成, f-向量: {complex_.f_vector()}")
    return complex_


def face(simplex: SimplexRef, j: int, complex_: Multicomplex) -> SimplexRef:
    return complex_.face(simplex, j)


def skeleton(simplex: SimplexRef, k: int, complex_: Multicomplex) -> FrozenSet[SimplexRef]:
    return complex_.skeleton(simplex, k)


def canonical_orientation(
    vertices: Sequence[VertexId], copy: int, complex_: Multicomplex
) -> Tuple[SimplexRef, int]:
    """
    规范定向

    Returns:
        (存储的规范代表元, 排列符号)

    Raises:
        UnknownSimplexError: 顶点集上没有该副本
    """
    if len(set(vertices)) != len(vertices):
        raise UnknownSimplexError(f"顶点元组 {tuple(vertices)} 含重复顶点")
    canonical, sign = SimplexRef(tuple(vertices), copy).canonical()
    if canonical not in complex_:
        raise UnknownSimplexError(f"复形 {complex_.name} 中没有单形 {tuple(vertices)} 副本 {copy}")
    return canonical, sign


def check_aspherical(complex_: Multicomplex, mask: Optional['SubcomplexMask'] = None) -> CheckReport:
    """二维及以上的单形由其一维骨架唯一确定；给出 mask 时只检查其中的单形"""
    report = CheckReport('aspherical', True)
    for dim in range(2, complex_.dimension + 1):
        seen: Dict[FrozenSet[SimplexRef], SimplexRef] = {}
        simplices = complex_.simplices(dim) if mask is None else mask.simplices(dim)
        for simplex in simplices:
            edges = complex_.skeleton(simplex, 1)
            if edges in seen:
                report.passed = False
                report.details.append(
                    f"{complex_.label(seen[edges])} ~ {complex_.label(simplex)}"
                )
            else:
                seen[edges] = simplex
    return report


def check_edge_complete(complex_: Multicomplex, mask: Optional['SubcomplexMask'] = None) -> CheckReport:
    """任意两个不同顶点之间至少有一条边（限定在 mask 内时边也须属于 mask）"""
    report = CheckReport('edge_complete', True)
    vertices = range(complex_.vertex_count) if mask is None else sorted(mask.vertices)
    for u, w in itertools.combinations(vertices, 2):
        present = complex_.simplices_on((u, w))
        if mask is not None:
            present = [e for e in present if e in mask]
        if not present:
            report.passed = False
            report.details.append(f"{{{complex_.vertex_names[u]},{complex_.vertex_names[w]}}}")
    return report


def check_unique_edges(complex_: Multicomplex) -> CheckReport:
    """每对顶点之间至多一条边"""
    report = CheckReport('unique_edges', True)
    for u, w in itertools.combinations(range(complex_.vertex_count), 2):
        count = complex_.copies((u, w))
        if count > 1:
            report.passed = False
            report.details.append(
                f"{{{complex_.vertex_names[u]},{complex_.vertex_names[w]}}} x{count}"
            )
    return report


def euler_characteristic(complex_: Multicomplex) -> int:
    return complex_.euler_characteristic()


@dataclass(frozen=True)
class SubcomplexMask:
    """子复形：显式成员集合，要求面封闭"""
    members: FrozenSet[SimplexRef]
    name: str = ''

    def __contains__(self, simplex: SimplexRef) -> bool:
        return simplex.canonical()[0] in self.members

    def __iter__(self) -> Iterator[SimplexRef]:
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    @property
    def vertices(self) -> FrozenSet[VertexId]:
        return frozenset(s.vertices[0] for s in self.members if s.dim == 0)

    def simplices(self, dim: int) -> List[SimplexRef]:
        return sorted(s for s in self.members if s.dim == dim)

    def validate(self, complex_: Multicomplex) -> 'SubcomplexMask':
        for simplex in self.members:
            if simplex not in complex_:
                raise UnknownSimplexError(f"子复形 {self.name} 含有复形外的单形 {simplex}")
            for face_ref in complex_.faces(simplex):
                if face_ref not in self.members:
                    raise NotFaceClosedError(
                        f"子复形 {self.name} 不是面封闭的: {complex_.label(simplex)} "
                        f"的面 {complex_.label(face_ref)} 不在其中"
                    )
        return self

    def union(self, other: 'SubcomplexMask', name: str = '') -> 'SubcomplexMask':
        return SubcomplexMask(self.members | other.members, name or f"{self.name}∪{other.name}")

    def intersection(self, other: 'SubcomplexMask', name: str = '') -> 'SubcomplexMask':
        return SubcomplexMask(self.members & other.members, name or f"{self.name}∩{other.name}")

    @classmethod
    def from_members(cls, complex_: Multicomplex, simplices: Iterable[SimplexRef],
                     name: str = '') -> 'SubcomplexMask':
        """由成员集合构造并检查面封闭"""
        members = frozenset(s.canonical()[0] for s in simplices)
        return cls(members, name).validate(complex_)

    @classmethod
    def closure(cls, complex_: Multicomplex, simplices: Iterable[SimplexRef],
                name: str = '') -> 'SubcomplexMask':
        """单形集合的面闭包"""
        members = set()
        stack = [s.canonical()[0] for s in simplices]
        while stack:
            simplex = stack.pop()
            if simplex in members:
                continue
            if simplex not in complex_:
                raise UnknownSimplexError(f"复形 {complex_.name} 中没有单形 {simplex}")
            members.add(simplex)
            stack.extend(complex_.faces(simplex))
        return cls(frozenset(members), name)

    @classmethod
    def full(cls, complex_: Multicomplex, name: str = 'ALL') -> 'SubcomplexMask':
        return cls(frozenset(complex_.all_simplices()), name)

    @classmethod
    def empty(cls, name: str = '') -> 'SubcomplexMask':
        return cls(frozenset(), name)


def star_closure(complex_: Multicomplex, mask: SubcomplexMask, name: str = '') -> SubcomplexMask:
    """与子复形顶点相交的全部单形的面闭包（闭星形）"""
    vertices = mask.vertices
    touching = [s for s in complex_.all_simplices() if vertices & s.vertex_set]
    return SubcomplexMask.closure(complex_, touching, name or f"star({mask.name})")


class PathWordContext(Protocol):
    """is_A_related 所需的边路径词与字问题判定"""

    def edge_label(self, edge: SimplexRef) -> Any: ...

    def multiply(self, a: Any, b: Any) -> Any: ...

    def invert(self, a: Any) -> Any: ...

    def is_identity(self, a: Any) -> bool: ...


class EdgeLabeling:
    """
    边标签：把复形的每条边映到群中的元素

    未给出标签的边取单位元；反向的边取逆元。
    """

    def __init__(self, complex_: Multicomplex, group: Any, labels: Optional[Dict[SimplexRef, Any]] = None,
                 loops: Optional[Dict[Tuple[VertexId, int], Any]] = None):
        self.complex = complex_
        self.group = group
        self._labels: Dict[SimplexRef, Any] = {}
        for edge, value in (labels or {}).items():
            canonical, sign = edge.canonical()
            if canonical.dim != 1 or canonical not in complex_:
                raise UnknownSimplexError(f"标签引用了不存在的边 {edge}")
            self._labels[canonical] = value if sign > 0 else group.invert(value)
        self.loops: Dict[Tuple[VertexId, int], Any] = dict(loops or {})

    def edge_label(self, edge: SimplexRef) -> Any:
        if edge.vertices[0] == edge.vertices[-1]:
            return self.group.identity()
        canonical, sign = edge.canonical()
        value = self._labels.get(canonical)
        if value is None:
            return self.group.identity()
        return value if sign > 0 else self.group.invert(value)

    def path_label(self, edges: Sequence[SimplexRef]) -> Any:
        value = self.group.identity()
        for edge in edges:
            value = self.group.multiply(value, self.edge_label(edge))
        return value

    def has_label(self, edge: SimplexRef) -> bool:
        return edge.canonical()[0] in self._labels

    def multiply(self, a: Any, b: Any) -> Any:
        return self.group.multiply(a, b)

    def invert(self, a: Any) -> Any:
        return self.group.invert(a)

    def is_identity(self, a: Any) -> bool:
        return self.group.is_identity(a)


def is_A_related(
    t1: Sequence[SimplexRef],
    t2: Sequence[SimplexRef],
    sub: SubcomplexMask,
    context: PathWordContext,
) -> bool:
    """
    判断两组有向边是否 A-相关

    顶点双射由元组位置决定；对每个需要移动的顶点穷举子复形中连接
    它与其像的边，要求每个 e_i·f_{e_i(1)}·e'_i^{-1}·f_{e_i(0)}^{-1} 在群中平凡。
    重合的顶点取退化连接（常值路径）。

    Raises:
        ValidationError: 元组长度不同
        OracleInconclusive: 字问题判定达到上限
    """
    if len(t1) != len(t2):
        raise ValidationError(f"边元组长度不同: {len(t1)} != {len(t2)}")

    correspondence: Dict[VertexId, VertexId] = {}
    for e, e_prime in zip(t1, t2):
        for x, y in zip(e.vertices, e_prime.vertices):
            if correspondence.setdefault(x, y) != y:
                return False
    if len(set(correspondence.values())) != len(correspondence):
        return False

    sub_edges = {}
    for edge in sub.simplices(1):
        sub_edges.setdefault(edge.vertices, []).append(edge)

    moving = sorted(x for x, y in correspondence.items() if x != y)
    options: List[List[SimplexRef]] = []
    for x in moving:
        y = correspondence[x]
        key = (min(x, y), max(x, y))
        connecting = [SimplexRef((x, y), e.copy) for e in sub_edges.get(key, [])]
        if not connecting:
            return False
        options.append(connecting)

    for choice in itertools.product(*options):
        connectors = dict(zip(moving, choice))

        def connector_label(x: VertexId) -> Any:
            if x in connectors:
                return context.edge_label(connectors[x])
            return None

        trivial = True
        for e, e_prime in zip(t1, t2):
            value = context.edge_label(e)
            end_connector = connector_label(e.vertices[1])
            if end_connector is not None:
                value = context.multiply(value, end_connector)
            value = context.multiply(value, context.invert(context.edge_label(e_prime)))
            start_connector = connector_label(e.vertices[0])
            if start_connector is not None:
                value = context.multiply(value, context.invert(start_connector))
            if not context.is_identity(value):
                trivial = False
                break
        if trivial:
            return True
    return False
