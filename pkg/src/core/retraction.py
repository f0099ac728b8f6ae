"""
收缩模块
由中心单形定义的链映射 r : C_*(M, M′) → C_*(K, K′) ⊕ C_*(L, L′)、
A-相关轨道的规范化、链映射与收缩性质的穷举校验以及上闭链的转移
"""

import itertools
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .algebra import Chain, Cochain, RelativePair, boundary, coboundary, is_relative_cocycle, linf
from .cover import GluedSpace
from .mcx import Multicomplex, SimplexRef, SubcomplexMask, is_A_related
from .normal_forms import HNN
from ..utils.constants import TAG_K, TAG_L
from ..utils.exceptions import (
    ChoiceDependenceError, DegreeTooLowError, DimensionMismatchError, NotACocycleError,
    RelativeViolation, ValidationError,
)
from ..utils.helpers import permutation_sign
from ..utils.logger import get_logger

FIRST_CHOICE = 'first'
LAST_CHOICE = 'last'

OrbitResult = Optional[Tuple[SimplexRef, int]]


@dataclass(frozen=True)
class RetractedSimplex:
    """r(σ) = sign·simplex，simplex 为目标一侧的规范代表元"""
    tag: str
    simplex: SimplexRef
    sign: int


@dataclass
class RetractedChain:
    k: Chain
    l: Optional[Chain] = None

    def is_zero(self) -> bool:
        return self.k.is_zero() and (self.l is None or self.l.is_zero())

    def total(self) -> Chain:
        """两侧之和（融合模式下两侧都是 M 上的链）"""
        return self.k if self.l is None else self.k + self.l

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RetractedChain):
            return NotImplemented
        return self.k == other.k and self.l == other.l


@dataclass
class VerificationReport:
    check: str
    passed: bool = True
    checked: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        return 'PASS' if self.passed else 'FAIL'

    def fail(self, message: str):
        self.passed = False
        self.failures.append(message)


class Retraction:
    """
    粘合空间上的收缩链映射

    对 σ 取其规范提升，每对顶点之间按固定规则取一条最短路径，
    一维骨架全部落在这些路径上的单形即为 r(σ)。
    融合模式下目标为 M 中 K 或 L 的单形（按 A-相关规范化）；
    HNN 模式下取中心单形在 K 中字典序最小的原像。
    """

    def __init__(self, space: GluedSpace, workers: int = 1):
        self.logger = get_logger(__name__)
        self.space = space
        self.workers = max(1, workers)
        self._orbits: Dict[Tuple[SimplexRef, str], Optional[Tuple[SimplexRef, int]]] = {}
        self._retracted: Dict[Tuple[SimplexRef, str], Optional[RetractedSimplex]] = {}
        # retract_chain 的工作线程共享两个缓存与 space.discrepancies
        self._lock = threading.Lock()

    @property
    def target(self) -> Multicomplex:
        return self.space.original if self.space.mode == HNN else self.space.complex

    @property
    def is_hnn(self) -> bool:
        return self.space.mode == HNN

    # ---- 轨道规范化 ----

    def _related_signs(self, simplex: SimplexRef, other: SimplexRef) -> set:
        """other 的各种顶点排列中与 simplex 的一维骨架 A-相关者的排列符号"""
        space = self.space
        complex_ = space.complex
        a_vertices = space.a_vertices
        n = simplex.dim
        own_edges = complex_.edges_of(simplex)
        t1 = [
            SimplexRef((simplex.vertices[i], simplex.vertices[j]),
                       own_edges[(simplex.vertices[i], simplex.vertices[j])].copy)
            for i, j in itertools.combinations(range(n + 1), 2)
        ]
        other_edges = complex_.edges_of(other)
        signs = set()
        for perm in itertools.permutations(range(n + 1)):
            ordered = tuple(other.vertices[p] for p in perm)
            if any(x != y and (x not in a_vertices or y not in a_vertices)
                   for x, y in zip(simplex.vertices, ordered)):
                continue
            t2 = []
            for i, j in itertools.combinations(range(n + 1), 2):
                x, y = ordered[i], ordered[j]
                t2.append(SimplexRef((x, y), other_edges[(min(x, y), max(x, y))].copy))
            if is_A_related(t1, t2, space.a_mask, space.labeling):
                signs.add(permutation_sign(perm))
        return signs

    def _related_canonical(self, simplex: SimplexRef, tag: str) -> Optional[Tuple[SimplexRef, int]]:
        space = self.space
        part = space.k_mask if tag == TAG_K else space.l_mask
        fixed = {v for v in simplex.vertices if v not in space.a_vertices}
        for other in part.simplices(simplex.dim):
            if not fixed <= other.vertex_set:
                continue
            signs = self._related_signs(simplex, other)
            if not signs:
                continue
            if len(signs) > 1:
                return None
            return other, signs.pop()
        return simplex, 1

    def _action_canonical(self, simplex: SimplexRef) -> Optional[Tuple[SimplexRef, int]]:
        images: Dict[SimplexRef, set] = {}
        for g in self.space.action.elements():
            image, sign = self.space.action.act(g, simplex)
            images.setdefault(image, set()).add(sign)
        least = min(images)
        signs = images[least]
        return None if len(signs) > 1 else (least, signs.pop())

    def orbit_canonical(self, simplex: SimplexRef, tag: str) -> Optional[Tuple[SimplexRef, int]]:
        """
        轨道代表元与符号；轨道中含有反向的自身时返回 None（有理系数下为零类）

        HNN 模式下 simplex 属于原复形 K，代表元为 P(simplex) 的最小原像。
        """
        canonical, sign = simplex.canonical()
        key = (canonical, tag)
        if key not in self._orbits:
            computed, discrepancy = self._compute_orbit(canonical, tag)
            with self._lock:
                if key not in self._orbits:
                    self._orbits[key] = computed
                    if discrepancy is not None:
                        self.space.discrepancies.append(discrepancy)
                        self.logger.warning(f"⚠️ {discrepancy}")
        result = self._orbits[key]
        if result is None:
            return None
        return result[0], sign * result[1]

    def _compute_orbit(self, simplex: SimplexRef, tag: str) -> Tuple[OrbitResult, Optional[str]]:
        """(代表元, 与显式群作用的差异说明)"""
        if self.is_hnn:
            image = self.space.projection.get(simplex)
            if image is None:
                return None, None
            least, sign = self.space.preimages(image[0])[0]
            return (least, image[1] * sign), None
        related = self._related_canonical(simplex, tag)
        if self.space.action is None:
            return related, None
        explicit = self._action_canonical(simplex)
        if explicit == related:
            return explicit, None
        return explicit, (
            f"{self.space.complex.label(simplex)}: A-相关规范化 {self._format(related)} "
            f"与显式群作用 {self._format(explicit)} 不一致"
        )

    def _format(self, result: Optional[Tuple[SimplexRef, int]]) -> str:
        if result is None:
            return '0'
        simplex, sign = result
        return f"{'+' if sign > 0 else '-'}{self.space.complex.label(simplex)}"

    def canonicalize_chain(self, z: Chain) -> Chain:
        """逐项换成轨道代表元；A 中的单形按 K 一侧规范化"""
        if z.dim < 2:
            return z
        terms: Dict[SimplexRef, Fraction] = {}
        for simplex, value in z.terms.items():
            tag = TAG_K if self.is_hnn else self.space.simplex_tag(simplex)
            result = self.orbit_canonical(simplex, tag)
            if result is None:
                continue
            representative, sign = result
            terms[representative] = terms.get(representative, Fraction(0)) + sign * value
        return Chain(z.complex, z.dim, terms)

    # ---- 收缩 ----

    def _choose(self, sigma: SimplexRef, choice: str):
        space = self.space
        lift = space.lift_simplex(sigma)
        chosen = {}
        for i, j in itertools.combinations(range(len(lift)), 2):
            paths = space.minimizing_paths(lift[i], lift[j])
            chosen[(i, j)] = paths[0] if choice == FIRST_CHOICE else paths[-1]
        return lift, chosen

    def _retract_canonical(self, sigma: SimplexRef, choice: str) -> Optional[RetractedSimplex]:
        space = self.space
        lift, chosen = self._choose(sigma, choice)
        central = space.central_simplex(lift, chosen)
        if not central.found:
            self.logger.debug(f"{space.complex.label(sigma)} 没有中心单形，r = 0")
            return None

        if self.is_hnn:
            preimages = space.preimages(central.simplex)
            if not preimages:
                raise ValidationError(f"中心单形 {space.complex.label(central.simplex)} 在 K 中没有原像")
            least, sign = preimages[0]
            return RetractedSimplex(TAG_K, least, central.sign * sign)

        orbit = self.orbit_canonical(central.simplex, central.tag)
        if orbit is None:
            return None
        representative, sign = orbit
        return RetractedSimplex(central.tag, representative, central.sign * sign)

    def retract_orbit(self, simplex: SimplexRef, choice: str = FIRST_CHOICE) -> Optional[RetractedSimplex]:
        """
        r(Gσ)；没有中心单形时返回 None

        Raises:
            DimensionMismatchError: 维数低于 2
            ChoiceDependenceError: 校验模式下两种路径选择给出不同轨道
            CapExceededError: 覆叠展开超出上限
        """
        if simplex.dim < 2:
            raise DimensionMismatchError(f"收缩只对 2 维及以上的单形定义: {simplex}")
        canonical, sign = simplex.canonical()
        key = (canonical, choice)
        if key not in self._retracted:
            result = self._retract_canonical(canonical, choice)
            if choice == FIRST_CHOICE and self.space.caps.verify_choices:
                alternative = self._retract_canonical(canonical, LAST_CHOICE)
                if alternative != result:
                    raise ChoiceDependenceError(
                        f"{self.space.complex.label(canonical)} 的收缩结果依赖于路径选择: "
                        f"{self.format_result(result)} / {self.format_result(alternative)}"
                    )
            with self._lock:
                self._retracted.setdefault(key, result)
        result = self._retracted[key]
        if result is None:
            return None
        return RetractedSimplex(result.tag, result.simplex, sign * result.sign)

    def format_result(self, result: Optional[RetractedSimplex]) -> str:
        if result is None:
            return '0'
        label = self.target.label(result.simplex)
        return f"{'+' if result.sign > 0 else '-'}{label} [{result.tag}]"

    def _in_relative_target(self, result: RetractedSimplex) -> bool:
        mask = self.space.original_relative if self.is_hnn else self.space.relative
        return mask is not None and result.simplex in mask

    def retract_chain(self, z: Chain, relative: bool = False) -> RetractedChain:
        """
        线性延拓；relative 时 M′ 中的单形必须落到 K′ ⊕ L′，落入 K′、L′ 的项记为零

        Raises:
            RelativeViolation: M′ 中单形的像不在 K′ ∪ L′ 中
        """
        if z.complex is not self.space.complex:
            raise DimensionMismatchError(f"链不在 {self.space.complex.name} 上")
        if z.dim < 2:
            raise DimensionMismatchError(f"收缩只对 2 维及以上的链定义: {z.dim}")
        terms = sorted(z.terms.items())
        simplices = [s for s, _ in terms]
        if self.workers > 1 and len(simplices) > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                results = list(pool.map(self.retract_orbit, simplices))
        else:
            results = [self.retract_orbit(s) for s in simplices]

        parts: Dict[str, Dict[SimplexRef, Fraction]] = {TAG_K: {}, TAG_L: {}}
        m_prime = self.space.relative
        for (simplex, value), result in zip(terms, results):
            if relative and m_prime is not None and simplex in m_prime:
                if result is not None and not self._in_relative_target(result):
                    raise RelativeViolation(
                        f"M′ 中的 {self.space.complex.label(simplex)} 被映到 {self.format_result(result)}"
                    )
                continue
            if result is None or (relative and self._in_relative_target(result)):
                continue
            bucket = parts[result.tag]
            bucket[result.simplex] = bucket.get(result.simplex, Fraction(0)) + result.sign * value

        k_chain = Chain(self.target, z.dim, parts[TAG_K])
        l_chain = None if self.is_hnn else Chain(self.target, z.dim, parts[TAG_L])
        return RetractedChain(k_chain, l_chain)

    # ---- 校验 ----

    def verify_chain_map(self, max_dim: Optional[int] = None) -> VerificationReport:
        """对每个 3 维及以上的单形检查 ∂r(σ) = r(∂σ)（按轨道规范化后比较）"""
        report = VerificationReport('chain_map')
        complex_ = self.space.complex
        top = complex_.dimension if max_dim is None else min(max_dim, complex_.dimension)
        for dim in range(3, top + 1):
            for sigma in complex_.simplices(dim):
                report.checked += 1
                image = self.retract_chain(Chain.simplex(complex_, sigma)).total()
                lhs = self.canonicalize_chain(boundary(image))
                rhs = self.retract_chain(boundary(Chain.simplex(complex_, sigma))).total()
                if lhs != rhs:
                    report.fail(f"∂r ≠ r∂ 于 {complex_.label(sigma)}")
        self.logger.info(f"链映射校验: {report.status}, 检查 {report.checked} 个单形")
        return report

    def verify_retraction(self) -> VerificationReport:
        """r∘i = id：K、L 中 2 维及以上的单形收缩到自己的轨道"""
        report = VerificationReport('retraction')
        if self.is_hnn:
            original = self.space.original
            for simplex in original.all_simplices():
                if simplex.dim < 2:
                    continue
                image = self.space.projection.get(simplex)
                if image is None:
                    continue
                report.checked += 1
                result = self.retract_orbit(image[0])
                expected = self.orbit_canonical(simplex, TAG_K)
                got = None if result is None else (result.simplex, result.sign * image[1])
                if got != expected:
                    report.fail(f"r(P({original.label(simplex)})) = {self.format_result(result)}")
        else:
            for simplex in self.space.candidate_simplices():
                report.checked += 1
                tag = self.space.simplex_tag(simplex)
                result = self.retract_orbit(simplex)
                expected = self.orbit_canonical(simplex, tag)
                got = None if result is None else (result.simplex, result.sign)
                if got != expected or (result is not None and result.tag != tag):
                    report.fail(f"r({self.space.complex.label(simplex)}) = {self.format_result(result)}")
        self.logger.info(f"收缩校验: {report.status}, 检查 {report.checked} 个单形")
        return report

    # ---- 上闭链转移 ----

    def _part_mask(self, tag: str) -> Optional[SubcomplexMask]:
        if self.is_hnn:
            return None
        return self.space.k_mask if tag == TAG_K else self.space.l_mask

    def _validate_cocycle(self, c: Cochain, tag: str, relative: bool):
        if c.complex is not self.target:
            raise DimensionMismatchError(f"上链不在 {self.target.name} 上")
        mask = self._part_mask(tag)
        if mask is not None:
            outside = [s for s in c.values if s not in mask]
            if outside:
                raise NotACocycleError(f"{tag} 侧上链在 {self.target.label(outside[0])} 上非零")
        delta = coboundary(c)
        for simplex, value in delta.values.items():
            if mask is None or simplex in mask:
                raise NotACocycleError(f"{tag} 侧上链不闭: δc({self.target.label(simplex)}) = {value}")
        if relative:
            sub = self.space.original_relative if self.is_hnn else self.space.relative
            if sub is not None and any(s in sub for s in c.values):
                raise NotACocycleError(f"{tag} 侧上链在相对子复形上非零")
        simplices = self.target.simplices(c.dim) if mask is None else mask.simplices(c.dim)
        for simplex in simplices:
            canonical = self.orbit_canonical(simplex, tag)
            expected = Fraction(0) if canonical is None else canonical[1] * c(canonical[0])
            if c(simplex) != expected:
                raise ValidationError(
                    f"{tag} 侧上链在 {self.target.label(simplex)} 上不是轨道不变的"
                )

    def transfer_cocycle(self, c1: Cochain, c2: Optional[Cochain] = None,
                         relative: bool = False) -> Cochain:
        """
        c(σ) = c₁(r(σ)) 或 c₂(r(σ))

        Raises:
            DegreeTooLowError: 次数低于 3
            NotACocycleError: 输入不是（相对）上闭链
            ValidationError: 输入不是轨道不变的，输出不是上闭链，或输出范数超界
        """
        p = c1.dim
        if p < 3:
            raise DegreeTooLowError(f"上闭链转移要求次数至少为 3，实际为 {p}")
        if self.is_hnn:
            if c2 is not None:
                raise ValidationError("HNN 模式只接受一个上闭链")
        else:
            if c2 is None:
                c2 = Cochain(self.target, p)
            if c2.dim != p:
                raise DimensionMismatchError(f"两个上链的次数不同: {p} 与 {c2.dim}")
            self._validate_cocycle(c2, TAG_L, relative)
        self._validate_cocycle(c1, TAG_K, relative)

        complex_ = self.space.complex
        m_prime = self.space.relative if relative else None
        values: Dict[SimplexRef, Fraction] = {}
        for sigma in complex_.simplices(p):
            if m_prime is not None and sigma in m_prime:
                continue
            result = self.retract_orbit(sigma)
            if result is None:
                continue
            source = c1 if result.tag == TAG_K else c2
            value = result.sign * source(result.simplex)
            if value != 0:
                values[sigma] = value
        c = Cochain(complex_, p, values)

        if not is_relative_cocycle(c, RelativePair(complex_, m_prime)):
            raise ValidationError("转移后的上链不是（相对）上闭链")
        bound = max(linf(c1), linf(c2) if c2 is not None else Fraction(0))
        if linf(c) > bound:
            raise ValidationError(f"转移后的上链范数 {linf(c)} 超过 {bound}")
        self.logger.info(f"✅ 上闭链转移完成: {len(values)} 个非零值, ‖c‖∞ = {linf(c)}")
        return c


def retract_orbit(simplex: SimplexRef, space: GluedSpace) -> Optional[RetractedSimplex]:
    return Retraction(space).retract_orbit(simplex)


def retract_chain(z: Chain, space: GluedSpace, relative: bool = False, workers: int = 1) -> RetractedChain:
    return Retraction(space, workers).retract_chain(z, relative)


def transfer_cocycle(c1: Cochain, c2: Optional[Cochain], space: GluedSpace,
                     relative: bool = False) -> Cochain:
    return Retraction(space).transfer_cocycle(c1, c2, relative)
