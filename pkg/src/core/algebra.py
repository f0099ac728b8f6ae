"""
链代数模块
精确有理数系数的链与反对称上链，边缘/上边缘算子，l¹、l∞ 与 ε-范数
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .mcx import Multicomplex, SimplexRef, SubcomplexMask, canonical_orientation
from ..utils.exceptions import DimensionMismatchError
from ..utils.helpers import format_rational

Coefficient = Union[int, Fraction]


def _canonical_terms(
    complex_: Multicomplex, dim: int, terms: Iterable[Tuple[SimplexRef, Coefficient]]
) -> Dict[SimplexRef, Fraction]:
    result: Dict[SimplexRef, Fraction] = {}
    for simplex, coefficient in terms:
        if simplex.dim != dim:
            raise DimensionMismatchError(f"单形 {simplex} 的维数不是 {dim}")
        canonical, sign = canonical_orientation(simplex.vertices, simplex.copy, complex_)
        value = result.get(canonical, Fraction(0)) + sign * Fraction(coefficient)
        if value == 0:
            result.pop(canonical, None)
        else:
            result[canonical] = value
    return result


class Chain:
    """
    j 维链：规范代表元到非零有理系数的映射

    置换后的单形按排列符号折算到规范代表元上。
    """

    __slots__ = ('complex', 'dim', 'terms')

    def __init__(self, complex_: Multicomplex, dim: int,
                 terms: Optional[Dict[SimplexRef, Coefficient]] = None):
        self.complex = complex_
        self.dim = dim
        self.terms: Dict[SimplexRef, Fraction] = _canonical_terms(
            complex_, dim, (terms or {}).items()
        )

    @classmethod
    def from_terms(cls, complex_: Multicomplex, dim: int,
                   terms: Iterable[Tuple[Coefficient, SimplexRef]]) -> 'Chain':
        chain = cls(complex_, dim)
        chain.terms = _canonical_terms(complex_, dim, ((s, c) for c, s in terms))
        return chain

    @classmethod
    def simplex(cls, complex_: Multicomplex, simplex: SimplexRef, coefficient: Coefficient = 1) -> 'Chain':
        return cls.from_terms(complex_, simplex.dim, [(coefficient, simplex)])

    @classmethod
    def zero(cls, complex_: Multicomplex, dim: int) -> 'Chain':
        return cls(complex_, dim)

    def _combine(self, other: 'Chain', factor: int) -> 'Chain':
        if other.dim != self.dim:
            raise DimensionMismatchError(f"链维数不同: {self.dim} 与 {other.dim}")
        result = Chain(self.complex, self.dim)
        terms = dict(self.terms)
        for simplex, value in other.terms.items():
            total = terms.get(simplex, Fraction(0)) + factor * value
            if total == 0:
                terms.pop(simplex, None)
            else:
                terms[simplex] = total
        result.terms = terms
        return result

    def __add__(self, other: 'Chain') -> 'Chain':
        return self._combine(other, 1)

    def __sub__(self, other: 'Chain') -> 'Chain':
        return self._combine(other, -1)

    def __neg__(self) -> 'Chain':
        return self.scale(-1)

    def __mul__(self, scalar: Coefficient) -> 'Chain':
        return self.scale(scalar)

    __rmul__ = __mul__

    def scale(self, scalar: Coefficient) -> 'Chain':
        result = Chain(self.complex, self.dim)
        scalar = Fraction(scalar)
        if scalar != 0:
            result.terms = {s: v * scalar for s, v in self.terms.items()}
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    def __iter__(self) -> Iterator[Tuple[SimplexRef, Fraction]]:
        return iter(sorted(self.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, simplex: SimplexRef) -> Fraction:
        canonical, sign = simplex.canonical()
        return sign * self.terms.get(canonical, Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def support(self) -> List[SimplexRef]:
        return sorted(self.terms)

    def rows(self) -> List[Dict[str, str]]:
        return [
            {'simplex': self.complex.label(s), 'coefficient': format_rational(v)}
            for s, v in self
        ]

    def __repr__(self) -> str:
        body = ' + '.join(f"{format_rational(v)}·{self.complex.label(s)}" for s, v in self)
        return f"Chain[{self.dim}]({body or '0'})"


class Cochain:
    """
    j 维反对称上链：规范代表元上的取值（缺省为 0）

    在置换单形上的取值等于排列符号乘以规范取值。
    """

    __slots__ = ('complex', 'dim', 'values')

    def __init__(self, complex_: Multicomplex, dim: int,
                 values: Optional[Dict[SimplexRef, Coefficient]] = None):
        self.complex = complex_
        self.dim = dim
        self.values: Dict[SimplexRef, Fraction] = _canonical_terms(
            complex_, dim, (values or {}).items()
        )

    def __call__(self, simplex: SimplexRef) -> Fraction:
        canonical, sign = simplex.canonical()
        return sign * self.values.get(canonical, Fraction(0))

    def evaluate(self, chain: Chain) -> Fraction:
        return pair(self, chain)

    def __add__(self, other: 'Cochain') -> 'Cochain':
        if other.dim != self.dim:
            raise DimensionMismatchError(f"上链维数不同: {self.dim} 与 {other.dim}")
        values = dict(self.values)
        for simplex, value in other.values.items():
            total = values.get(simplex, Fraction(0)) + value
            if total == 0:
                values.pop(simplex, None)
            else:
                values[simplex] = total
        result = Cochain(self.complex, self.dim)
        result.values = values
        return result

    def scale(self, scalar: Coefficient) -> 'Cochain':
        result = Cochain(self.complex, self.dim)
        scalar = Fraction(scalar)
        if scalar != 0:
            result.values = {s: v * scalar for s, v in self.values.items()}
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.dim == other.dim and self.values == other.values

    def __hash__(self):
        return hash((self.dim, frozenset(self.values.items())))

    def is_zero(self) -> bool:
        return not self.values

    def rows(self) -> List[Dict[str, str]]:
        return [
            {'simplex': self.complex.label(s), 'value': format_rational(v)}
            for s, v in sorted(self.values.items())
        ]

    def __repr__(self) -> str:
        body = ', '.join(f"{self.complex.label(s)}↦{format_rational(v)}"
                         for s, v in sorted(self.values.items()))
        return f"Cochain[{self.dim}]({body})"


@dataclass(frozen=True)
class RelativePair:
    """相对对 (K, L)；sub 为 None 时表示绝对情形"""
    complex: Multicomplex
    sub: Optional[SubcomplexMask] = None

    def __post_init__(self):
        if self.sub is not None:
            self.sub.validate(self.complex)

    def in_sub(self, simplex: SimplexRef) -> bool:
        return self.sub is not None and simplex in self.sub


def boundary(z: Chain) -> Chain:
    """∂z = Σ a_σ Σ_j (-1)^j d_j σ；零维链的边缘是 -1 维的零链（不做增广）"""
    if z.dim <= 0:
        return Chain.zero(z.complex, z.dim - 1)
    terms: Dict[SimplexRef, Fraction] = {}
    for simplex, value in z.terms.items():
        for j, face_ref in enumerate(z.complex.faces(simplex)):
            total = terms.get(face_ref, Fraction(0)) + (-1) ** j * value
            if total == 0:
                terms.pop(face_ref, None)
            else:
                terms[face_ref] = total
    result = Chain(z.complex, z.dim - 1)
    result.terms = terms
    return result


def coboundary(c: Cochain) -> Cochain:
    """(δc)(σ) = c(∂σ)"""
    complex_ = c.complex
    values: Dict[SimplexRef, Fraction] = {}
    for upper in complex_.simplices(c.dim + 1):
        total = Fraction(0)
        for j, face_ref in enumerate(complex_.faces(upper)):
            total += (-1) ** j * c.values.get(face_ref, Fraction(0))
        if total != 0:
            values[upper] = total
    result = Cochain(complex_, c.dim + 1)
    result.values = values
    return result


def l1(z: Chain) -> Fraction:
    return sum((abs(v) for v in z.terms.values()), Fraction(0))


def linf(c: Cochain, domain: Optional[Iterable[SimplexRef]] = None) -> Fraction:
    """domain 为空时取上链维数的全部单形"""
    if domain is None:
        values = c.values.values()
        return max((abs(v) for v in values), default=Fraction(0))
    return max((abs(c(s)) for s in domain), default=Fraction(0))


def restrict(z: Chain, mask: Optional[SubcomplexMask], inside: bool = True) -> Chain:
    """保留（inside=True）或去掉落在子复形中的项；mask 为 None 表示全部"""
    result = Chain(z.complex, z.dim)
    if mask is None:
        result.terms = dict(z.terms) if inside else {}
    else:
        result.terms = {s: v for s, v in z.terms.items() if (s in mask) == inside}
    return result


def eps_norm(z: Chain, epsilon: Coefficient, sub: Optional[SubcomplexMask] = None) -> Fraction:
    """
    ε-范数 ‖z‖ + ε‖∂z|_A‖

    sub 为 None 时 A 取整个复形（即 ‖z‖_ε）
    """
    epsilon = Fraction(epsilon)
    if epsilon < 0:
        raise ValueError(f"ε 必须非负: {epsilon}")
    if epsilon == 0 or z.dim == 0:
        return l1(z)
    return l1(z) + epsilon * l1(restrict(boundary(z), sub))


def pair(c: Cochain, z: Chain) -> Fraction:
    """⟨c, z⟩ = Σ a_σ c(σ)"""
    if c.dim != z.dim:
        raise DimensionMismatchError(f"配对维数不同: 上链 {c.dim}, 链 {z.dim}")
    return sum((value * c.values.get(s, Fraction(0)) for s, value in z.terms.items()), Fraction(0))


def is_relative_cycle(z: Chain, relative: RelativePair) -> bool:
    """∂z 的每一项都落在 L 中（绝对情形要求 ∂z = 0）"""
    if z.dim == 0:
        return True
    return all(relative.in_sub(s) for s in boundary(z).terms)


def is_relative_cocycle(c: Cochain, relative: RelativePair) -> bool:
    """c 在 L 上为零且 δc = 0"""
    if relative.sub is not None and any(s in relative.sub for s in c.values):
        return False
    return coboundary(c).is_zero()


def relative_norm(z: Chain, relative: RelativePair) -> Fraction:
    return l1(restrict(z, relative.sub, inside=False))


@dataclass
class BoundaryBound:
    """‖∂z‖ 与 ‖z‖ 的比较"""
    chain_norm: Fraction
    boundary_norm: Fraction
    dimension: int
    within_trivial_bound: bool
    within_sharp_bound: bool


def boundary_bound_report(z: Chain) -> BoundaryBound:
    """‖∂z‖₁ ≤ (n+1)‖z‖₁ 恒成立；同时标记是否 ‖∂z‖₁ ≤ n‖z‖₁"""
    n = z.dim
    chain_norm = l1(z)
    boundary_norm = l1(boundary(z)) if n > 0 else Fraction(0)
    return BoundaryBound(
        chain_norm=chain_norm,
        boundary_norm=boundary_norm,
        dimension=n,
        within_trivial_bound=boundary_norm <= (n + 1) * chain_norm,
        within_sharp_bound=boundary_norm <= n * chain_norm,
    )


def indicator(complex_: Multicomplex, simplex: SimplexRef, value: Coefficient = 1) -> Cochain:
    """单个单形上的示性上链"""
    return Cochain(complex_, simplex.dim, {simplex: value})


def fundamental_cycle(complex_: Multicomplex, oriented: Sequence[Tuple[Coefficient, Sequence[int]]]) -> Chain:
    """按有序顶点元组（副本 0）给出的链"""
    if not oriented:
        raise DimensionMismatchError("空的项列表无法确定维数")
    dim = len(oriented[0][1]) - 1
    return Chain.from_terms(complex_, dim, [(c, SimplexRef(tuple(v), 0)) for c, v in oriented])

