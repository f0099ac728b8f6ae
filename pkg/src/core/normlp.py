"""
范数线性规划模块
在固定有限复形上精确求解最小 l¹ 代表元、对偶 l∞ 证书、填充范数与 ε-范数
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import (
    Chain, Cochain, RelativePair, boundary, coboundary, eps_norm, is_relative_cycle, l1, linf,
    pair, restrict,
)
from .mcx import Multicomplex, SimplexRef, SubcomplexMask
from .simplex import INFEASIBLE, OPTIMAL, LinearProgram, LpSolution, PivotRecord, solve
from ..utils.exceptions import (
    DimensionMismatchError, NotABoundaryError, NotACycleError, ValidationError,
)
from ..utils.helpers import format_rational
from ..utils.logger import get_logger

OBJECTIVE_L1 = 'l1'
OBJECTIVE_EPS = 'eps'


@dataclass
class LpProblem:
    """
    范数问题：基链 z₀ 加上边缘与（相对情形）L 中的链

    objective 为 'l1' 或 'eps'；后者使用 epsilon 与 sub（子复形 A）。
    """
    base: Chain
    relative: RelativePair
    objective: str = OBJECTIVE_L1
    epsilon: Fraction = Fraction(0)
    sub: Optional[SubcomplexMask] = None

    @property
    def complex(self) -> Multicomplex:
        return self.base.complex

    @property
    def degree(self) -> int:
        return self.base.dim


@dataclass
class LpCertificate:
    """原始最优值、最优链、对偶上链与对偶值"""
    primal_value: Fraction
    optimal_chain: Chain
    dual_cochain: Cochain
    dual_value: Fraction
    dual_sup_norm: Fraction = Fraction(0)
    pivots: List[PivotRecord] = field(default_factory=list)

    def rows(self) -> List[Dict[str, str]]:
        return self.dual_cochain.rows()


@dataclass
class NormResult:
    """一次求解的最优值、最优链与 A-边缘质量"""
    value: Fraction
    chain: Chain
    boundary_mass: Fraction = Fraction(0)
    epsilon: Fraction = Fraction(0)
    pivots: List[PivotRecord] = field(default_factory=list)


class _Columns:
    """变量登记：名称 → 列号，按登记顺序编号以保证确定性"""

    def __init__(self):
        self.names: List[str] = []
        self.costs: List[Fraction] = []

    def add(self, name: str, cost: Fraction) -> int:
        self.names.append(name)
        self.costs.append(Fraction(cost))
        return len(self.names) - 1


class NormMinimizer:
    """
    范数线性规划引擎

    所有问题都化为标准形 min c·x, Ax = b, x ≥ 0，
    用精确两阶段单纯形法（Bland 规则）求解。
    """

    def __init__(self, trace: bool = False):
        self.logger = get_logger(__name__)
        self.trace = trace

    # ------------------------------------------------------------------
    # 校验
    # ------------------------------------------------------------------

    def _check_cycle(self, z0: Chain, relative: RelativePair):
        if relative.complex is not z0.complex:
            raise DimensionMismatchError("链与相对对不在同一个复形上")
        if z0.dim < 0 or z0.dim > z0.complex.dimension:
            raise DimensionMismatchError(f"链维数 {z0.dim} 超出复形维数 {z0.complex.dimension}")
        if not is_relative_cycle(z0, relative):
            raise NotACycleError(f"{z0!r} 不是相对闭链")

    # ------------------------------------------------------------------
    # 建模
    # ------------------------------------------------------------------

    def _representative_program(
        self, z0: Chain, relative: RelativePair, epsilon: Fraction = Fraction(0),
        sub: Optional[SubcomplexMask] = None,
    ) -> Tuple[LinearProgram, List[SimplexRef], Dict[SimplexRef, Tuple[int, int]]]:
        """
        行：L 外的 n 维单形 σ，u_σ − w_σ − (∂β)_σ = z₀(σ)
        ε > 0 时对 A 中每个 n−1 维单形 ρ 另加 p_ρ − q_ρ − (∂(u−w))_ρ = 0
        """
        complex_ = z0.complex
        n = z0.dim
        rows = [s for s in complex_.simplices(n) if not relative.in_sub(s)]
        row_index = {s: i for i, s in enumerate(rows)}
        columns = _Columns()

        split: Dict[SimplexRef, Tuple[int, int]] = {}
        for simplex in rows:
            label = complex_.label(simplex)
            split[simplex] = (columns.add(f"u[{label}]", 1), columns.add(f"w[{label}]", 1))

        coefficients: List[Dict[int, Fraction]] = [dict() for _ in rows]
        for simplex in rows:
            u, w = split[simplex]
            coefficients[row_index[simplex]][u] = Fraction(1)
            coefficients[row_index[simplex]][w] = Fraction(-1)

        for upper in complex_.simplices(n + 1):
            if relative.in_sub(upper):
                continue
            label = complex_.label(upper)
            plus = columns.add(f"β+[{label}]", 0)
            minus = columns.add(f"β-[{label}]", 0)
            for j, face_ref in enumerate(complex_.faces(upper)):
                i = row_index.get(face_ref)
                if i is None:
                    continue
                sign = (-1) ** j
                row = coefficients[i]
                row[plus] = row.get(plus, Fraction(0)) - sign
                row[minus] = row.get(minus, Fraction(0)) + sign

        rhs = [z0.coefficient(s) for s in rows]
        names = [f"σ[{complex_.label(s)}]" for s in rows]

        if epsilon > 0 and sub is not None and n > 0:
            for rho in sub.simplices(n - 1):
                label = complex_.label(rho)
                p = columns.add(f"p[{label}]", epsilon)
                q = columns.add(f"q[{label}]", epsilon)
                row = {p: Fraction(1), q: Fraction(-1)}
                for simplex, _ in complex_.cofaces(rho):
                    if simplex not in split:
                        continue
                    u, w = split[simplex]
                    incidence = self._incidence(complex_, simplex, rho)
                    row[u] = row.get(u, Fraction(0)) - incidence
                    row[w] = row.get(w, Fraction(0)) + incidence
                coefficients.append(row)
                rhs.append(Fraction(0))
                names.append(f"ρ[{label}]")

        lp = LinearProgram(num_vars=len(columns.names), costs=columns.costs, var_names=columns.names)
        for row, value, name in zip(coefficients, rhs, names):
            lp.add_row(row, value, name)
        return lp, rows, split

    @staticmethod
    def _incidence(complex_: Multicomplex, simplex: SimplexRef, face_ref: SimplexRef) -> int:
        """[σ : ρ] = Σ_{j: d_jσ = ρ} (-1)^j"""
        return sum((-1) ** j for j, f in enumerate(complex_.faces(simplex)) if f == face_ref)

    def _solve(self, lp: LinearProgram, what: str) -> LpSolution:
        self.logger.debug(f"🔧 {what}: {len(lp.rows)} 行, {lp.num_vars} 列")
        solution = solve(lp, trace=self.trace)
        if self.trace:
            self.logger.debug(f"{what}: 共 {len(solution.pivots)} 次换基")
        return solution

    @staticmethod
    def _chain_from(z0: Chain, rows: Sequence[SimplexRef],
                    split: Dict[SimplexRef, Tuple[int, int]], x: Sequence[Fraction]) -> Chain:
        terms = []
        for simplex in rows:
            u, w = split[simplex]
            if x[u] != x[w]:
                terms.append((x[u] - x[w], simplex))
        return Chain.from_terms(z0.complex, z0.dim, terms)

    # ------------------------------------------------------------------
    # 操作
    # ------------------------------------------------------------------

    def min_l1(self, z0: Chain, relative: Optional[RelativePair] = None) -> Tuple[Fraction, Chain]:
        """
        最小 l¹ 代表元

        在 z₀ + ∂C_{n+1} (+ C_n(L)) 上精确最小化 ‖·‖₁；
        返回的最优链只含 L 外的项。

        Raises:
            NotACycleError: z₀ 不是相对闭链
            DimensionMismatchError: 维数不合法
        """
        result = self.solve_representative(z0, relative)
        return result.value, result.chain

    def solve_representative(self, z0: Chain, relative: Optional[RelativePair] = None,
                             epsilon: Fraction = Fraction(0),
                             sub: Optional[SubcomplexMask] = None) -> NormResult:
        relative = relative or RelativePair(z0.complex)
        self._check_cycle(z0, relative)
        epsilon = Fraction(epsilon)
        if epsilon < 0:
            raise ValidationError(f"ε 必须非负: {format_rational(epsilon)}")

        lp, rows, split = self._representative_program(z0, relative, epsilon, sub)
        solution = self._solve(lp, "最小代表元")
        if solution.status != OPTIMAL:
            # z₀ 本身可行且目标有下界 0
            raise ValidationError(f"线性规划异常终止: {solution.status}")

        chain = self._chain_from(z0, rows, split, solution.x)
        mass = l1(restrict(boundary(chain), sub)) if (sub is not None and chain.dim > 0) else Fraction(0)
        self.logger.info(f"✅ 最小范数 {format_rational(solution.value)} (ε = {format_rational(epsilon)})")
        return NormResult(solution.value, chain, mass, epsilon, solution.pivots)

    def dual_certificate(self, problem: LpProblem) -> LpCertificate:
        """
        对偶证书

        对偶变量 y_σ 给出上链 c（L 上为 0）。逐项精确核对：
        原始值 = 对偶值、⟨c, z₀⟩ = 原始值、δc = 0；l¹ 目标下还核对 ‖c‖∞ ≤ 1。

        Raises:
            ValidationError: 某项核对失败
        """
        z0 = problem.base
        relative = problem.relative
        self._check_cycle(z0, relative)
        epsilon = problem.epsilon if problem.objective == OBJECTIVE_EPS else Fraction(0)
        sub = problem.sub if problem.objective == OBJECTIVE_EPS else None

        lp, rows, split = self._representative_program(z0, relative, epsilon, sub)
        solution = self._solve(lp, "对偶证书")
        if solution.status != OPTIMAL:
            raise ValidationError(f"线性规划异常终止: {solution.status}")

        cochain = Cochain(z0.complex, z0.dim, {s: solution.y[i] for i, s in enumerate(rows)})
        dual_value = sum((yi * bi for yi, bi in zip(solution.y, lp.rhs)), Fraction(0))
        certificate = LpCertificate(
            primal_value=solution.value,
            optimal_chain=self._chain_from(z0, rows, split, solution.x),
            dual_cochain=cochain,
            dual_value=dual_value,
            dual_sup_norm=linf(cochain),
            pivots=solution.pivots,
        )
        self._verify_certificate(certificate, z0, relative, problem.objective)
        self.logger.info(f"✅ 对偶证书: 原始值 = 对偶值 = {format_rational(dual_value)}")
        return certificate

    def _verify_certificate(self, certificate: LpCertificate, z0: Chain,
                            relative: RelativePair, objective: str):
        failures = []
        if certificate.primal_value != certificate.dual_value:
            failures.append(f"强对偶不成立: {certificate.primal_value} != {certificate.dual_value}")
        if pair(certificate.dual_cochain, z0) != certificate.primal_value:
            failures.append("⟨c, z₀⟩ 不等于最优值")
        if not coboundary(certificate.dual_cochain).is_zero():
            failures.append("δc ≠ 0")
        if relative.sub is not None and any(s in relative.sub for s in certificate.dual_cochain.values):
            failures.append("c 在 L 上不为零")
        if objective == OBJECTIVE_L1 and certificate.dual_sup_norm > 1:
            failures.append(f"‖c‖∞ = {certificate.dual_sup_norm} > 1")
        if failures:
            for message in failures:
                self.logger.error(f"❌ 证书核对失败: {message}")
            raise ValidationError("; ".join(failures))

    def filling_min(self, z: Chain, support: Optional[SubcomplexMask] = None) -> Tuple[Fraction, Chain]:
        """
        最小填充：min ‖c‖₁ 使 ∂c = z

        support 给出时只允许使用其中的 n+1 维单形。

        Raises:
            NotABoundaryError: z 不是（support 内的）边缘
        """
        complex_ = z.complex
        n = z.dim
        uppers = [s for s in complex_.simplices(n + 1) if support is None or s in support]
        touched = set(z.terms)
        for upper in uppers:
            touched.update(complex_.faces(upper))
        rows = sorted(touched)
        row_index = {s: i for i, s in enumerate(rows)}

        columns = _Columns()
        coefficients: List[Dict[int, Fraction]] = [dict() for _ in rows]
        split: Dict[SimplexRef, Tuple[int, int]] = {}
        for upper in uppers:
            label = complex_.label(upper)
            plus = columns.add(f"c+[{label}]", 1)
            minus = columns.add(f"c-[{label}]", 1)
            split[upper] = (plus, minus)
            for j, face_ref in enumerate(complex_.faces(upper)):
                row = coefficients[row_index[face_ref]]
                sign = (-1) ** j
                row[plus] = row.get(plus, Fraction(0)) + sign
                row[minus] = row.get(minus, Fraction(0)) - sign

        lp = LinearProgram(num_vars=len(columns.names), costs=columns.costs, var_names=columns.names)
        for simplex, row in zip(rows, coefficients):
            lp.add_row(row, z.coefficient(simplex), f"σ[{complex_.label(simplex)}]")

        solution = self._solve(lp, "最小填充")
        if solution.status == INFEASIBLE:
            raise NotABoundaryError(f"{z!r} 不是边缘")
        if solution.status != OPTIMAL:
            raise ValidationError(f"线性规划异常终止: {solution.status}")

        terms = [(solution.x[p] - solution.x[m], upper)
                 for upper, (p, m) in split.items() if solution.x[p] != solution.x[m]]
        filling = Chain.from_terms(complex_, n + 1, terms)
        self.logger.info(f"✅ 最小填充范数 {format_rational(solution.value)}")
        return solution.value, filling

    def eps_min(self, z0: Chain, epsilon: Fraction, sub: SubcomplexMask,
                relative: Optional[RelativePair] = None) -> NormResult:
        """
        ε-范数最小化：min ‖z‖₁ + ε‖∂z|_A‖₁

        可行集与 min_l1 相同；结果同时给出最优链的 A-边缘质量。
        """
        sub.validate(z0.complex)
        result = self.solve_representative(z0, relative, Fraction(epsilon), sub)
        expected = eps_norm(result.chain, result.epsilon, sub)
        if expected != result.value:
            raise ValidationError(f"ε-范数复核失败: {expected} != {result.value}")
        return result

    def epsilon_tradeoff(self, z0: Chain, schedule: Sequence[Fraction], sub: SubcomplexMask,
                         relative: Optional[RelativePair] = None, workers: int = 1) -> List[NormResult]:
        """按 ε 序列逐个求解；workers > 1 时并行，结果顺序与 schedule 一致"""
        schedule = [Fraction(e) for e in schedule]
        if workers > 1 and len(schedule) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(lambda e: self.eps_min(z0, e, sub, relative), schedule))
        else:
            results = [self.eps_min(z0, e, sub, relative) for e in schedule]
        for result in results:
            self.logger.debug(
                f"ε = {format_rational(result.epsilon)}: 值 {format_rational(result.value)}, "
                f"A-边缘质量 {format_rational(result.boundary_mass)}"
            )
        return results


def min_l1(z0: Chain, relative: Optional[RelativePair] = None, trace: bool = False) -> Tuple[Fraction, Chain]:
    return NormMinimizer(trace).min_l1(z0, relative)


def dual_certificate(problem: LpProblem, trace: bool = False) -> LpCertificate:
    return NormMinimizer(trace).dual_certificate(problem)


def filling_min(z: Chain, support: Optional[SubcomplexMask] = None, trace: bool = False) -> Tuple[Fraction, Chain]:
    return NormMinimizer(trace).filling_min(z, support)


def eps_min(z0: Chain, epsilon: Fraction, sub: SubcomplexMask,
            relative: Optional[RelativePair] = None, trace: bool = False) -> NormResult:
    return NormMinimizer(trace).eps_min(z0, epsilon, sub, relative)


def epsilon_tradeoff(z0: Chain, schedule: Sequence[Fraction], sub: SubcomplexMask,
                     relative: Optional[RelativePair] = None, workers: int = 1) -> List[NormResult]:
    return NormMinimizer().epsilon_tradeoff(z0, schedule, sub, relative, workers)
