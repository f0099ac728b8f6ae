"""
精确单纯形法
有理数两阶段单纯形表，Bland 规则防止循环，输出最优解与对偶解
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ..utils.logger import get_logger

OPTIMAL = 'optimal'
INFEASIBLE = 'infeasible'
UNBOUNDED = 'unbounded'


@dataclass
class LinearProgram:
    """
    标准形线性规划：min c·x  s.t.  A x = b,  x ≥ 0

    A 按行稀疏存储（列号 → 系数）。
    """
    num_vars: int
    costs: List[Fraction]
    rows: List[Dict[int, Fraction]] = field(default_factory=list)
    rhs: List[Fraction] = field(default_factory=list)
    var_names: List[str] = field(default_factory=list)
    row_names: List[str] = field(default_factory=list)

    def add_row(self, coefficients: Dict[int, Fraction], value: Fraction, name: str = '') -> int:
        self.rows.append({j: Fraction(v) for j, v in coefficients.items() if v != 0})
        self.rhs.append(Fraction(value))
        self.row_names.append(name or f"r{len(self.rows) - 1}")
        return len(self.rows) - 1


@dataclass
class PivotRecord:
    phase: int
    entering: str
    leaving: str


@dataclass
class LpSolution:
    """求解结果：状态、最优值、原始解与对偶解（每行一个）"""
    status: str
    value: Optional[Fraction] = None
    x: List[Fraction] = field(default_factory=list)
    y: List[Fraction] = field(default_factory=list)
    pivots: List[PivotRecord] = field(default_factory=list)


class SimplexTableau:
    """
    两阶段单纯形表

    列为原变量加每行一个人工变量；人工列恰好保存 B⁻¹，
    第二阶段禁止人工变量入基。
    """

    def __init__(self, lp: LinearProgram, trace: bool = False):
        self.logger = get_logger(__name__)
        self.lp = lp
        self.trace = trace
        self.m = len(lp.rows)
        self.n = lp.num_vars
        self.width = self.n + self.m
        self.row_signs: List[int] = []
        self.A: List[List[Fraction]] = []
        self.b: List[Fraction] = []
        zero = Fraction(0)
        for i, (row, value) in enumerate(zip(lp.rows, lp.rhs)):
            sign = -1 if value < 0 else 1
            self.row_signs.append(sign)
            dense = [zero] * self.width
            for j, coefficient in row.items():
                dense[j] = sign * coefficient
            dense[self.n + i] = Fraction(1)
            self.A.append(dense)
            self.b.append(sign * value)
        self.basis: List[int] = [self.n + i for i in range(self.m)]
        self.live_rows: List[bool] = [True] * self.m
        self.pivots: List[PivotRecord] = []
        self.phase = 1

    def _name(self, j: int) -> str:
        if j < self.n:
            return self.lp.var_names[j] if j < len(self.lp.var_names) else f"x{j}"
        return f"a{j - self.n}"

    def pivot(self, i: int, j: int):
        record = PivotRecord(self.phase, self._name(j), self._name(self.basis[i]))
        self.pivots.append(record)
        if self.trace:
            self.logger.debug(f"🔁 阶段{record.phase} 换基 {record.leaving} -> {record.entering} ({i},{j})")
        row = self.A[i]
        piv = row[j]
        if piv != 1:
            self.A[i] = row = [v / piv for v in row]
            self.b[i] /= piv
        nonzero = [l for l, v in enumerate(row) if v != 0]
        for k in range(self.m):
            if k == i or not self.live_rows[k]:
                continue
            f = self.A[k][j]
            if f == 0:
                continue
            target = self.A[k]
            for l in nonzero:
                target[l] -= f * row[l]
            self.b[k] -= f * self.b[i]
        self.basis[i] = j

    def reduced_costs(self, costs: Sequence[Fraction]) -> List[Fraction]:
        reduced = list(costs)
        for i in range(self.m):
            if not self.live_rows[i]:
                continue
            cb = costs[self.basis[i]]
            if cb == 0:
                continue
            for j, v in enumerate(self.A[i]):
                if v != 0:
                    reduced[j] -= cb * v
        return reduced

    def bland_primal_step(self, costs: Sequence[Fraction], allowed: int) -> str:
        """入基取最小下标的负检验数列，出基按最小比值、并列取基变量下标最小者"""
        reduced = self.reduced_costs(costs)
        basic = set(self.basis[i] for i in range(self.m) if self.live_rows[i])
        entering = next((j for j in range(allowed) if j not in basic and reduced[j] < 0), None)
        if entering is None:
            return OPTIMAL
        candidates = [
            (self.b[i] / self.A[i][entering], self.basis[i], i)
            for i in range(self.m)
            if self.live_rows[i] and self.A[i][entering] > 0
        ]
        if not candidates:
            return UNBOUNDED
        _, _, leaving_row = min(candidates)
        self.pivot(leaving_row, entering)
        return 'go_on'

    def run(self, costs: Sequence[Fraction], allowed: int) -> str:
        while True:
            status = self.bland_primal_step(costs, allowed)
            if status != 'go_on':
                return status

    def pivot_out_artificials(self):
        """第一阶段后仍在基中（取值为 0）的人工变量换出；换不出的行是冗余行"""
        for i in range(self.m):
            if not self.live_rows[i] or self.basis[i] < self.n:
                continue
            column = next((j for j in range(self.n) if self.A[i][j] != 0), None)
            if column is None:
                self.live_rows[i] = False
                self.logger.debug(f"第 {i} 行冗余，已删除")
            else:
                self.pivot(i, column)

    def objective(self, costs: Sequence[Fraction]) -> Fraction:
        return sum((costs[self.basis[i]] * self.b[i] for i in range(self.m) if self.live_rows[i]),
                   Fraction(0))

    def primal(self) -> List[Fraction]:
        x = [Fraction(0)] * self.n
        for i in range(self.m):
            if self.live_rows[i] and self.basis[i] < self.n:
                x[self.basis[i]] = self.b[i]
        return x

    def dual(self, costs: Sequence[Fraction]) -> List[Fraction]:
        """y_i = s_i · Σ_k c_{B_k} (B⁻¹)_{k,i}，s_i 为建表时的行符号"""
        y = []
        for i in range(self.m):
            value = Fraction(0)
            for k in range(self.m):
                if self.live_rows[k]:
                    value += costs[self.basis[k]] * self.A[k][self.n + i]
            y.append(self.row_signs[i] * value)
        return y


def solve(lp: LinearProgram, trace: bool = False) -> LpSolution:
    """
    两阶段精确单纯形法

    Returns:
        LpSolution；不可行或无界时只给出状态
    """
    logger = get_logger(__name__)
    tableau = SimplexTableau(lp, trace)
    zero, one = Fraction(0), Fraction(1)

    phase_one_costs = [zero] * tableau.n + [one] * tableau.m
    tableau.run(phase_one_costs, tableau.width)
    infeasibility = tableau.objective(phase_one_costs)
    if infeasibility != 0:
        logger.debug(f"第一阶段目标值 {infeasibility} > 0，问题不可行")
        return LpSolution(INFEASIBLE, pivots=tableau.pivots)
    tableau.pivot_out_artificials()

    tableau.phase = 2
    costs = [Fraction(c) for c in lp.costs] + [zero] * tableau.m
    status = tableau.run(costs, tableau.n)
    if status == UNBOUNDED:
        return LpSolution(UNBOUNDED, pivots=tableau.pivots)

    solution = LpSolution(
        status=OPTIMAL,
        value=tableau.objective(costs),
        x=tableau.primal(),
        y=tableau.dual(costs),
        pivots=tableau.pivots,
    )
    logger.debug(f"单纯形法完成: 最优值 {solution.value}, 换基 {len(tableau.pivots)} 次")
    return solution


def dual_value(lp: LinearProgram, y: Sequence[Fraction]) -> Fraction:
    return sum((yi * bi for yi, bi in zip(y, lp.rhs)), Fraction(0))


def dual_feasible(lp: LinearProgram, y: Sequence[Fraction]) -> bool:
    """检查 yᵀA ≤ c 逐列成立"""
    columns: List[Fraction] = [Fraction(0)] * lp.num_vars
    for yi, row in zip(y, lp.rows):
        if yi == 0:
            continue
        for j, coefficient in row.items():
            columns[j] += yi * coefficient
    return all(columns[j] <= lp.costs[j] for j in range(lp.num_vars))


def constraint_residual(lp: LinearProgram, x: Sequence[Fraction]) -> List[Tuple[int, Fraction]]:
    """返回不满足 A x = b 的行及其残差"""
    residuals = []
    for i, (row, value) in enumerate(zip(lp.rows, lp.rhs)):
        lhs = sum((coefficient * x[j] for j, coefficient in row.items()), Fraction(0))
        if lhs != value:
            residuals.append((i, lhs - value))
    return residuals
