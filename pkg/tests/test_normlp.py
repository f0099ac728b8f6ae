"""
精确单纯形法与范数线性规划测试
"""

from fractions import Fraction

import pytest

from src.core.algebra import Chain, RelativePair, boundary, coboundary, l1
from src.core.normlp import (
    LpProblem, NormMinimizer, OBJECTIVE_L1, dual_certificate, epsilon_tradeoff, filling_min, min_l1,
)
from src.core.simplex import (
    INFEASIBLE, OPTIMAL, UNBOUNDED, LinearProgram, constraint_residual, dual_feasible, dual_value, solve,
)
from src.utils.exceptions import NotABoundaryError, NotACycleError
from tests.conftest import load_corpus


class TestExactSimplex:
    """测试两阶段单纯形法"""

    def test_small_program(self):
        # min x0 + x1, x0 + 2·x1 = 4
        lp = LinearProgram(num_vars=2, costs=[Fraction(1), Fraction(1)])
        lp.add_row({0: Fraction(1), 1: Fraction(2)}, Fraction(4), 'r0')
        solution = solve(lp)
        assert solution.status == OPTIMAL
        assert solution.value == 2
        assert solution.x == [0, 2]
        assert constraint_residual(lp, solution.x) == []
        assert dual_feasible(lp, solution.y)
        assert dual_value(lp, solution.y) == solution.value

    def test_negative_right_hand_side(self):
        lp = LinearProgram(num_vars=2, costs=[Fraction(1), Fraction(3)])
        lp.add_row({0: Fraction(-1), 1: Fraction(1)}, Fraction(-2))
        solution = solve(lp)
        assert solution.value == 2
        assert dual_value(lp, solution.y) == 2

    def test_infeasible(self):
        lp = LinearProgram(num_vars=2, costs=[Fraction(1), Fraction(1)])
        lp.add_row({0: Fraction(1), 1: Fraction(1)}, Fraction(-1))
        assert solve(lp).status == INFEASIBLE

    def test_unbounded(self):
        lp = LinearProgram(num_vars=2, costs=[Fraction(-1), Fraction(0)])
        lp.add_row({0: Fraction(1), 1: Fraction(-1)}, Fraction(0))
        assert solve(lp).status == UNBOUNDED

    def test_pivots_are_recorded(self):
        lp = LinearProgram(num_vars=1, costs=[Fraction(1)], var_names=['only'])
        lp.add_row({0: Fraction(1)}, Fraction(3))
        solution = solve(lp, trace=True)
        assert solution.pivots[0].entering == 'only'


class TestMinL1:
    """测试最小 l¹ 代表元"""

    def setup_method(self):
        self.sphere = load_corpus('sphere.mcx')
        self.minimizer = NormMinimizer()

    def test_sphere_fundamental_class(self):
        value, chain = min_l1(self.sphere.chain('fund'))
        assert value == 4
        assert boundary(chain).is_zero()

    def test_multiple_of_fundamental_class(self):
        value, _ = self.minimizer.min_l1(self.sphere.chain('twice'))
        assert value == 8

    def test_torus_fundamental_class(self):
        fund = load_corpus('torus7.mcx').chain('fund')
        value, chain = self.minimizer.min_l1(fund)
        assert value == 14
        assert l1(chain) == 14

    def test_rejects_non_cycles(self):
        complex_ = self.sphere.complex('dS3')
        edge = Chain.simplex(complex_, complex_.by_id('ab'))
        with pytest.raises(NotACycleError):
            self.minimizer.min_l1(edge)

    def test_relative_cycle_off_the_sub(self):
        gluing = load_corpus('gluing.mcx')
        relative = RelativePair(gluing.complex('tri1'), gluing.mask('tri1', 'rim'))
        value, chain = self.minimizer.min_l1(gluing.chain('disk'), relative)
        assert value == 1
        assert chain == gluing.chain('disk')


class TestDualCertificate:
    """测试对偶证书"""

    def setup_method(self):
        self.sphere = load_corpus('sphere.mcx')

    def test_certificate_on_sphere(self):
        fund = self.sphere.chain('fund')
        problem = LpProblem(fund, RelativePair(fund.complex), objective=OBJECTIVE_L1)
        certificate = dual_certificate(problem)
        assert certificate.primal_value == 4
        assert certificate.dual_value == 4
        assert certificate.dual_sup_norm == 1
        assert coboundary(certificate.dual_cochain).is_zero()
        assert len(certificate.rows()) == 4


class TestFillingMin:
    """测试最小填充"""

    def setup_method(self):
        self.sphere = load_corpus('sphere.mcx')
        self.complex = self.sphere.complex('dS3')

    def test_triangle_boundary(self):
        z = boundary(Chain.simplex(self.complex, self.complex.by_id('abc')))
        value, filling = filling_min(z)
        assert value == 1
        assert boundary(filling) == z

    def test_support_forces_longer_filling(self):
        from src.core.mcx import SubcomplexMask
        support = SubcomplexMask.closure(
            self.complex, [self.complex.by_id(i) for i in ('abd', 'acd', 'bcd')], 'rest'
        )
        z = boundary(Chain.simplex(self.complex, self.complex.by_id('abc')))
        value, _ = NormMinimizer().filling_min(z, support)
        assert value == 3

    def test_non_boundary(self):
        edge = Chain.simplex(self.complex, self.complex.by_id('ab'))
        with pytest.raises(NotABoundaryError):
            filling_min(edge)


class TestEpsilonNorm:
    """测试 ε-范数最小化"""

    def setup_method(self):
        gluing = load_corpus('gluing.mcx')
        self.disk = gluing.chain('disk')
        self.rim = gluing.mask('tri1', 'rim')
        self.relative = RelativePair(gluing.complex('tri1'), self.rim)
        self.minimizer = NormMinimizer()

    def test_zero_epsilon_is_plain_norm(self):
        result = self.minimizer.eps_min(self.disk, Fraction(0), self.rim, self.relative)
        assert result.value == 1
        assert result.boundary_mass == 3

    def test_positive_epsilon_charges_boundary(self):
        result = self.minimizer.eps_min(self.disk, Fraction(1, 2), self.rim, self.relative)
        assert result.value == Fraction(5, 2)

    @pytest.mark.parametrize("workers", [1, 3])
    def test_tradeoff_keeps_schedule_order(self, workers):
        schedule = [Fraction(1), Fraction(0), Fraction(1, 3)]
        results = epsilon_tradeoff(self.disk, schedule, self.rim, self.relative, workers=workers)
        assert [r.epsilon for r in results] == schedule
        assert [r.value for r in results] == [4, 1, 2]
