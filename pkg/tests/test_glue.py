"""
粘合、自粘合、加倍与切开测试
"""

import pytest

from src.core.algebra import RelativePair, boundary, l1
from src.core.glue import (
    GlueMap, amalgamated_glue, are_isomorphic, cut, double, euler_characteristic_with_loops, glue_cycles,
    self_glue,
)
from src.core.normlp import min_l1
from src.utils.exceptions import InvalidGlueMap, NotTwoSidedError, OverlappingSubcomplexes


class TestAmalgamatedGlue:
    """测试沿子复形粘合两个复形"""

    def test_bouquet_of_triangles(self, gluing_workspace):
        result = gluing_workspace.glue('bouquet')
        assert result.complex.f_vector() == [5, 6, 2]
        assert result.complex.euler_characteristic() == 1
        assert len(result.masks['A']) == 1

    def test_masks_cover_both_sides(self, gluing_workspace):
        result = gluing_workspace.glue('bouquet')
        k, l = result.masks['K'], result.masks['L']
        assert len(k) == 7
        assert len(l) == 7
        assert k.intersection(l).members == result.masks['A'].members

    def test_two_segments_make_a_circle(self, gluing_workspace):
        result = gluing_workspace.glue('loop2')
        assert result.complex.f_vector() == [2, 2]
        assert result.complex.euler_characteristic() == 0

    def test_glue_map_must_match_masks(self, gluing_workspace):
        tri1 = gluing_workspace.complex('tri1')
        tri2 = gluing_workspace.complex('tri2')
        pc = gluing_workspace.mask('tri1', 'pc')
        pd = gluing_workspace.mask('tri2', 'pd')
        rim = gluing_workspace.mask('tri1', 'rim')
        f = GlueMap(tri1, pc, tri2, pd, {tri1.vertex_id('c'): tri2.vertex_id('d')})
        with pytest.raises(InvalidGlueMap):
            amalgamated_glue(tri1, rim, tri2, pd, f)


class TestSelfGlue:
    """测试自粘合"""

    def test_cylinder_to_torus(self, gluing_workspace):
        result = gluing_workspace.glue('torus3')
        assert result.complex.f_vector() == [3, 9, 6]
        assert result.complex.euler_characteristic() == 0
        assert result.loops == []

    def test_band_pushes_forward(self, gluing_workspace):
        result = gluing_workspace.glue('torus3')
        band = result.push(gluing_workspace.chain('band'), 'projection')
        assert l1(band) == 3

    def test_interval_to_loop(self, gluing_workspace):
        result = gluing_workspace.glue('circle1')
        assert result.complex.f_vector() == [1]
        assert len(result.loops) == 1
        assert len(result.collapsed) == 1
        assert euler_characteristic_with_loops(result) == 0
        assert result.push(gluing_workspace.chain('arc'), 'projection').is_zero()

    def test_overlapping_subcomplexes(self, gluing_workspace):
        cyl = gluing_workspace.complex('cyl')
        ca = gluing_workspace.mask('cyl', 'ca')
        cb = gluing_workspace.mask('cyl', 'cb')
        rims = gluing_workspace.mask('cyl', 'rims')
        v = cyl.vertex_id
        f = GlueMap(cyl, ca, cyl, cb, {v('a0'): v('b1'), v('a1'): v('b2'), v('a2'): v('b0')})
        with pytest.raises(OverlappingSubcomplexes):
            self_glue(cyl, ca, rims, f)


class TestDouble:
    """测试沿边界加倍"""

    def test_double_disk(self, gluing_workspace):
        tri1 = gluing_workspace.complex('tri1')
        doubled = double(tri1, gluing_workspace.mask('tri1', 'rim'))
        assert doubled.complex.f_vector() == [3, 3, 2]
        dz = doubled.apply(gluing_workspace.chain('disk'))
        assert boundary(dz).is_zero()
        assert l1(dz) == 2
        value, _ = min_l1(dz)
        assert value == 2

    def test_relative_norm_of_disk(self, gluing_workspace):
        tri1 = gluing_workspace.complex('tri1')
        relative = RelativePair(tri1, gluing_workspace.mask('tri1', 'rim'))
        value, _ = min_l1(gluing_workspace.chain('disk'), relative)
        assert value == 1

    def test_double_segment(self, gluing_workspace):
        doubled = double(gluing_workspace.complex('seg1'), gluing_workspace.mask('seg1', 'ends'))
        assert doubled.complex.f_vector() == [2, 2]
        assert boundary(doubled.apply(gluing_workspace.chain('segment'))).is_zero()

    def test_double_cylinder_is_torus(self, gluing_workspace):
        doubled = double(gluing_workspace.complex('cyl'), gluing_workspace.mask('cyl', 'rims'))
        assert doubled.complex.f_vector() == [6, 18, 12]
        assert doubled.complex.euler_characteristic() == 0


class TestCut:
    """测试沿余维一子复形切开"""

    def test_cut_circle_at_vertex(self, gluing_workspace):
        circle = gluing_workspace.complex('circle')
        result = cut(circle, gluing_workspace.mask('circle', 'F'))
        assert result.complex.f_vector() == [4, 3]
        assert result.complex.euler_characteristic() == 1
        assert are_isomorphic(result.complex, gluing_workspace.complex('path4'))
        assert len(result.plus) == 1
        assert len(result.minus) == 1

    def test_projection_covers_original(self, gluing_workspace):
        circle = gluing_workspace.complex('circle')
        result = cut(circle, gluing_workspace.mask('circle', 'F'))
        images = {ref for ref, _ in result.projection.values()}
        assert images == set(circle.all_simplices())

    def test_one_sided_cut_is_rejected(self, gluing_workspace):
        seg = gluing_workspace.complex('seg1')
        ends = gluing_workspace.mask('seg1', 'ends')
        with pytest.raises(NotTwoSidedError):
            cut(seg, ends)


class TestIsomorphism:
    """测试小复形同构判定"""

    def test_not_isomorphic(self, gluing_workspace):
        assert not are_isomorphic(gluing_workspace.complex('circle'), gluing_workspace.complex('path4'))
        assert are_isomorphic(gluing_workspace.complex('tri1'), gluing_workspace.complex('tri2'))


class TestGlueCycles:
    """测试闭链粘合与 A 上的边缘修正"""

    def test_segments_glue_to_cycle(self, gluing_workspace):
        result = gluing_workspace.glue('loop2')
        z, c = glue_cycles(gluing_workspace.chain('z1'), gluing_workspace.chain('z2'), result)
        assert boundary(z).is_zero()
        assert l1(z) == 2
        assert c.is_zero()
