#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
多重复形测试
"""

import pytest

from src.core.mcx import (
    ComplexDeclaration, SimplexDeclaration, SimplexRef, SubcomplexMask, build_multicomplex,
    canonical_orientation, check_aspherical, check_edge_complete, check_unique_edges,
)
from src.utils.exceptions import (
    AmbiguousFaceError, DanglingFaceError, DuplicateDeclarationError, NotFaceClosedError,
)
from tests.conftest import load_corpus


def _triangle_declaration(name='tri'):
    return ComplexDeclaration(name, ['a', 'b', 'c'], [
        SimplexDeclaration('ab', ('a', 'b')),
        SimplexDeclaration('bc', ('b', 'c')),
        SimplexDeclaration('ac', ('a', 'c')),
        SimplexDeclaration('abc', ('a', 'b', 'c')),
    ])


class TestBuildMulticomplex:
    """测试复形构建"""

    def setup_method(self):
        self.triangle = build_multicomplex(_triangle_declaration())

    def test_f_vector_and_euler(self):
        assert self.triangle.f_vector() == [3, 3, 1]
        assert self.triangle.euler_characteristic() == 1

    def test_ids_resolve_to_canonical_simplices(self):
        abc = self.triangle.by_id('abc')
        assert abc == SimplexRef((0, 1, 2), 0)
        assert self.triangle.label(abc) == 'abc'
        assert self.triangle.by_id('a') == SimplexRef((0,), 0)

    def test_faces_follow_vertex_order(self):
        abc = self.triangle.by_id('abc')
        faces = self.triangle.faces(abc)
        assert faces == (self.triangle.by_id('bc'), self.triangle.by_id('ac'), self.triangle.by_id('ab'))

    def test_declared_order_is_sorted(self):
        declaration = _triangle_declaration()
        declaration.simplices[3] = SimplexDeclaration('abc', ('c', 'a', 'b'))
        complex_ = build_multicomplex(declaration)
        assert complex_.by_id('abc').vertices == (0, 1, 2)

    def test_missing_face_is_rejected(self):
        declaration = _triangle_declaration()
        del declaration.simplices[0]
        with pytest.raises(DanglingFaceError):
            build_multicomplex(declaration)

    def test_duplicate_id_is_rejected(self):
        declaration = _triangle_declaration()
        declaration.simplices.append(SimplexDeclaration('ab', ('a', 'c'), copy=1))
        with pytest.raises(DuplicateDeclarationError):
            build_multicomplex(declaration)

    def test_parallel_faces_need_explicit_faces(self):
        declaration = _triangle_declaration()
        declaration.simplices.insert(3, SimplexDeclaration('ab2', ('a', 'b'), copy=1))
        with pytest.raises(AmbiguousFaceError):
            build_multicomplex(declaration)

    def test_explicit_faces_choose_parallel_copy(self):
        declaration = _triangle_declaration()
        declaration.simplices.insert(3, SimplexDeclaration('ab2', ('a', 'b'), copy=1))
        declaration.simplices[4] = SimplexDeclaration('abc', ('a', 'b', 'c'), faces=('bc', 'ac', 'ab2'))
        complex_ = build_multicomplex(declaration)
        abc = complex_.by_id('abc')
        assert complex_.face(abc, 2) == SimplexRef((0, 1), 1)
        assert complex_.f_vector() == [3, 4, 1]


class TestChecks:
    """测试非球面性、边完备性与边唯一性检查"""

    def setup_method(self):
        workspace = load_corpus('sphere.mcx')
        self.sphere = workspace.complex('dS3')
        self.pillow = workspace.complex('twoparallel')

    def test_sphere_passes_all_checks(self):
        assert check_aspherical(self.sphere).passed
        assert check_edge_complete(self.sphere).passed
        assert check_unique_edges(self.sphere).passed
        assert self.sphere.euler_characteristic() == 2

    def test_parallel_triangles_are_not_aspherical(self):
        report = check_aspherical(self.pillow)
        assert not report.passed
        assert report.status == 'FAIL'
        assert report.details == ['top ~ bottom']

    def test_torus_is_edge_complete(self):
        torus = load_corpus('torus7.mcx').complex('torus7')
        assert torus.f_vector() == [7, 21, 14]
        assert torus.euler_characteristic() == 0
        assert check_edge_complete(torus).passed

    def test_edge_completeness_inside_mask(self):
        workspace = load_corpus('wedge.mcx')
        wedge = workspace.complex('wedge')
        assert check_edge_complete(wedge, workspace.mask('wedge', 'K')).passed
        assert not check_edge_complete(wedge).passed


class TestSubcomplexMask:
    """测试子复形"""

    def setup_method(self):
        self.triangle = build_multicomplex(_triangle_declaration())

    def test_closure_adds_faces(self):
        mask = SubcomplexMask.closure(self.triangle, [self.triangle.by_id('abc')], 'disk')
        assert len(mask) == 7

    def test_from_members_requires_face_closure(self):
        with pytest.raises(NotFaceClosedError):
            SubcomplexMask.from_members(self.triangle, [self.triangle.by_id('ab')], 'open')

    def test_union_and_intersection(self):
        t = self.triangle
        left = SubcomplexMask.closure(t, [t.by_id('ab')], 'left')
        right = SubcomplexMask.closure(t, [t.by_id('bc')], 'right')
        assert left.intersection(right).vertices == frozenset({1})
        assert len(left.union(right)) == 5


class TestCanonicalOrientation:
    """测试定向符号"""

    def setup_method(self):
        self.triangle = build_multicomplex(_triangle_declaration())

    @pytest.mark.parametrize("order,sign", [
        ((0, 1, 2), 1), ((1, 0, 2), -1), ((1, 2, 0), 1), ((2, 1, 0), -1),
    ])
    def test_sign_of_permutation(self, order, sign):
        canonical, got = canonical_orientation(order, 0, self.triangle)
        assert canonical == SimplexRef((0, 1, 2), 0)
        assert got == sign
