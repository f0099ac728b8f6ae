"""
粘合空间、和乐与覆叠最短路径测试
"""

import itertools

import pytest

from src.core.cover import CoverCaps, CoverVertex, GluedSpace, minimizing_paths
from src.core.mcx import EdgeLabeling, SimplexRef, SubcomplexMask
from src.utils.constants import TAG_A, TAG_K, TAG_L
from src.utils.exceptions import CapExceededError, HypothesisViolation
from tests.conftest import load_corpus


class TestCircleAmalgam:
    """测试沿圆周融合的空间：GA = <c>，c 映到 x 与 y"""

    def setup_method(self):
        self.workspace = load_corpus('circle_amalgam.mcx')
        self.space = self.workspace.build_space('R', CoverCaps())
        self.complex = self.space.complex
        self.datum = self.space.datum

    def _vertex(self, g, name):
        return CoverVertex(self.datum.parse_element(g), self.complex.vertex_id(name))

    def test_base_point_and_section(self):
        assert self.complex.vertex_names[self.space.base] == 'a0'
        assert self.space.section_edge(self.complex.vertex_id('a2')) == self.complex.by_id('a02')

    def test_holonomy(self):
        assert self.datum.format_element(self.space.holonomy(self.complex.by_id('a12'))) == 'K:x'
        assert self.datum.format_element(self.space.holonomy(self.complex.by_id('a01'))) == '1'
        reversed_edge = self.complex.by_id('a12').reversed_edge()
        assert self.datum.format_element(self.space.holonomy(reversed_edge)) == 'K:X'

    def test_vertex_tags(self):
        assert self.space.vertex_tag(self.complex.vertex_id('a1')) == TAG_A
        assert self.space.vertex_tag(self.complex.vertex_id('k')) == TAG_K
        assert self.space.vertex_tag(self.complex.vertex_id('l')) == TAG_L

    def test_paths_between_sides(self):
        u, w = self._vertex('1', 'k'), self._vertex('1', 'l')
        paths = minimizing_paths(u, w, self.space)
        assert len(paths) == 3
        assert all(len(path) == 2 for path in paths)
        middles = [self.space.format_vertex(path.vertices[1]) for path in paths]
        assert middles == ['1·a0', '1·a1', 'K:x·a2']
        assert self.space.bfs_distance(u, w) == 2

    def test_paths_are_deterministic(self):
        u, w = self._vertex('1', 'k'), self._vertex('1', 'l')
        first = [self.space.path_key(p) for p in self.space.minimizing_paths(u, w)]
        second = [self.space.path_key(p) for p in self.space.minimizing_paths(u, w)]
        assert first == second

    def test_trivial_path(self):
        u = self._vertex('1', 'k')
        paths = self.space.minimizing_paths(u, u)
        assert len(paths) == 1
        assert len(paths[0]) == 0

    def test_describe(self):
        summary = self.space.describe()
        assert summary['mode'] == 'amalgam'
        assert summary['base'] == 'a0'
        assert summary['holonomy']['a12'] == 'K:x'
        assert summary['loops'] == []

    def test_radius_cap(self):
        space = self.workspace.build_space('R', CoverCaps(max_cover_radius=0))
        u, w = self._vertex('1', 'k'), self._vertex('K:x L:y', 'l')
        with pytest.raises(CapExceededError):
            space.minimizing_paths(u, w)

    def test_path_count_cap(self):
        space = self.workspace.build_space('R', CoverCaps(max_paths=2))
        with pytest.raises(CapExceededError):
            space.minimizing_paths(self._vertex('1', 'k'), self._vertex('1', 'l'))


class TestWedge:
    """测试平凡群上的楔：最短路径都经过公共顶点"""

    def setup_method(self):
        self.workspace = load_corpus('wedge.mcx')
        self.space = self.workspace.build_space('W', CoverCaps())
        self.complex = self.space.complex
        identity = self.space.datum.identity()
        self.v0 = CoverVertex(identity, self.complex.vertex_id('v0'))
        self.v2 = CoverVertex(identity, self.complex.vertex_id('v2'))

    def test_path_passes_through_wedge_point(self):
        paths = self.space.minimizing_paths(self.v0, self.v2)
        assert len(paths) == 1
        assert [self.complex.vertex_names[x.v] for x in paths[0].vertices] == ['v0', 'p', 'v2']
        assert paths[0].pattern == (TAG_K, TAG_L)

    def test_mixed_edges_are_not_in_the_cover(self):
        assert self.space.bfs_distance(self.v0, self.v2) == 2

    def test_a_must_be_intersection(self):
        w = self.workspace
        complex_ = w.complex('wedge')
        with pytest.raises(HypothesisViolation):
            GluedSpace.amalgam(
                complex_, w.datum('triv'), w.labeling('lw').labeling,
                w.mask('wedge', 'K'), w.mask('wedge', 'L'), w.mask('wedge', 'K'),
            )

    def test_k_must_be_edge_complete(self):
        w = self.workspace
        complex_ = w.complex('wedge')
        spokes = SubcomplexMask.closure(complex_, [complex_.by_id('e0p'), complex_.by_id('e1p')], 'K')
        with pytest.raises(HypothesisViolation, match='edge_complete'):
            GluedSpace.amalgam(
                complex_, w.datum('triv'), w.labeling('lw').labeling,
                spokes, w.mask('wedge', 'L'), w.mask('wedge', 'A'),
            )

    def test_k_must_be_aspherical(self):
        pillow = load_corpus('sphere.mcx').complex('twoparallel')
        datum = self.workspace.datum('triv')
        whole = SubcomplexMask.full(pillow, 'K')
        with pytest.raises(HypothesisViolation, match='aspherical'):
            GluedSpace.amalgam(pillow, datum, EdgeLabeling(pillow, datum), whole, whole, whole)

    def test_search_fallback_is_flagged(self, monkeypatch):
        assert not any(path.fallback for path in self.space.minimizing_paths(self.v0, self.v2))
        monkeypatch.setattr(self.space, '_realize', lambda u, w, blocks: [])
        paths = self.space.minimizing_paths(self.v0, self.v2)
        assert paths
        assert all(path.fallback for path in paths)
        assert {len(path) for path in paths} == {self.space.bfs_distance(self.v0, self.v2)}


class TestHnnSpace:
    """测试四面体自粘合得到的 HNN 空间"""

    def setup_method(self):
        self.space = load_corpus('hnn_toy.mcx').build_space('H', CoverCaps())
        self.datum = self.space.datum

    def test_quotient_complex(self):
        target = self.space.complex
        assert target.f_vector() == [3, 5, 2]
        assert target.vertex_names == ['x', 'z', 'w']
        assert target.simplices_on((0, 1, 2)) == [SimplexRef((0, 1, 2), 0), SimplexRef((0, 1, 2), 1)]

    def test_loop_holonomy(self):
        assert [(w, self.datum.format_element(h)) for w, h in self.space.loops] == [(0, 'T')]
        assert self.space.describe()['loops'] == [{'vertex': 'x', 'holonomy': 'T'}]

    def test_copy_edges_carry_stable_letter(self):
        target = self.space.complex
        assert self.datum.format_element(self.space.holonomy(target.by_id('yz'))) == 't'
        assert self.datum.format_element(self.space.holonomy(target.by_id('yw'))) == 't'
        assert self.space.holonomy(target.by_id('xz')).is_identity

    def test_preimages(self):
        target = self.space.complex
        original = self.space.original
        preimages = self.space.preimages(SimplexRef((0, 1, 2), 1))
        assert preimages == [(original.by_id('yzw'), 1)]


class TestRingCover:
    """穷举比较模式最短路径与球内搜索，并检查平移后中心单形的唯一性"""

    RADIUS = 4

    def setup_method(self):
        self.space = load_corpus('ring2.mcx').build_space('R2', CoverCaps(max_cover_radius=self.RADIUS))
        self.complex = self.space.complex
        self.datum = self.space.datum

    def _ball(self, centre, radius):
        """覆叠中与 centre 的图距离不超过 radius 的顶点"""
        seen = {centre}
        frontier = [centre]
        for _ in range(radius):
            step = []
            for x in frontier:
                for edge in self.space.neighbours(x):
                    y = edge.end
                    if y not in seen and self.space.in_ball(y.g):
                        seen.add(y)
                        step.append(y)
            frontier = step
        return sorted(seen, key=self.space.vertex_key)

    def _power(self, n):
        if n == 0:
            return self.datum.identity()
        return self.datum.parse_element('K:' + ('x' * n if n > 0 else 'X' * -n))

    def test_pattern_paths_match_search(self):
        identity = self.datum.identity()
        sources = [CoverVertex(identity, v) for v in range(self.complex.vertex_count)]
        targets = self._ball(CoverVertex(identity, self.space.base), self.RADIUS)
        assert len(targets) > len(sources)
        for u in sources:
            for w in targets:
                distance = self.space.bfs_distance(u, w)
                paths = self.space.minimizing_paths(u, w)
                assert {len(path) for path in paths} == {distance}
                assert all(path.vertices[-1] == w for path in paths)

    def test_central_simplex_on_translates(self):
        for n in range(-self.RADIUS, self.RADIUS + 1):
            g = self._power(n)
            for triangle in self.complex.simplices(2):
                lift = self.space.lift_simplex(triangle, CoverVertex(g, triangle.vertices[0]))
                paths = {
                    (i, j): self.space.minimizing_paths(lift[i], lift[j])[0]
                    for i, j in itertools.combinations(range(3), 2)
                }
                result = self.space.central_simplex(lift, paths)
                in_union = triangle in self.space.k_mask or triangle in self.space.l_mask
                assert result.found == in_union
                if in_union:
                    assert result.simplex == triangle
                    assert result.lift == lift
