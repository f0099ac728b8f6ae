"""
正规形测试
"""

import pytest

from src.core.normal_forms import AMALGAM, HNN, NormalForm, nf_equivalent
from src.utils.constants import TAG_K, TAG_L, TAG_T
from src.utils.exceptions import InvalidElementError
from tests.conftest import load_corpus


class TestAmalgamNormalForm:
    """测试融合积 Fx *_{x³=y³} Fy 中的约化"""

    def setup_method(self):
        self.workspace = load_corpus('words.mcx')
        self.datum = self.workspace.datum('Z3')

    def _reduce(self, name):
        _, syllables = self.workspace.word(name)
        return self.datum.reduce(syllables)

    def test_alternating_word_is_reduced(self):
        nf = self._reduce('alternating')
        assert nf.tags == (TAG_K, TAG_L, TAG_K)
        assert self.datum.format_element(nf) == 'K:x L:Y K:x'
        assert self.datum.check_invariants(nf)

    def test_cancellation_merges_neighbours(self):
        nf = self._reduce('cancel')
        assert self.datum.format_element(nf) == 'K:xx'
        assert self.datum.syllable_length(nf) == 1

    def test_edge_group_syllable_moves_across(self):
        nf = self._reduce('edge')
        assert self.datum.format_element(nf) == 'L:yy'

    def test_canonical_form_picks_coset_representatives(self):
        word = self.datum.parse_word(['K:xxxx', 'L:Y', 'K:x'])
        canonical = self.datum.canonical(self.datum.reduce(word))
        assert self.datum.format_element(canonical) == 'K:x L:Y K:xxxx'

    def test_equivalence_up_to_edge_group(self):
        n1 = self.datum.reduce(self.datum.parse_word(['K:xxxx', 'L:Y', 'K:x']))
        n2 = self.datum.reduce(self.datum.parse_word(['K:x', 'L:yy', 'K:x']))
        n3 = self.datum.reduce(self.datum.parse_word(['K:x', 'L:Y', 'K:x']))
        assert nf_equivalent(n1, n2, self.datum)
        assert not nf_equivalent(n1, n3, self.datum)

    def test_group_operations_on_canonical_forms(self):
        g = self.datum.parse_element('K:x L:Y')
        assert self.datum.multiply(g, self.datum.invert(g)).is_identity
        assert self.datum.word_length(g) == 2

    def test_single_edge_group_syllable_is_written_on_k_side(self):
        g = self.datum.parse_element('L:yyy')
        assert g.syllables == ((TAG_K, self.datum.gk.parse_element('xxx')),)
        assert self.datum.in_edge_group(g)
        assert self.datum.factor_element(g, TAG_L) == self.datum.gl.parse_element('yyy')

    def test_unknown_factor(self):
        with pytest.raises(InvalidElementError):
            self.datum.parse_syllable('M:x')


class TestHnnNormalForm:
    """测试 HNN 扩张 <a, t | t⁻¹at = a> 中的约化"""

    def setup_method(self):
        self.workspace = load_corpus('words.mcx')
        self.datum = self.workspace.datum('loop')

    def test_pinch_is_removed(self):
        _, syllables = self.workspace.word('pinch')
        nf = self.datum.reduce(syllables)
        assert self.datum.format_element(nf) == 'K:a'
        assert self.datum.syllable_length(nf) == 0

    def test_stable_letters_survive(self):
        _, syllables = self.workspace.word('stable')
        nf = self.datum.reduce(syllables)
        assert nf.syllables == ((TAG_T, 1), (TAG_T, 1))
        assert self.datum.syllable_length(nf) == 2
        assert self.datum.check_invariants(nf)

    def test_adjacent_inverse_letters_cancel(self):
        nf = self.datum.reduce(self.datum.parse_word(['t', 'T']))
        assert nf.is_identity

    def test_canonical_form_moves_subgroup_part_through_letter(self):
        nf = self.datum.reduce(self.datum.parse_word(['K:a', 't']))
        canonical = self.datum.canonical(nf)
        assert canonical.syllables == ((TAG_T, 1), (TAG_K, self.datum.gk.parse_element('a')))

    def test_exponent_must_be_unit(self):
        with pytest.raises(InvalidElementError):
            self.datum.reduce([(TAG_T, 2)])


class TestNormalFormValue:
    """测试正规形值对象"""

    def test_identity_and_tags(self):
        nf = NormalForm((), AMALGAM)
        assert nf.is_identity
        assert len(nf) == 0
        hnn = NormalForm(((TAG_T, -1), (TAG_K, (1,))), HNN)
        assert hnn.stable_letters() == (-1,)
        assert hnn.tags == (TAG_T, TAG_K)
