#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
性质测试：随机链、随机词上的代数恒等式
"""

import itertools
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, assume, given, settings, strategies as st
from sympy.combinatorics import Permutation

from src.core.actions import PiElement, Strand, average, pi_multiply
from src.core.algebra import (
    Chain, Cochain, RelativePair, boundary, coboundary, l1, linf, pair, relative_norm,
)
from src.core.groups import FreeGroup
from src.core.mcx import (
    ComplexDeclaration, EdgeLabeling, SimplexDeclaration, SubcomplexMask, build_multicomplex,
)
from src.core.normlp import LpProblem, dual_certificate, min_l1
from tests.conftest import load_corpus

SPHERE_WORKSPACE = load_corpus('sphere.mcx')
SPHERE = SPHERE_WORKSPACE.complex('dS3')
SWAP = SPHERE_WORKSPACE.action('swap')
WEDGE3 = load_corpus('wedge3.mcx').complex('wedge3')
WORDS = load_corpus('words.mcx')
Z3 = WORDS.datum('Z3')
LOOP = WORDS.datum('loop')
FREE = FreeGroup('F2', ['a', 'b'])

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def simplices_of(complex_, dim):
    return [s for s in complex_.all_simplices() if s.dim == dim]


def chains(complex_, dim):
    return st.lists(
        st.tuples(rationals, st.sampled_from(simplices_of(complex_, dim))), max_size=8
    ).map(lambda terms: Chain.from_terms(complex_, dim, terms))


def cochains(complex_, dim):
    return st.dictionaries(st.sampled_from(simplices_of(complex_, dim)), rationals, max_size=6).map(
        lambda values: Cochain(complex_, dim, values)
    )


free_words = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=12)
amalgam_words = st.lists(st.sampled_from(['K:x', 'K:X', 'K:xx', 'L:y', 'L:Y', 'L:yy']), max_size=8).map(
    lambda tokens: Z3.parse_word(tokens)
)
hnn_words = st.lists(st.sampled_from(['t', 'T', 'K:a', 'K:A']), max_size=8).map(
    lambda tokens: LOOP.parse_word(tokens)
)

AMALGAM_TOKENS = ['K:x', 'K:X', 'K:xxx', 'L:y', 'L:Y', 'L:yyy']
HNN_TOKENS = ['t', 'T', 'K:a', 'K:A']
amalgam_tokens = st.lists(st.sampled_from(AMALGAM_TOKENS), max_size=8)
hnn_tokens = st.lists(st.sampled_from(HNN_TOKENS), max_size=8)
EDGE_RELATION = {'K:xxx': 'L:yyy', 'L:yyy': 'K:xxx', 'K:XXX': 'L:YYY', 'L:YYY': 'K:XXX'}

# x -> (0 1 2), y -> (1 2 3) 满足 x³ = y³
S4_IMAGES = {'x': Permutation([1, 2, 0, 3]), 'y': Permutation([0, 2, 3, 1])}


def inverse_token(token):
    if ':' not in token:
        return token.swapcase()
    tag, letters = token.split(':')
    return f"{tag}:{letters[::-1].swapcase()}"


def rewrite_amalgam(tokens, moves):
    """按 moves 做不改变群元素的改写"""
    tokens = list(tokens)
    for kind, position, token in moves:
        if kind == 'insert':
            at = position % (len(tokens) + 1)
            tokens[at:at] = [token, inverse_token(token)]
        elif tokens:
            at = position % len(tokens)
            tag, letters = tokens[at].split(':')
            if kind == 'relate' and tokens[at] in EDGE_RELATION:
                tokens[at] = EDGE_RELATION[tokens[at]]
            elif kind == 'split':
                tokens[at:at + 1] = [f"{tag}:{letter}" for letter in letters]
    return tokens


def rewrite_hnn(tokens, moves):
    """<a, t | t⁻¹at = a> 中插入互逆对，或交换相邻的 a±1 与 t±1"""
    tokens = list(tokens)
    for kind, position, token in moves:
        if kind == 'insert':
            at = position % (len(tokens) + 1)
            tokens[at:at] = [token, inverse_token(token)]
        elif len(tokens) > 1:
            at = position % (len(tokens) - 1)
            pair_ = tokens[at:at + 2]
            if sum(1 for t in pair_ if t.startswith('K:')) == 1:
                tokens[at:at + 2] = pair_[::-1]
    return tokens


def amalgam_moves():
    return st.lists(
        st.tuples(
            st.sampled_from(['insert', 'relate', 'split']), st.integers(0, 20), st.sampled_from(AMALGAM_TOKENS),
        ),
        max_size=6,
    )


def hnn_moves():
    return st.lists(
        st.tuples(st.sampled_from(['insert', 'commute']), st.integers(0, 20), st.sampled_from(HNN_TOKENS)),
        max_size=6,
    )


def s4_image(tokens):
    image = Permutation(3)
    for token in tokens:
        for letter in token.split(':')[1]:
            p = S4_IMAGES[letter.lower()]
            image = image * (p if letter.islower() else ~p)
    return image


def exponent_sum(tokens):
    return sum(1 if letter.islower() else -1 for token in tokens for letter in token.split(':')[-1])


def canonical_tokens(datum, nf):
    return [] if nf.is_identity else datum.format_element(nf).split()


@st.composite
def relative_classes(draw):
    """4 到 6 个顶点上的随机复形，z 为至多三个三角形的组合，L 为 ∂z 的闭包"""
    n = draw(st.integers(4, 6))
    names = [f"v{i}" for i in range(n)]
    tetrahedra = draw(st.sets(st.sampled_from(list(itertools.combinations(range(n), 4))), max_size=3))
    triangles = draw(st.sets(st.sampled_from(list(itertools.combinations(range(n), 3))), min_size=1, max_size=6))
    triangles |= {face for q in tetrahedra for face in itertools.combinations(q, 3)}

    def sid(prefix, vertices):
        return prefix + ''.join(str(v) for v in vertices)

    declaration = ComplexDeclaration('random', names)
    families = (('e', itertools.combinations(range(n), 2)), ('t', sorted(triangles)), ('q', sorted(tetrahedra)))
    for prefix, family in families:
        for vertices in family:
            declaration.simplices.append(
                SimplexDeclaration(sid(prefix, vertices), tuple(names[v] for v in vertices))
            )
    complex_ = build_multicomplex(declaration)

    support = draw(st.lists(st.sampled_from(sorted(triangles)), min_size=1, max_size=3, unique=True))
    coefficients = draw(st.lists(st.integers(-3, 3).filter(bool), min_size=len(support), max_size=len(support)))
    z = Chain.from_terms(complex_, 2, [
        (c, complex_.by_id(sid('t', t))) for c, t in zip(coefficients, support)
    ])
    edges = list(boundary(z).terms)
    sub = SubcomplexMask.closure(complex_, edges, 'L') if edges else None
    return z, RelativePair(complex_, sub)


class TestChainProperties:
    """测试边缘算子与配对"""

    @given(chains(SPHERE, 2))
    def test_boundary_squares_to_zero_on_sphere(self, z):
        assert boundary(boundary(z)).is_zero()

    @settings(max_examples=50)
    @given(chains(WEDGE3, 3))
    def test_boundary_squares_to_zero_in_dimension_three(self, z):
        assert boundary(boundary(z)).is_zero()

    @given(chains(SPHERE, 2), chains(SPHERE, 2))
    def test_l1_triangle_inequality(self, z1, z2):
        assert l1(z1 + z2) <= l1(z1) + l1(z2)

    @given(cochains(SPHERE, 1), chains(SPHERE, 2))
    def test_coboundary_is_adjoint(self, c, z):
        assert pair(coboundary(c), z) == pair(c, boundary(z))

    @given(chains(SPHERE, 2), rationals)
    def test_scaling(self, z, q):
        assert l1(z.scale(q)) == abs(Fraction(q)) * l1(z)

    @given(cochains(SPHERE, 2), chains(SPHERE, 2))
    def test_holder_inequality(self, c, z):
        assert abs(pair(c, z)) <= linf(c) * l1(z)


class TestAveragingProperties:
    """测试有限群平均"""

    @given(cochains(SPHERE, 2))
    def test_average_contracts_and_is_invariant(self, c):
        averaged = average(c, SWAP)
        assert linf(averaged) <= linf(c)
        assert SWAP.is_invariant(averaged)
        assert average(averaged, SWAP) == averaged


class TestLpDualityProperties:
    """测试随机闭链上的精确对偶"""

    @settings(max_examples=30, deadline=None)
    @given(chains(SPHERE, 2))
    def test_primal_equals_dual(self, w):
        z = boundary(w)
        assume(not z.is_zero())
        value, _ = min_l1(z)
        certificate = dual_certificate(LpProblem(z, RelativePair(SPHERE)))
        assert certificate.primal_value == value
        assert certificate.dual_value == value
        assert certificate.dual_sup_norm <= 1
        assert value <= l1(z)

    @settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    @given(relative_classes())
    def test_certificate_on_random_complexes(self, problem):
        z, relative = problem
        value, optimal = min_l1(z, relative)
        certificate = dual_certificate(LpProblem(z, relative))
        assert certificate.primal_value == value
        assert certificate.dual_value == value
        assert pair(certificate.dual_cochain, z) == value
        assert certificate.dual_sup_norm <= 1
        assert coboundary(certificate.dual_cochain).is_zero()
        assert l1(optimal) == value
        assert 0 <= value <= relative_norm(z, relative)


class TestFreeGroupProperties:
    """测试自由群的约化"""

    @given(free_words)
    def test_letters_are_freely_reduced(self, word):
        letters = FREE.to_letters(FREE.from_letters(word))
        assert all(x != -y for x, y in zip(letters, letters[1:]))
        assert FREE.from_letters(letters) == FREE.from_letters(word)
        assert len(letters) <= len(word)

    @given(free_words)
    def test_inverse_cancels(self, word):
        a = FREE.from_letters(word)
        assert FREE.multiply(a, FREE.invert(a)).is_identity
        assert FREE.multiply(FREE.invert(a), a).is_identity

    @given(free_words, free_words, free_words)
    def test_multiply_is_associative(self, u, v, w):
        a, b, c = (FREE.from_letters(x) for x in (u, v, w))
        assert FREE.multiply(FREE.multiply(a, b), c) == FREE.multiply(a, FREE.multiply(b, c))


LOOP_LABELING = EdgeLabeling(SPHERE, FREE)


def loop_elements():
    """顶点 a、b 上的环路束"""
    def build(words):
        strands = [Strand(v, v, FREE.from_letters(w)) for v, w in enumerate(words) if FREE.from_letters(w)]
        return PiElement(strands, LOOP_LABELING)
    return st.lists(free_words, min_size=2, max_size=2).map(build)


class TestPiElementProperties:
    """测试路径束乘积"""

    @settings(max_examples=50)
    @given(loop_elements(), loop_elements(), loop_elements())
    def test_multiply_is_associative(self, g1, g2, g3):
        left = pi_multiply(pi_multiply(g1, g2), g3)
        right = pi_multiply(g1, pi_multiply(g2, g3))
        assert left.equals(right)

    @given(loop_elements())
    def test_inverse(self, g):
        assert pi_multiply(g, g.inverse()).is_identity()


class TestNormalFormProperties:
    """测试正规形的规范化"""

    @given(amalgam_words)
    def test_canonical_is_idempotent(self, word):
        canonical = Z3.element(word)
        assert Z3.canonical(canonical) == canonical
        assert Z3.check_invariants(canonical)

    @given(amalgam_words, amalgam_words)
    def test_element_is_multiplicative(self, u, v):
        assert Z3.element(u + v) == Z3.multiply(Z3.element(u), Z3.element(v))

    @given(amalgam_words)
    def test_amalgam_inverse(self, word):
        a = Z3.element(word)
        assert Z3.multiply(a, Z3.invert(a)).is_identity

    @settings(max_examples=50)
    @given(hnn_words)
    def test_hnn_inverse(self, word):
        a = LOOP.element(word)
        assert LOOP.multiply(a, LOOP.invert(a)).is_identity
        assert LOOP.check_invariants(a)


def bracketed_product(datum, elements, data):
    """按随机抽取的括号方式把 elements 乘起来"""
    if len(elements) == 1:
        return elements[0]
    cut = data.draw(st.integers(1, len(elements) - 1))
    return datum.multiply(bracketed_product(datum, elements[:cut], data),
                          bracketed_product(datum, elements[cut:], data))


class TestNormalFormSoundness:
    """测试正规形与改写、同态像和结合方式无关"""

    @settings(max_examples=300)
    @given(amalgam_tokens, amalgam_moves())
    def test_rewritten_words_share_canonical_form(self, tokens, moves):
        rewritten = rewrite_amalgam(tokens, moves)
        original = Z3.reduce(Z3.parse_word(tokens))
        other = Z3.reduce(Z3.parse_word(rewritten))
        assert Z3.nf_equivalent(original, other)
        assert Z3.syllable_length(original) == Z3.syllable_length(other)
        assert Z3.element(Z3.parse_word(tokens)) == Z3.element(Z3.parse_word(rewritten))

    @settings(max_examples=300)
    @given(hnn_tokens, hnn_moves())
    def test_rewritten_hnn_words_share_canonical_form(self, tokens, moves):
        rewritten = rewrite_hnn(tokens, moves)
        original = LOOP.reduce(LOOP.parse_word(tokens))
        other = LOOP.reduce(LOOP.parse_word(rewritten))
        assert LOOP.nf_equivalent(original, other)
        assert LOOP.syllable_length(original) == LOOP.syllable_length(other)

    @given(amalgam_tokens)
    def test_canonical_form_has_same_image(self, tokens):
        canonical = canonical_tokens(Z3, Z3.element(Z3.parse_word(tokens)))
        assert s4_image(canonical) == s4_image(tokens)
        assert exponent_sum(canonical) == exponent_sum(tokens)

    @given(amalgam_tokens, amalgam_tokens)
    def test_distinct_images_give_distinct_forms(self, u, v):
        if s4_image(u) != s4_image(v) or exponent_sum(u) != exponent_sum(v):
            assert Z3.element(Z3.parse_word(u)) != Z3.element(Z3.parse_word(v))

    @settings(max_examples=1000, deadline=None)
    @given(st.lists(amalgam_tokens, min_size=1, max_size=5), st.data())
    def test_reassociation(self, factors, data):
        elements = [Z3.element(Z3.parse_word(f)) for f in factors]
        product = bracketed_product(Z3, elements, data)
        flat = Z3.reduce(Z3.parse_word([token for f in factors for token in f]))
        assert Z3.nf_equivalent(product, flat)
        assert product == Z3.canonical(flat)
        assert Z3.syllable_length(product) == Z3.syllable_length(flat)
        assert Z3.word_length(product) == Z3.word_length(Z3.canonical(flat))

    @settings(max_examples=200, deadline=None)
    @given(st.lists(hnn_tokens, min_size=1, max_size=4), st.data())
    def test_hnn_reassociation(self, factors, data):
        elements = [LOOP.element(LOOP.parse_word(f)) for f in factors]
        product = bracketed_product(LOOP, elements, data)
        flat = LOOP.reduce(LOOP.parse_word([token for f in factors for token in f]))
        assert LOOP.nf_equivalent(product, flat)
        assert LOOP.syllable_length(product) == LOOP.syllable_length(flat)


if __name__ == "__main__":
    pytest.main([__file__])
