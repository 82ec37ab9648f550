import logging
from fractions import Fraction

import pytest

from koszulres.errors import CutoffError, RingInputError
from koszulres.exactlin import QQ, PrimeField
from koszulres.polyring import (Polynomial, build_quotient, hilbert_function, monomials_of_degree,
                                parse_polynomial)

XYZW = ('x', 'y', 'z', 'w')


def quotient(names, generators, field=QQ, **kwargs):
    return build_quotient(names, field, [parse_polynomial(g, names, field) for g in generators], **kwargs)


class TestParsePolynomial:
    def test_binomial(self):
        p = parse_polynomial('z^3 - x*y^2', XYZW)
        assert p.terms == {(0, 0, 3, 0): 1, (1, 2, 0, 0): -1}
        assert p.is_homogeneous() and p.degree == 3

    def test_single_variable(self):
        assert parse_polynomial('x', XYZW).terms == {(1, 0, 0, 0): 1}

    def test_rational_coefficient(self):
        p = parse_polynomial('3/2*x*y - y^2', ('x', 'y'))
        assert p.terms == {(1, 1): Fraction(3, 2), (0, 2): -1}

    def test_like_terms_combine_and_cancel(self):
        assert parse_polynomial('x*y + y*x - 2*x*y', ('x', 'y')).terms == {}
        assert parse_polynomial('-x^2 + 3*x^2', ('x', 'y')).terms == {(2, 0): 2}

    def test_longest_variable_name_wins(self):
        p = parse_polynomial('x1*x10', ('x1', 'x10'))
        assert p.terms == {(1, 1): 1}

    def test_coefficients_reduce_mod_p(self):
        p = parse_polynomial('7*x^2 + 1/2*y^2', ('x', 'y'), PrimeField(7))
        assert p.terms == {(0, 2): 4}

    @pytest.mark.parametrize('text, reason, column', [
        ('x^2 + q*y', 'unknown variable "q"', 7),
        ('x^2 +', 'unexpected end of polynomial', 6),
    ])
    def test_errors_carry_column(self, text, reason, column):
        with pytest.raises(RingInputError) as info:
            parse_polynomial(text, XYZW)
        assert info.value.reason == reason
        assert info.value.column == column

    def test_dangling_exponent(self):
        with pytest.raises(RingInputError) as info:
            parse_polynomial('y*x^', XYZW)
        assert info.value.reason == 'malformed exponent'
        assert info.value.column in (4, 5)

    def test_empty_polynomial(self):
        with pytest.raises(RingInputError, match='empty'):
            parse_polynomial('   ', XYZW)

    def test_to_string(self):
        p = parse_polynomial('z^3 - x*y^2', XYZW)
        assert p.to_string(XYZW) == '-x*y^2 + z^3'
        assert Polynomial(2, {}).to_string(('x', 'y')) == '0'


class TestMonomialOrder:
    def test_graded_lex(self):
        assert monomials_of_degree(2, 2) == [(2, 0), (1, 1), (0, 2)]
        assert monomials_of_degree(3, 1) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]

    def test_counts(self):
        assert len(monomials_of_degree(4, 3)) == 20


class TestBuildQuotient:
    def test_codepth4_ring_dimensions(self, flagship_ring):
        assert flagship_ring.artinian
        assert flagship_ring.socle_degree == 5
        assert flagship_ring.hilbert_series() == [1, 4, 9, 12, 9, 2]
        assert flagship_ring.dim(6) == 0
        # pieces are kept through socle degree plus five
        assert flagship_ring.cutoff == 10

    def test_dual_numbers(self):
        ring = quotient(('x',), ['x^2'])
        assert ring.hilbert_series() == [1, 1]

    def test_non_homogeneous_generator(self):
        with pytest.raises(RingInputError, match='not homogeneous'):
            quotient(('x', 'y'), ['x^2 + y^3'])

    def test_linear_generator(self):
        with pytest.raises(RingInputError, match='degree 1'):
            quotient(('x', 'y'), ['x'])

    def test_zero_generator(self):
        with pytest.raises(RingInputError, match='zero'):
            quotient(('x', 'y'), ['x^2 - x^2'])

    def test_non_artinian_needs_cutoff(self):
        with pytest.raises(CutoffError):
            quotient(('x', 'y'), ['x^2'], artinian_search_limit=8)

    def test_non_artinian_with_cutoff(self):
        ring = quotient(('x', 'y'), ['x^2'], cutoff=6)
        assert not ring.artinian
        assert ring.hilbert_series() == [1, 2, 2, 2, 2, 2, 2]
        with pytest.raises(CutoffError):
            ring.dim(7)

    def test_non_artinian_cutoff_is_logged(self, caplog):
        with caplog.at_level(logging.WARNING, logger='koszulres.polyring'):
            quotient(('x', 'y'), ['x^2'], cutoff=6)
        assert 'stabilized' in caplog.text
        caplog.clear()
        with caplog.at_level(logging.WARNING, logger='koszulres.polyring'):
            quotient(('x', 'y'), ['x^2', 'y^3'])
        assert 'stabilized' not in caplog.text

    def test_hilbert_function(self, flagship_ring):
        assert hilbert_function(flagship_ring, 3) == 12
        assert hilbert_function(flagship_ring, 0) == 1
        assert hilbert_function(quotient(('x', 'y'), ['x^2', 'x*y', 'y^2']), 1) == 2


class TestMultiply:
    def setup_method(self):
        self.names = XYZW
        self.ring = quotient(XYZW, ['x^3', 'y^3', 'z^3 - x*y^2', 'x^2*z^2', 'x*y*z^2', 'y^2*w', 'w^2'])

    def element(self, text):
        return self.ring.element(parse_polynomial(text, self.names))

    def test_unit(self):
        v = self.element('x*z + y*w')
        one = self.ring.element(Polynomial(4, {(0, 0, 0, 0): Fraction(1)}))
        assert self.ring.multiply(v, one).components == v.components

    def test_binomial_relation(self):
        assert self.element('z^3').components == self.element('x*y^2').components

    def test_generators_vanish(self):
        for generator in self.ring.generators:
            assert self.ring.element(generator).is_zero()

    def test_multiples_of_generators_are_in_the_ideal(self):
        for generator in self.ring.generators:
            for monomial in monomials_of_degree(4, 2):
                product = Polynomial(4, {tuple(a + b for a, b in zip(m, monomial)): c
                                         for m, c in generator.terms.items()})
                assert self.ring.in_ideal(product)

    def test_commutative_and_homogeneous(self):
        u, v = self.element('x*z - y*w'), self.element('x + z')
        uv, vu = self.ring.multiply(u, v), self.ring.multiply(v, u)
        assert uv.components == vu.components
        assert set(uv.components) <= {3}

    def test_square_in_dual_numbers(self):
        ring = quotient(('x',), ['x^2'])
        x = ring.element(parse_polynomial('x', ('x',)))
        assert ring.multiply(x, x).is_zero()

    def test_normal_form_is_linear(self):
        a = self.element('x^2*y + z^3')
        b = self.element('x*y^2')
        both = self.element('x^2*y + z^3 + 2*x*y^2')
        combined = {}
        for vector, coefficient in ((a.components.get(3, {}), 1), (b.components.get(3, {}), 2)):
            for k, value in vector.items():
                combined[k] = combined.get(k, 0) + coefficient * value
        assert both.components[3] == {k: v for k, v in combined.items() if v}
