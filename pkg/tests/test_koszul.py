import pytest

from koszulres.errors import NotABoundaryError
from koszulres.koszul import (KoszulComplex, check_derivation, merge_subsets, piece_dimension, subset_label,
                              subset_order)
from tests.conftest import ring_from_dataset


class TestExteriorBasis:
    def test_colex_order(self):
        assert [subset_label(s) for s in subset_order(4, 2)] == ['T12', 'T13', 'T23', 'T14', 'T24', 'T34']
        assert [subset_label(s) for s in subset_order(4, 3)] == ['T123', 'T124', 'T134', 'T234']

    def test_empty_subset_is_the_unit(self):
        assert subset_order(3, 0) == ((),)
        assert subset_label(()) == '1'

    def test_merge_signs(self):
        assert merge_subsets((0,), (1,)) == (1, (0, 1))
        assert merge_subsets((1,), (0,)) == (-1, (0, 1))
        assert merge_subsets((0, 2), (1, 3)) == (-1, (0, 1, 2, 3))
        assert merge_subsets((0, 1), (1,)) is None


class TestDifferential:
    def test_piece_dimensions(self, flagship_complex):
        assert piece_dimension(flagship_complex, 2, 4) == 6 * 9
        assert flagship_complex.piece(2, 4).dim == 54
        assert piece_dimension(flagship_complex, 5, 5) == 0

    @pytest.mark.parametrize('i', [2, 3, 4])
    def test_square_is_zero(self, flagship_complex, i):
        for j in flagship_complex.degree_range(i):
            d_low = flagship_complex.differential(i - 1, j)
            for column in flagship_complex.differential(i, j).columns():
                assert d_low.apply(column) == {}

    def test_degree_zero_cycles_are_everything(self, flagship_complex):
        assert flagship_complex.cycle_space(0, 2).rank == 9

    def test_first_homology_of_complete_intersection(self):
        K = KoszulComplex(ring_from_dataset('ci_codepth3'))
        assert K.cycle_space(1, 2).rank - K.boundary_space(1, 2).rank == 3
        assert K.cycle_space(1, 3).rank == K.boundary_space(1, 3).rank


class TestProducts:
    def test_wedge_sign_in_output(self, flagship_complex):
        K = flagship_complex
        u = K.from_polynomials(1, {(4,): 'w'})
        v = K.from_polynomials(1, {(1,): 'x^2'})
        assert K.format(K.wedge(u, v)) == '-x^2*w*T14'
        assert K.format(K.wedge(v, u)) == 'x^2*w*T14'

    def test_wedge_of_linear_forms_squares_to_zero(self, flagship_complex):
        K = flagship_complex
        u = K.from_polynomials(1, {(1,): 'y', (3,): 'z + w'})
        assert K.wedge(u, u).is_zero()

    def test_wedge_past_top_degree_is_zero(self, flagship_complex):
        K = flagship_complex
        u = K.from_polynomials(3, {(1, 2, 3): 'x'})
        v = K.from_polynomials(2, {(1, 4): 'y'})
        assert K.wedge(u, v).is_zero()

    def test_leibniz_rule(self, flagship_complex):
        K = flagship_complex
        u = K.from_polynomials(1, {(1,): 'x*y', (2,): 'z^2'})
        v = K.from_polynomials(2, {(1, 3): 'w', (2, 4): 'x + y'})
        assert check_derivation(K, u, v)
        assert check_derivation(K, v, u)

    def test_format_of_scalars_and_sums(self, flagship_complex):
        K = flagship_complex
        assert K.format(K.from_polynomials(0, {(): 'x'})) == 'x'
        assert K.format(K.zero(2)) == '0'
        assert K.format(K.from_polynomials(1, {(2,): 'x + y', (1,): 'z'})) == 'z*T1 + (x + y)*T2'


class TestLiftBoundary:
    def test_lift_of_boundary(self, flagship_complex):
        K = flagship_complex
        target = K.from_polynomials(2, {(1, 2): 'x^2*y^2'})
        assert K.apply_differential(target).is_zero()
        lift = K.lift_boundary(target)
        assert lift.hdeg == 3
        assert lift.in_maximal_ideal()
        assert K.add(K.apply_differential(lift), target, -1).is_zero()

    def test_cycle_that_is_not_a_boundary(self, flagship_complex):
        K = flagship_complex
        cycle = K.from_polynomials(1, {(1,): 'x^2'})
        assert K.apply_differential(cycle).is_zero()
        with pytest.raises(NotABoundaryError):
            K.lift_boundary(cycle)

    def test_lift_of_zero(self, flagship_complex):
        assert flagship_complex.lift_boundary(flagship_complex.zero(1)).is_zero()
