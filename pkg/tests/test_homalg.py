import pytest

from koszulres.errors import NotACycleError, ProductsNotZeroError
from koszulres.exactlin import linear_combination, subspace_sum
from koszulres.koszul import KoszulElement


class TestFlagshipAlgebra:
    """Artinian codepth-4 ring with x^3, y^3, z^3 - xy^2, x^2z^2, xyz^2, y^2w, w^2."""

    def test_ranks(self, flagship_algebra):
        assert [flagship_algebra.rank(i) for i in range(1, 5)] == [7, 15, 14, 5]

    def test_euler_characteristic(self, flagship_algebra):
        assert flagship_algebra.euler_characteristic() == 0

    def test_product_ranks(self, flagship_algebra):
        products = flagship_algebra.product_ranks
        assert (products['q11'], products['q12'], products['q13'], products['q22']) == (7, 10, 0, 2)

    def test_kernel_of_first_multiplication(self, flagship_algebra):
        assert len(flagship_algebra.p1) == 42
        assert all(e.lift is not None and e.lift.hdeg == 3 for e in flagship_algebra.p1)

    def test_kernel_of_second_multiplication(self, flagship_algebra):
        assert flagship_algebra.b == 0
        assert flagship_algebra.b_from_psi == 0
        assert len(flagship_algebra.p2) == 46
        assert flagship_algebra.kernel_phi2.rank == 7 * 15 - 10

    def test_lifts_are_in_the_maximal_ideal(self, flagship_algebra):
        for element in flagship_algebra.p1 + flagship_algebra.p2:
            assert element.lift.in_maximal_ideal()

    def test_massey_invariant(self, flagship_algebra):
        massey = flagship_algebra.massey
        assert massey.a == 3
        assert massey.a - flagship_algebra.b == 3
        products = subspace_sum(flagship_algebra.product_subspace(1, 3), flagship_algebra.product_subspace(2, 2))
        assert products.rank == 2
        # the triple products add exactly one class beyond A1A3 + A2A2
        assert subspace_sum(products, massey.span).rank - products.rank == 1

    @pytest.mark.slow
    def test_exhibited_flags_cover_the_span(self, flagship_algebra):
        flags = flagship_algebra.exhibit_massey_generators()
        assert len(flags) == flagship_algebra.massey.span.rank

    def test_z_bases(self, flagship_algebra):
        assert [len(flagship_algebra.z[i]) for i in range(1, 5)] == [7, 15 - 7, 14 - 10, 5 - 3]
        for i in range(1, 5):
            assert len(flagship_algebra.z_degrees[i]) == len(flagship_algebra.z[i])

    def test_graded_commutativity(self, flagship_algebra):
        assert flagship_algebra.check_graded_commutativity()

    def test_z1z2_relations(self, flagship_algebra):
        assert flagship_algebra.check_z1z2_vanishing()


class TestMasseyTriple:
    def classes(self, algebra, *cycles):
        K = algebra.K
        return [algebra.class_of(K.from_polynomials(1, cycle)) for cycle in cycles]

    def test_nonzero_triple_product(self, flagship_algebra):
        algebra = flagship_algebra
        K = algebra.K
        x, y, z = self.classes(algebra, {(1,): 'x^2'}, {(2,): 'y^2'}, {(4,): 'w'})
        result = algebra.massey_triple(x, y, z)
        expected = algebra.class_of(K.from_polynomials(4, {(1, 2, 3, 4): 'x*z^2*w'}))
        assert expected
        assert not result.indeterminacy.contains(expected)
        field = algebra.field
        plus = linear_combination(field, [(1, result.representative), (-1, expected)])
        minus = linear_combination(field, [(1, result.representative), (1, expected)])
        assert result.indeterminacy.contains(plus) or result.indeterminacy.contains(minus)

    def test_class_independent_of_chosen_lift(self, flagship_algebra):
        algebra = flagship_algebra
        K = algebra.K
        x, y, z = self.classes(algebra, {(1,): 'x^2'}, {(2,): 'y^2'}, {(4,): 'w'})
        X, Y = (algebra.element(1, v) for v in (x, y))
        lift_xy = K.lift_boundary(K.wedge(X, Y))
        [j] = lift_xy.degrees()
        cycles = K.cycle_space(3, j)
        assert cycles.rank
        boundaries = K.boundary_space(3, j)
        cycle = next((v for v in cycles.basis if not boundaries.contains(v)), cycles.basis[0])
        perturbed = K.add(lift_xy, KoszulElement(3, {j: cycle}))
        assert K.apply_differential(K.add(perturbed, lift_xy, -1)).is_zero()

        result = algebra.massey_triple(x, y, z, lift_xy=lift_xy)
        other = algebra.massey_triple(x, y, z, lift_xy=perturbed)
        difference = linear_combination(algebra.field, [(1, other.representative), (-1, result.representative)])
        assert result.indeterminacy.contains(difference)
        assert other.indeterminacy.rank == result.indeterminacy.rank

    def test_products_must_vanish(self, flagship_algebra):
        algebra = flagship_algebra
        a1 = algebra.rank(1)
        pair = next((i, k) for i in range(a1) for k in range(a1) if algebra.product_class(1, i, 1, k))
        with pytest.raises(ProductsNotZeroError):
            algebra.massey_triple({pair[0]: 1}, {pair[1]: 1}, {pair[1]: 1})

    def test_class_of_non_cycle(self, flagship_algebra):
        with pytest.raises(NotACycleError):
            flagship_algebra.class_of(flagship_algebra.K.from_polynomials(1, {(1,): 'x'}))

    def test_boundary_has_zero_class(self, flagship_algebra):
        K = flagship_algebra.K
        assert flagship_algebra.class_of(K.from_polynomials(2, {(1, 2): 'x^2*y^2'})) == {}


class TestSmallRings:
    def test_dual_numbers(self, dual_numbers_algebra):
        algebra = dual_numbers_algebra
        assert algebra.rank(1) == 1
        assert algebra.basis(1).degrees == [2]
        assert algebra.euler_characteristic() == 0
        assert algebra.massey.a == 0 and algebra.b == 0

    def test_golod_ring_has_trivial_products(self, golod_algebra):
        algebra = golod_algebra
        assert [algebra.rank(i) for i in (1, 2)] == [3, 2]
        assert algebra.q(1, 1) == 0
        assert len(algebra.p1) == 9
        assert algebra.b == 0

    def test_complete_intersection_of_three_squares(self, ci3_algebra):
        algebra = ci3_algebra
        assert [algebra.rank(i) for i in range(1, 4)] == [3, 3, 1]
        assert (algebra.q(1, 1), algebra.q(1, 2)) == (3, 1)
        assert algebra.b == 1
        assert algebra.massey.a == 0

    def test_complete_intersection_of_four_squares(self, ci4_algebra):
        algebra = ci4_algebra
        assert [algebra.rank(i) for i in range(1, 5)] == [4, 6, 4, 1]
        products = algebra.product_ranks
        assert (products['q11'], products['q12'], products['q13'], products['q22']) == (6, 4, 1, 1)
        assert algebra.massey.a == 1
        assert algebra.b == 4
        assert algebra.check_graded_commutativity()
