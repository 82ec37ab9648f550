from fractions import Fraction

import pytest

from koszulres.errors import DimensionMismatchError, RingInputError
from koszulres.exactlin import (QQ, Echelon, LinearSolver, Matrix, PrimeField, Subspace, complement_basis,
                                intersect, kernel_basis, parse_field, rank, rank_of_vectors, rref, solve,
                                subspace_contains, subspace_sum)


class TestFields:
    def test_rationals_are_exact(self):
        assert QQ(Fraction(1, 3)) * 3 == 1
        assert QQ.format(Fraction(-3, 2)) == '-3/2'

    def test_prime_field_maps_fractions(self):
        gf7 = PrimeField(7)
        assert gf7(Fraction(1, 3)) == 5
        assert gf7(-1) == 6
        assert gf7.inv(3) == 5

    @pytest.mark.parametrize('p', [1, 8, 15])
    def test_non_primes_rejected(self, p):
        with pytest.raises(RingInputError):
            PrimeField(p)

    def test_denominator_divisible_by_p(self):
        with pytest.raises(RingInputError):
            PrimeField(5)(Fraction(1, 10))

    @pytest.mark.parametrize('text, expected', [('QQ', QQ), ('Q', QQ), ('GF(5)', PrimeField(5)),
                                                ('GF( 32003 )', PrimeField(32003))])
    def test_parse_field(self, text, expected):
        assert parse_field(text) == expected

    def test_parse_field_rejects_reals(self):
        with pytest.raises(RingInputError):
            parse_field('RR')


class TestElimination:
    def setup_method(self):
        self.m = Matrix.from_rows(QQ, [[1, 2, 3], [2, 4, 6], [1, 0, 1]])

    def test_rank(self):
        assert rank(self.m) == 2

    def test_rref_is_reduced(self):
        reduced, pivots = rref(self.m)
        assert pivots == (0, 1)
        assert reduced.to_rows() == [[1, 0, 1], [0, 1, 1]]

    def test_kernel_is_annihilated(self):
        kernel = kernel_basis(self.m)
        assert kernel.rank == 1
        for vector in kernel.basis:
            assert self.m.apply(vector) == {}

    def test_kernel_of_zero_matrix_is_everything(self):
        zero = Matrix.from_rows(QQ, [[0, 0], [0, 0]])
        assert kernel_basis(zero).rank == 2

    def test_rank_depends_on_characteristic(self):
        rows = [[1, 1], [1, -1]]
        assert rank(Matrix.from_rows(QQ, rows)) == 2
        assert rank(Matrix.from_rows(PrimeField(2), rows)) == 1

    def test_modular_rank_matches_rational_rank_on_small_entries(self):
        rows = [[1, 2, 0, 1], [0, 1, 1, 0], [1, 3, 1, 1], [2, 0, 1, 5]]
        assert rank(Matrix.from_rows(QQ, rows)) == rank(Matrix.from_rows(PrimeField(32003), rows)) == 3

    def test_rank_of_vectors_ignores_zero_vectors(self):
        assert rank_of_vectors(QQ, [{}, {0: Fraction(1)}, {}], 3) == 1

    def test_matrix_product(self):
        identity = Matrix.identity(QQ, 3)
        assert (self.m @ identity).to_rows() == self.m.to_rows()
        with pytest.raises(DimensionMismatchError):
            Matrix.from_rows(QQ, [[1, 2]]) @ self.m


class TestSolve:
    def setup_method(self):
        self.m = Matrix.from_rows(QQ, [[1, 1, 0], [0, 1, 1]])

    def test_particular_solution(self):
        solution = solve(self.m, [2, 3])
        assert self.m.apply({i: v for i, v in enumerate(solution) if v}) == {0: 2, 1: 3}
        # zero on the non-pivot coordinate
        assert solution[2] == 0

    def test_inconsistent_system_returns_none(self):
        m = Matrix.from_rows(QQ, [[1, 1], [2, 2]])
        assert solve(m, [1, 3]) is None

    def test_solver_reuses_factorization(self):
        solver = LinearSolver(self.m)
        assert solver.rank == 2
        for rhs in ({0: Fraction(1)}, {1: Fraction(5, 2)}, {}):
            assert self.m.apply(solver.solve(rhs)) == rhs

    def test_rhs_length_checked(self):
        with pytest.raises(DimensionMismatchError):
            solve(self.m, [1, 2, 3])


class TestSubspaces:
    def setup_method(self):
        self.u = Subspace.spanned_by(QQ, 3, [{0: Fraction(1), 1: Fraction(1)}])
        self.v = Subspace.spanned_by(QQ, 3, [{1: Fraction(1)}, {0: Fraction(1), 1: Fraction(1)}])

    def test_echelon_is_unique(self):
        a = Subspace.spanned_by(QQ, 3, [{0: 1, 1: 2}, {0: 1, 2: 1}])
        b = Subspace.spanned_by(QQ, 3, [{1: 2, 2: -1}, {0: 2, 1: 2, 2: 1}])
        assert a.basis == b.basis
        assert a.pivot_cols == b.pivot_cols

    def test_sum_and_contains(self):
        total = subspace_sum(self.u, self.v)
        assert total.rank == 2
        assert total.contains({0: Fraction(3)})
        assert not total.contains({2: Fraction(1)})

    def test_intersection(self):
        assert intersect(self.u, self.v).rank == 1
        w = Subspace.spanned_by(QQ, 3, [{2: Fraction(1)}])
        assert intersect(self.u, w).rank == 0

    def test_complement(self):
        chosen = complement_basis(self.u, self.v)
        assert len(chosen) == 1
        assert subspace_sum(self.u, Subspace.spanned_by(QQ, 3, chosen)).rank == self.v.rank

    def test_complement_requires_containment(self):
        w = Subspace.spanned_by(QQ, 3, [{2: Fraction(1)}])
        with pytest.raises(DimensionMismatchError):
            complement_basis(w, self.v)

    def test_ambient_dimensions_must_agree(self):
        with pytest.raises(DimensionMismatchError):
            subspace_sum(self.u, Subspace.zero(QQ, 4))
        with pytest.raises(DimensionMismatchError):
            subspace_contains(self.u, {5: Fraction(1)})

    def test_coordinates_in_echelon_basis(self):
        total = subspace_sum(self.u, self.v)
        vector = {0: Fraction(2), 1: Fraction(-1)}
        coordinates = total.coordinates(vector)
        rebuilt = {}
        for k, c in coordinates.items():
            for col, value in total.basis[k].items():
                rebuilt[col] = rebuilt.get(col, 0) + c * value
        assert {k: v for k, v in rebuilt.items() if v} == vector

    def test_echelon_insert_reports_dependence(self):
        echelon = Echelon(QQ)
        assert echelon.insert({0: Fraction(1), 2: Fraction(1)})
        assert echelon.insert({1: Fraction(1)})
        assert not echelon.insert({0: Fraction(2), 1: Fraction(3), 2: Fraction(2)})
        assert echelon.rank == 2
