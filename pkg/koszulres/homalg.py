"""The homology algebra A = H(K) and every distinguished basis, kernel and lift the resolution consumes.

A_i is charted degree by degree: the classes of internal degree j get consecutive coordinates, degrees in
ascending order. Every distinguished element below is homogeneous, so each free summand of the resolution
carries a single internal-degree shift.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from koszulres.errors import (ConsistencyError, CutoffError, DimensionMismatchError, NotABoundaryError,
                              NotACycleError, ProductsNotZeroError)
from koszulres.exactlin import (LinearSolver, Matrix, Subspace, Vector, axpy, complement_basis, kernel_basis,
                                linear_combination, rank_of_vectors, shifted, sparse, subspace_sum)
from koszulres.koszul import KoszulComplex, KoszulElement

logger = logging.getLogger(__name__)


@dataclass
class _DegreeChart:
    degree: int
    offset: int
    representatives: List[Vector]
    solver: LinearSolver


@dataclass
class HomologyBasis:
    """Cycle representatives of a basis of A_i and the coordinate chart they induce."""
    hdeg: int
    representatives: List[KoszulElement]
    degrees: List[int]
    charts: Dict[int, _DegreeChart]
    computed_degrees: range

    @property
    def rank(self) -> int:
        return len(self.representatives)


def homology_basis(complex_: KoszulComplex, i: int) -> HomologyBasis:
    """Per internal degree, a complement of the boundaries inside the cycles, assembled by ascending degree."""
    ring = complex_.ring
    if i > complex_.n or i < 0:
        return HomologyBasis(i, [], [], {}, range(0))
    if ring.artinian:
        degrees = range(i, i + ring.socle_degree + 1)
    else:
        # cycles of K_{i,j} need R_{j-i+1}
        degrees = range(i, i + ring.cutoff)
    representatives, rep_degrees, charts = [], [], {}
    top_rank = 0
    for j in degrees:
        cycles = complex_.cycle_space(i, j)
        boundaries = complex_.boundary_space(i, j)
        chosen = complement_basis(boundaries, cycles)
        top_rank = len(chosen)
        if not chosen:
            continue
        if j == i:
            raise ConsistencyError(f'homology class of K_{{{i},{j}}} outside mK')
        columns = chosen + list(boundaries.basis)
        solver = LinearSolver(Matrix.from_columns(complex_.field, complex_.piece(i, j).dim, columns))
        charts[j] = _DegreeChart(j, len(representatives), chosen, solver)
        for rep in chosen:
            representatives.append(KoszulElement(i, {j: rep}))
            rep_degrees.append(j)
        logger.debug('H_{%d,%d} has rank %d', i, j, len(chosen))
    if not ring.artinian and top_rank:
        raise CutoffError(f'H_{i} is nonzero in internal degree {degrees[-1]}, the last one computable with '
                          f'cutoff {ring.cutoff}; raise the cutoff')
    return HomologyBasis(i, representatives, rep_degrees, charts, degrees)


def class_of(complex_: KoszulComplex, basis: HomologyBasis, cycle: KoszulElement) -> Vector:
    """Coordinates of [cycle] in the chart of A_i; boundaries map to the zero vector."""
    if cycle.is_zero():
        return {}
    if cycle.hdeg != basis.hdeg:
        raise NotACycleError(f'element of K_{cycle.hdeg} cannot represent a class of A_{basis.hdeg}')
    if not complex_.apply_differential(cycle).is_zero():
        raise NotACycleError(f'element of K_{cycle.hdeg} is not a cycle')
    result = {}
    for j, vector in cycle.components.items():
        if j not in basis.computed_degrees and not complex_.ring.artinian:
            raise CutoffError(f'class in internal degree {j} lies beyond the computed homology')
        chart = basis.charts.get(j)
        if chart is None:
            if not complex_.boundary_space(basis.hdeg, j).contains(vector):
                raise ConsistencyError(f'cycle in K_{{{basis.hdeg},{j}}} is not a boundary although H vanishes')
            continue
        solution = chart.solver.solve(vector)
        if solution is None:
            raise ConsistencyError(f'cycle in K_{{{basis.hdeg},{j}}} escapes the homology chart')
        for k, value in solution.items():
            if k < len(chart.representatives):
                result[chart.offset + k] = value
    return result


@dataclass
class TensorFamilyElement:
    """An element sum_i [z1_i] (x) [p_i] of A_1 (x) A_k, with the Koszul lift of sum_i z1_i ^ p_i."""
    degree: int
    coordinates: Vector
    parts: List[KoszulElement]
    lift: Optional[KoszulElement] = None


@dataclass
class MasseyResult:
    representative: Vector
    indeterminacy: Subspace
    span: Optional[Subspace] = None
    a: Optional[int] = None
    b: Optional[int] = None


class HomologyAlgebra:
    """A = H(K) with products, kernels of the multiplication maps, lifts and the degree-four data.

    Construction is staged; `compute_homology_algebra` runs every stage in order.
    """

    def __init__(self, complex_: KoszulComplex, max_hdeg: Optional[int] = None):
        self.K = complex_
        self.field = complex_.field
        self.n = complex_.n
        self.max_hdeg = min(self.n, 5) if max_hdeg is None else max_hdeg
        self.bases = {i: homology_basis(complex_, i) for i in range(1, self.max_hdeg + 1)}
        self._classes: Dict[Tuple[int, int, int, int], Vector] = {}
        self._products: Dict[Tuple[int, int], Subspace] = {}
        self.p1: List[TensorFamilyElement] = []
        self.p2: List[TensorFamilyElement] = []
        self.span_a: Optional[Subspace] = None
        self.kernel_phi2: Optional[Subspace] = None
        self.b: Optional[int] = None
        self.b_from_psi: Optional[int] = None
        self.massey: Optional[MasseyResult] = None
        self._accumulated: Optional[Subspace] = None
        self.z: Dict[int, List[KoszulElement]] = {}
        self.z_degrees: Dict[int, List[int]] = {}
        for i, basis in self.bases.items():
            logger.info('a_%d = %d', i, basis.rank)

    # basic queries

    def basis(self, i: int) -> HomologyBasis:
        if i in self.bases:
            return self.bases[i]
        return HomologyBasis(i, [], [], {}, range(0))

    def rank(self, i: int) -> int:
        return self.basis(i).rank

    @property
    def ranks(self) -> Dict[int, int]:
        return {i: self.rank(i) for i in range(1, max(self.max_hdeg, 4) + 1)}

    def class_of(self, cycle: KoszulElement) -> Vector:
        if cycle.hdeg > self.max_hdeg:
            raise CutoffError(f'homology in degree {cycle.hdeg} was not computed (max_hdeg={self.max_hdeg})')
        return class_of(self.K, self.basis(cycle.hdeg), cycle)

    def element(self, i: int, coordinates: Vector) -> KoszulElement:
        """A cycle representing the class with the given coordinates."""
        reps = self.basis(i).representatives
        return self.K.combine(i, ((c, reps[k]) for k, c in coordinates.items()))

    def product_class(self, p: int, a: int, q: int, b: int) -> Vector:
        """Coordinates of [rep_p_a] * [rep_q_b] in A_{p+q}."""
        key = (p, a, q, b)
        result = self._classes.get(key)
        if result is None:
            if p + q > self.max_hdeg or p + q > self.n:
                result = {}
            else:
                u = self.basis(p).representatives[a]
                v = self.basis(q).representatives[b]
                result = self.class_of(self.K.wedge(u, v))
            self._classes[key] = result
        return result

    def product_subspace(self, p: int, q: int) -> Subspace:
        key = (p, q)
        space = self._products.get(key)
        if space is None:
            ambient = self.rank(p + q) if p + q <= self.max_hdeg else 0
            vectors = (self.product_class(p, a, q, b) for a in range(self.rank(p)) for b in range(self.rank(q)))
            space = Subspace.spanned_by(self.field, ambient, vectors)
            self._products[key] = space
        return space

    def q(self, p: int, q: int) -> int:
        return self.product_subspace(p, q).rank

    @property
    def product_ranks(self) -> Dict[str, int]:
        pairs = [(p, q) for p in range(1, 5) for q in range(p, 5) if p + q <= 5]
        return {f'q{p}{q}': self.q(p, q) for p, q in pairs}

    def _tensor_degree(self, k: int, coordinates: Vector) -> int:
        a_k = self.rank(k)
        degrees = {self.basis(1).degrees[c // a_k] + self.basis(k).degrees[c % a_k] for c in coordinates}
        if len(degrees) != 1:
            raise ConsistencyError('kernel element of a multiplication map is not homogeneous')
        return degrees.pop()

    def _tensor_element(self, k: int, coordinates: Vector) -> TensorFamilyElement:
        a1, a_k = self.rank(1), self.rank(k)
        parts = []
        for i in range(a1):
            row = {c % a_k: v for c, v in coordinates.items() if c // a_k == i}
            parts.append(self.element(k, row))
        return TensorFamilyElement(self._tensor_degree(k, coordinates), coordinates, parts)

    def _wedge_sum(self, parts: Sequence[KoszulElement]) -> KoszulElement:
        z1 = self.basis(1).representatives
        hdeg = 1 + (parts[0].hdeg if parts else 1)
        return self.K.combine(hdeg, ((1, self.K.wedge(z1[i], p)) for i, p in enumerate(parts)))

    def _lift(self, target: KoszulElement) -> KoszulElement:
        try:
            lift = self.K.lift_boundary(target)
        except NotABoundaryError as err:
            raise ConsistencyError(f'defining sum of a kernel element is not a boundary: {err}') from None
        if not self.K.add(self.K.apply_differential(lift), target, -1).is_zero():
            raise ConsistencyError('lift does not reproduce its defining sum')
        if not lift.in_maximal_ideal():
            raise ConsistencyError('lift is not in mK')
        return lift

    # stages

    def kernel_phi1(self) -> List[TensorFamilyElement]:
        """Basis of Ker(A_1 (x) A_1 -> A_2), each written as sum_i [z1_i] (x) [p1_si]."""
        a1 = self.rank(1)
        columns = [self.product_class(1, i, 1, k) for i in range(a1) for k in range(a1)]
        kernel = kernel_basis(Matrix.from_columns(self.field, self.rank(2), columns))
        self.p1 = [self._tensor_element(1, vector) for vector in kernel.basis]
        expected = a1 * a1 - self.q(1, 1)
        if len(self.p1) != expected:
            raise ConsistencyError(f'Ker phi1 has rank {len(self.p1)}, expected {expected}')
        logger.info('Ker phi1 has rank %d', len(self.p1))
        return self.p1

    def lift_pi3(self) -> List[KoszulElement]:
        for element in self.p1:
            element.lift = self._lift(self._wedge_sum(element.parts))
        logger.info('lifted %d pi3 elements (%d nonzero)', len(self.p1),
                    sum(1 for e in self.p1 if not e.lift.is_zero()))
        return [e.lift for e in self.p1]

    def kernel_phi2_split(self) -> Tuple[Subspace, List[TensorFamilyElement], int]:
        a1, a2 = self.rank(1), self.rank(2)
        ambient = a1 * a2
        span_vectors = []
        for element in self.p1:
            for j in range(a1):
                vector = {}
                for c, value in element.coordinates.items():
                    i, k = divmod(c, a1)
                    axpy(self.field, vector, value, shifted(self.product_class(1, k, 1, j), i * a2))
                span_vectors.append(vector)
        self.span_a = Subspace.spanned_by(self.field, ambient, span_vectors)
        columns = [self.product_class(1, i, 2, k) for i in range(a1) for k in range(a2)]
        self.kernel_phi2 = kernel_basis(Matrix.from_columns(self.field, self.rank(3), columns))
        if self.kernel_phi2.rank != ambient - self.q(1, 2):
            raise ConsistencyError('rank of Ker phi2 disagrees with a1*a2 - q12')
        try:
            complement = complement_basis(self.span_a, self.kernel_phi2)
        except DimensionMismatchError:
            raise ConsistencyError('SpanA is not contained in Ker phi2') from None
        self.b = a1 * self.q(1, 1) - self.span_a.rank
        self.p2 = [self._tensor_element(2, vector) for vector in complement]
        expected = a1 * a2 - a1 * self.q(1, 1) - self.q(1, 2) + self.b
        if len(self.p2) != expected:
            raise ConsistencyError(f'|B| = {len(self.p2)}, expected {expected}')
        logger.info('rank SpanA = %d, b = %d, |B| = %d', self.span_a.rank, self.b, len(self.p2))
        return self.span_a, self.p2, self.b

    def coker_psi_rank(self) -> int:
        """2*a1*q11 - rank Im psi, psi(x (x) y (x) z) = (xy (x) z, x (x) yz)."""
        a1 = self.rank(1)
        p11 = self.product_subspace(1, 1)
        q11 = p11.rank
        vectors = []
        for x, y, z in product(range(a1), repeat=3):
            vector = {}
            for c, v in p11.coordinates(self.product_class(1, x, 1, y)).items():
                vector[c * a1 + z] = v
            for c, v in p11.coordinates(self.product_class(1, y, 1, z)).items():
                vector[a1 * q11 + x * q11 + c] = v
            vectors.append(vector)
        self.b_from_psi = 2 * a1 * q11 - rank_of_vectors(self.field, vectors, 2 * a1 * q11)
        if self.b is not None and self.b != self.b_from_psi:
            raise ConsistencyError(f'b = {self.b} from SpanA but {self.b_from_psi} from coker psi')
        return self.b_from_psi

    def lift_pi4(self) -> List[KoszulElement]:
        for element in self.p2:
            element.lift = self._lift(self._wedge_sum(element.parts))
        logger.info('lifted %d pi4 elements (%d nonzero)', len(self.p2),
                    sum(1 for e in self.p2 if not e.lift.is_zero()))
        return [e.lift for e in self.p2]

    def _massey_cycle(self, coefficients: Vector) -> KoszulElement:
        """sum_s pi3_s ^ p_s + sum_i z1_i ^ w_i for p_s = sum_k y_sk z1_k and d(w_i) = sum_s p1_si ^ p_s."""
        a1 = self.rank(1)
        z1 = self.basis(1).representatives
        p = {}
        for c, value in coefficients.items():
            s, k = divmod(c, a1)
            p.setdefault(s, []).append((value, z1[k]))
        p = {s: self.K.combine(1, terms) for s, terms in p.items()}
        first = self.K.combine(4, ((1, self.K.wedge(self.p1[s].lift, ps)) for s, ps in p.items()))
        second = []
        for i in range(a1):
            relation = self.K.combine(2, ((1, self.K.wedge(self.p1[s].parts[i], ps)) for s, ps in p.items()))
            if relation.is_zero():
                continue
            second.append((1, self.K.wedge(z1[i], self._lift(relation))))
        return self.K.combine(4, [(1, first)] + second)

    def massey_span(self) -> MasseyResult:
        a1, a2 = self.rank(1), self.rank(2)
        columns = []
        for s, element in enumerate(self.p1):
            for k in range(a1):
                column = {}
                for c, value in element.coordinates.items():
                    i, l = divmod(c, a1)
                    axpy(self.field, column, value, shifted(self.product_class(1, l, 1, k), i * a2))
                columns.append(column)
        solutions = kernel_basis(Matrix.from_columns(self.field, a1 * a2, columns))
        classes = [self.class_of(self._massey_cycle(y)) for y in solutions.basis] if self.rank(4) else []
        span = Subspace.spanned_by(self.field, self.rank(4), classes)
        accumulated = subspace_sum(subspace_sum(self.product_subspace(1, 3), self.product_subspace(2, 2)), span)
        self.massey = MasseyResult({}, Subspace.zero(self.field, self.rank(4)), span, accumulated.rank, self.b)
        self._accumulated = accumulated
        logger.info('constrained Massey span: %d solutions, rank %d, a = %d', solutions.rank, span.rank,
                    accumulated.rank)
        return self.massey

    def choose_z_bases(self) -> None:
        """z1 spans A_1; z2, z3, z4 complete A1A1, A1A2 and A1A3 + A2A2 + span to bases."""
        subspaces = {2: self.product_subspace(1, 1), 3: self.product_subspace(1, 2), 4: self._accumulated}
        self.z[1] = list(self.basis(1).representatives)
        self.z_degrees[1] = list(self.basis(1).degrees)
        for i, sub in subspaces.items():
            basis = self.basis(i)
            chosen = complement_basis(sub, Subspace.full(self.field, basis.rank))
            indices = [min(vector) for vector in chosen]
            self.z[i] = [basis.representatives[k] for k in indices]
            self.z_degrees[i] = [basis.degrees[k] for k in indices]
        for i, elements in self.z.items():
            if not all(e.in_maximal_ideal() for e in elements):
                raise ConsistencyError(f'z{i} element outside mK')

    # Massey triples

    def massey_triple(self, x: Sequence, y: Sequence, z: Sequence,
                      lift_xy: Optional[KoszulElement] = None, lift_yz: Optional[KoszulElement] = None
                      ) -> MasseyResult:
        """<[x],[y],[z]> for classes of A_1 given by coordinates, with its indeterminacy A3[z] + [x]A3."""
        X, Y, Z = (self.element(1, sparse(v, self.field)) for v in (x, y, z))
        xy, yz = self.K.wedge(X, Y), self.K.wedge(Y, Z)
        if self.class_of(xy) or self.class_of(yz):
            raise ProductsNotZeroError('[x][y] and [y][z] must vanish')
        pi_xy = lift_xy if lift_xy is not None else self.K.lift_boundary(xy)
        pi_yz = lift_yz if lift_yz is not None else self.K.lift_boundary(yz)
        cycle = self.K.add(self.K.wedge(pi_xy, Z), self.K.wedge(X, pi_yz))
        representative = self.class_of(cycle)
        reps3 = self.basis(3).representatives
        indeterminacy = Subspace.spanned_by(
            self.field, self.rank(4),
            [self.class_of(self.K.wedge(r, Z)) for r in reps3] + [self.class_of(self.K.wedge(X, r)) for r in reps3])
        return MasseyResult(representative, indeterminacy)

    def exhibit_massey_generators(self) -> List[bool]:
        """Per generator of the constrained span: is it reached by A1A3 + A2A2 + basis-triple Massey classes."""
        a1 = self.rank(1)
        triples = []
        for x, y, z in product(range(a1), repeat=3):
            if self.product_class(1, x, 1, y) or self.product_class(1, y, 1, z):
                continue
            triples.append(self.massey_triple({x: 1}, {y: 1}, {z: 1}).representative)
        reached = subspace_sum(subspace_sum(self.product_subspace(1, 3), self.product_subspace(2, 2)),
                               Subspace.spanned_by(self.field, self.rank(4), triples))
        flags = [reached.contains(g) for g in self.massey.span.basis]
        for k, flag in enumerate(flags):
            if not flag:
                logger.warning('Massey span generator %d is not exhibited by a triple of basis classes', k)
        return flags

    # properties

    def check_graded_commutativity(self) -> bool:
        for p in range(1, self.max_hdeg):
            for q in range(p, self.max_hdeg - p + 1):
                sign = -1 if (p * q) % 2 else 1
                for a in range(self.rank(p)):
                    for b in range(self.rank(q)):
                        left = self.product_class(p, a, q, b)
                        right = linear_combination(self.field, [(sign, self.product_class(q, b, p, a))])
                        if left != right:
                            return False
        return True

    def check_z1z2_vanishing(self) -> bool:
        """Every relation sum beta_ij [z1_i][z1_j] + sum alpha_l [z2_l] = 0 has alpha = 0, and its z1 part lies
        in Ker phi1."""
        a1 = self.rank(1)
        z2_coordinates = [self.class_of(z) for z in self.z[2]]
        columns = [self.product_class(1, i, 1, j) for i in range(a1) for j in range(a1)] + z2_coordinates
        relations = kernel_basis(Matrix.from_columns(self.field, self.rank(2), columns))
        kernel_phi1 = Subspace.spanned_by(self.field, a1 * a1, [e.coordinates for e in self.p1])
        for relation in relations.basis:
            if any(c >= a1 * a1 for c in relation):
                return False
            if not kernel_phi1.contains(relation):
                return False
        return True

    def euler_characteristic(self) -> Optional[int]:
        if self.max_hdeg < self.n:
            return None
        return 1 + sum((-1) ** i * self.rank(i) for i in range(1, self.n + 1) if i in self.bases)


def compute_homology_algebra(complex_: KoszulComplex, max_hdeg: Optional[int] = None) -> HomologyAlgebra:
    algebra = HomologyAlgebra(complex_, max_hdeg)
    for p, q in [(1, 1), (1, 2), (1, 3), (2, 2)]:
        logger.info('q%d%d = %d', p, q, algebra.q(p, q))
    algebra.kernel_phi1()
    algebra.lift_pi3()
    algebra.kernel_phi2_split()
    algebra.coker_psi_rank()
    algebra.lift_pi4()
    algebra.massey_span()
    algebra.choose_z_bases()
    return algebra


def product_subspace(algebra: HomologyAlgebra, i: int, j: int) -> Tuple[Subspace, int]:
    space = algebra.product_subspace(i, j)
    return space, space.rank


def kernel_phi1(algebra: HomologyAlgebra) -> List[TensorFamilyElement]:
    return algebra.kernel_phi1()


def lift_pi3(algebra: HomologyAlgebra) -> List[KoszulElement]:
    return algebra.lift_pi3()


def kernel_phi2_split(algebra: HomologyAlgebra) -> Tuple[Subspace, List[TensorFamilyElement], int]:
    return algebra.kernel_phi2_split()


def coker_psi_rank(algebra: HomologyAlgebra) -> int:
    return algebra.coker_psi_rank()


def lift_pi4(algebra: HomologyAlgebra) -> List[KoszulElement]:
    return algebra.lift_pi4()


def massey_triple(algebra: HomologyAlgebra, x, y, z) -> MasseyResult:
    return algebra.massey_triple(x, y, z)


def massey_span(algebra: HomologyAlgebra) -> MasseyResult:
    return algebra.massey_span()
