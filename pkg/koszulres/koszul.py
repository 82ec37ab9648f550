"""The Koszul complex K = exterior algebra on R^n, one finite-dimensional piece K_{i,j} at a time.

K_{i,j} is spanned by m*T_S with |S| = i and m a basis monomial of R_{j-i}; internal degree j is preserved by
the differential d(T_S) = sum_k (-1)^k x_{S_k} T_{S - S_k} (k counted from 0).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

from koszulres.errors import ConsistencyError, NotABoundaryError
from koszulres.exactlin import LinearSolver, Matrix, Subspace, Vector, axpy, kernel_basis
from koszulres.polyring import GradedQuotientRing, Polynomial, parse_polynomial

logger = logging.getLogger(__name__)

ExteriorIndex = Tuple[int, ...]


@lru_cache(maxsize=None)
def subset_order(n: int, i: int) -> Tuple[ExteriorIndex, ...]:
    """i-subsets of {0..n-1} in colex order: for n=4, i=2 this is 12,13,23,14,24,34."""
    return tuple(sorted(combinations(range(n), i), key=lambda s: tuple(reversed(s))))


@lru_cache(maxsize=None)
def merge_subsets(s: ExteriorIndex, t: ExteriorIndex) -> Optional[Tuple[int, ExteriorIndex]]:
    """(sign, S u T) with T_S ^ T_T = sign * T_{S u T}, or None when the subsets meet."""
    if set(s) & set(t):
        return None
    inversions = sum(1 for a in s for b in t if a > b)
    return (-1 if inversions % 2 else 1), tuple(sorted(s + t))


def subset_label(subset: ExteriorIndex) -> str:
    return 'T' + ''.join(str(k + 1) for k in subset) if subset else '1'


@dataclass(frozen=True)
class KoszulPiece:
    hdeg: int
    degree: int
    subsets: Tuple[ExteriorIndex, ...]
    ring_dim: int

    @property
    def ring_degree(self) -> int:
        return self.degree - self.hdeg

    @property
    def dim(self) -> int:
        return len(self.subsets) * self.ring_dim

    def index(self, subset_index: int, basis_index: int) -> int:
        return subset_index * self.ring_dim + basis_index

    def split(self, col: int) -> Tuple[int, int]:
        return divmod(col, self.ring_dim)


@dataclass
class KoszulElement:
    """Element of K_i stored per internal degree: j -> coordinates in the piece K_{i,j}."""
    hdeg: int
    components: Dict[int, Vector] = dc_field(default_factory=dict)

    def is_zero(self) -> bool:
        return not any(self.components.values())

    def degrees(self) -> List[int]:
        return sorted(j for j, c in self.components.items() if c)

    def in_maximal_ideal(self) -> bool:
        """True when no coefficient has a constant term, i.e. the element lies in mK."""
        return not self.components.get(self.hdeg)


class KoszulComplex:
    def __init__(self, ring: GradedQuotientRing):
        self.ring = ring
        self.field = ring.field
        self.n = ring.n
        self._pieces: Dict[Tuple[int, int], KoszulPiece] = {}
        self._differentials: Dict[Tuple[int, int], Matrix] = {}
        self._cycles: Dict[Tuple[int, int], Subspace] = {}
        self._boundaries: Dict[Tuple[int, int], Subspace] = {}
        self._solvers: Dict[Tuple[int, int], LinearSolver] = {}

    def piece(self, i: int, j: int) -> KoszulPiece:
        key = (i, j)
        piece = self._pieces.get(key)
        if piece is None:
            subsets = subset_order(self.n, i) if 0 <= i <= self.n else ()
            piece = KoszulPiece(i, j, subsets, self.ring.dim(j - i) if subsets else 0)
            self._pieces[key] = piece
        return piece

    def degree_range(self, i: int) -> range:
        """Internal degrees j with K_{i,j} possibly nonzero and computable."""
        top = self.ring.socle_degree if self.ring.artinian else self.ring.cutoff
        return range(i, i + top + 1)

    # differential

    def differential_column(self, i: int, j: int, col: int) -> Vector:
        piece = self.piece(i, j)
        target = self.piece(i - 1, j)
        s, b = piece.split(col)
        subset = piece.subsets[s]
        result = {}
        for k, variable in enumerate(subset):
            image = self.ring.variable_map(variable, piece.ring_degree)[b]
            if not image:
                continue
            t = subset_order(self.n, i - 1).index(subset[:k] + subset[k + 1:])
            sign = -1 if k % 2 else 1
            for c, value in image.items():
                axpy(self.field, result, sign * value, {target.index(t, c): 1})
        return result

    def differential(self, i: int, j: int) -> Matrix:
        """Matrix of d_i restricted to internal degree j, K_{i,j} -> K_{i-1,j}."""
        key = (i, j)
        matrix = self._differentials.get(key)
        if matrix is None:
            piece = self.piece(i, j)
            target = self.piece(i - 1, j)
            columns = [self.differential_column(i, j, col) for col in range(piece.dim)] if i >= 1 else []
            if i < 1:
                columns = [{} for _ in range(piece.dim)]
            matrix = Matrix.from_columns(self.field, target.dim, columns)
            self._differentials[key] = matrix
        return matrix

    def apply_differential(self, element: KoszulElement) -> KoszulElement:
        result = KoszulElement(element.hdeg - 1)
        if element.hdeg < 1:
            return result
        for j, vector in element.components.items():
            image = {}
            for col, value in vector.items():
                axpy(self.field, image, value, self.differential_column(element.hdeg, j, col))
            if image:
                result.components[j] = image
        return result

    def cycle_space(self, i: int, j: int) -> Subspace:
        key = (i, j)
        space = self._cycles.get(key)
        if space is None:
            if i == 0:
                space = Subspace.full(self.field, self.piece(0, j).dim)
            else:
                space = kernel_basis(self.differential(i, j))
            self._cycles[key] = space
        return space

    def boundary_space(self, i: int, j: int) -> Subspace:
        key = (i, j)
        space = self._boundaries.get(key)
        if space is None:
            columns = self.differential(i + 1, j).columns() if i + 1 <= self.n else []
            space = Subspace.spanned_by(self.field, self.piece(i, j).dim, columns)
            self._boundaries[key] = space
        return space

    def solver(self, i: int, j: int) -> LinearSolver:
        key = (i, j)
        solver = self._solvers.get(key)
        if solver is None:
            solver = LinearSolver(self.differential(i, j))
            self._solvers[key] = solver
        return solver

    def lift_boundary(self, target: KoszulElement) -> KoszulElement:
        """The deterministic preimage of a boundary under d, one internal degree at a time."""
        i = target.hdeg + 1
        result = KoszulElement(i)
        for j, vector in sorted(target.components.items()):
            if not vector:
                continue
            if i > self.n:
                raise NotABoundaryError(f'nonzero element of K_{target.hdeg} has no preimage in K_{i} = 0')
            solution = self.solver(i, j).solve(vector)
            if solution is None:
                raise NotABoundaryError(f'element of K_{{{target.hdeg},{j}}} is not a boundary')
            if solution:
                result.components[j] = solution
        return result

    # algebra

    def zero(self, hdeg: int) -> KoszulElement:
        return KoszulElement(hdeg)

    def combine(self, hdeg: int, terms: Iterable[Tuple[object, KoszulElement]]) -> KoszulElement:
        result = KoszulElement(hdeg)
        for coefficient, element in terms:
            if not coefficient:
                continue
            if element.hdeg != hdeg and not element.is_zero():
                raise ConsistencyError(f'cannot add an element of K_{element.hdeg} to K_{hdeg}')
            for j, vector in element.components.items():
                target = result.components.setdefault(j, {})
                axpy(self.field, target, coefficient, vector)
        result.components = {j: v for j, v in result.components.items() if v}
        return result

    def add(self, u: KoszulElement, v: KoszulElement, coefficient=1) -> KoszulElement:
        return self.combine(u.hdeg, [(1, u), (coefficient, v)])

    def scale(self, coefficient, u: KoszulElement) -> KoszulElement:
        return self.combine(u.hdeg, [(coefficient, u)])

    def basis_element(self, i: int, j: int, col: int) -> KoszulElement:
        return KoszulElement(i, {j: {col: self.field(1)}})

    def wedge(self, u: KoszulElement, v: KoszulElement) -> KoszulElement:
        hdeg = u.hdeg + v.hdeg
        result = KoszulElement(hdeg)
        if hdeg > self.n:
            return result
        for ju, cu in u.components.items():
            pu = self.piece(u.hdeg, ju)
            for jv, cv in v.components.items():
                pv = self.piece(v.hdeg, jv)
                target = self.piece(hdeg, ju + jv)
                if self.ring.artinian and target.ring_degree > self.ring.socle_degree:
                    continue
                self.ring.check_degree(target.ring_degree)
                acc = result.components.setdefault(ju + jv, {})
                for a, ca in cu.items():
                    s, b = pu.split(a)
                    for c, cc in cv.items():
                        t, d = pv.split(c)
                        merged = merge_subsets(pu.subsets[s], pv.subsets[t])
                        if merged is None:
                            continue
                        sign, union = merged
                        product = self.ring.multiply_basis(pu.ring_degree, b, pv.ring_degree, d)
                        if not product:
                            continue
                        u_index = subset_order(self.n, hdeg).index(union)
                        axpy(self.field, acc, sign * ca * cc,
                             {target.index(u_index, e): value for e, value in product.items()})
        result.components = {j: c for j, c in result.components.items() if c}
        return result

    # input and display

    def from_polynomials(self, hdeg: int, mapping: Mapping[Tuple[int, ...], Union[str, Polynomial]]) -> KoszulElement:
        """Element sum p_S T_S from 1-based subsets S and polynomial coefficients p_S."""
        order = subset_order(self.n, hdeg)
        terms = []
        for subset, poly in mapping.items():
            if isinstance(poly, str):
                poly = parse_polynomial(poly, self.ring.names, self.field)
            s = order.index(tuple(sorted(k - 1 for k in subset)))
            for degree, vector in self.ring.element(poly).components.items():
                j = degree + hdeg
                piece = self.piece(hdeg, j)
                terms.append((1, KoszulElement(hdeg, {j: {piece.index(s, b): c for b, c in vector.items()}})))
        return self.combine(hdeg, terms)

    def format(self, element: KoszulElement) -> str:
        if element.is_zero():
            return '0'
        coefficients: Dict[ExteriorIndex, Dict[Tuple[int, ...], object]] = {}
        for j, vector in element.components.items():
            piece = self.piece(element.hdeg, j)
            for col, value in vector.items():
                s, b = piece.split(col)
                monomial = self.ring.basis(piece.ring_degree)[b]
                coefficients.setdefault(piece.subsets[s], {})[monomial] = value
        parts = []
        for subset in subset_order(self.n, element.hdeg):
            if subset not in coefficients:
                continue
            text = Polynomial(self.n, coefficients[subset]).to_string(self.ring.names, self.field)
            if len(coefficients[subset]) > 1:
                text = f'({text})'
            label = subset_label(subset)
            if label == '1':
                parts.append(text)
            elif text in ('1', '-1'):
                parts.append(label if text == '1' else '-' + label)
            else:
                parts.append(f'{text}*{label}')
        return ' + '.join(parts).replace('+ -', '- ')


def koszul_differential(complex_: KoszulComplex, i: int, j: int) -> Matrix:
    return complex_.differential(i, j)


def wedge(complex_: KoszulComplex, u: KoszulElement, v: KoszulElement) -> KoszulElement:
    return complex_.wedge(u, v)


def cycle_space(complex_: KoszulComplex, i: int, j: int) -> Subspace:
    return complex_.cycle_space(i, j)


def boundary_space(complex_: KoszulComplex, i: int, j: int) -> Subspace:
    return complex_.boundary_space(i, j)


def lift_boundary(complex_: KoszulComplex, target: KoszulElement) -> KoszulElement:
    return complex_.lift_boundary(target)


def piece_dimension(complex_: KoszulComplex, i: int, j: int) -> int:
    """C(n, i) * dim R_{j-i}."""
    return comb(complex_.n, i) * complex_.ring.dim(j - i) if 0 <= i <= complex_.n else 0


def check_derivation(complex_: KoszulComplex, u: KoszulElement, v: KoszulElement) -> bool:
    """d(u ^ v) == du ^ v + (-1)^|u| u ^ dv."""
    left = complex_.apply_differential(complex_.wedge(u, v))
    sign = -1 if u.hdeg % 2 else 1
    right = complex_.combine(left.hdeg, [(1, complex_.wedge(complex_.apply_differential(u), v)),
                                         (sign, complex_.wedge(u, complex_.apply_differential(v)))])
    return complex_.add(left, right, -1).is_zero()
