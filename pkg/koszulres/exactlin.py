"""Exact field arithmetic and deterministic linear algebra.

Vectors are sparse: a dict mapping coordinate index to a nonzero scalar. Every echelon form produced here
is the unique reduced row-echelon form, so the sparse storage gives the same result as dense elimination
with leftmost-pivot, first-nonzero-row selection.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from koszulres.errors import DimensionMismatchError, RingInputError

logger = logging.getLogger(__name__)

Scalar = Union[Fraction, int]
Vector = Dict[int, Scalar]


@dataclass(frozen=True)
class RationalField:
    name: str = 'QQ'
    characteristic: int = 0

    def __call__(self, value) -> Fraction:
        return Fraction(value)

    def reduce(self, value):
        return value

    def inv(self, value):
        return 1 / Fraction(value)

    def format(self, value) -> str:
        return str(Fraction(value))


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if self.p < 2 or any(self.p % d == 0 for d in range(2, int(self.p ** 0.5) + 1)):
            raise RingInputError(f'GF({self.p}): {self.p} is not a prime')
        if self.p >= 2 ** 31:
            raise RingInputError(f'GF({self.p}): primes must be below 2^31')

    @property
    def name(self) -> str:
        return f'GF({self.p})'

    @property
    def characteristic(self) -> int:
        return self.p

    def __call__(self, value) -> int:
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise RingInputError(f'denominator {value.denominator} vanishes in {self.name}')
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        return int(value) % self.p

    def reduce(self, value):
        return value % self.p

    def inv(self, value):
        return pow(value, -1, self.p)

    def format(self, value) -> str:
        return str(value)


QQ = RationalField()
Field = Union[RationalField, PrimeField]


def parse_field(text: str) -> Field:
    text = text.strip()
    if text in ('QQ', 'Q'):
        return QQ
    match = re.fullmatch(r'GF\(\s*(\d+)\s*\)', text)
    if match is None:
        raise RingInputError(f'unknown field "{text}", expected QQ or GF(p)')
    return PrimeField(int(match.group(1)))


# sparse vector helpers

def axpy(field: Field, target: Vector, coefficient, source: Vector) -> None:
    """target += coefficient * source, in place, dropping zeros."""
    for col, value in source.items():
        new = field.reduce(target.get(col, 0) + coefficient * value)
        if new:
            target[col] = new
        else:
            target.pop(col, None)


def scaled(field: Field, coefficient, vector: Vector) -> Vector:
    if not coefficient:
        return {}
    return {col: field.reduce(coefficient * value) for col, value in vector.items()}


def linear_combination(field: Field, terms: Iterable[Tuple[Scalar, Vector]]) -> Vector:
    result = {}
    for coefficient, vector in terms:
        if coefficient:
            axpy(field, result, coefficient, vector)
    return result


def shifted(vector: Vector, offset: int) -> Vector:
    return {col + offset: value for col, value in vector.items()}


def dense(vector: Vector, length: int, field: Field) -> List[Scalar]:
    return [vector.get(i, field(0)) for i in range(length)]


def sparse(values: Union[Sequence, Vector], field: Field) -> Vector:
    if isinstance(values, dict):
        return {i: field(v) for i, v in values.items() if v}
    return {i: field(v) for i, v in enumerate(values) if v}


@dataclass(frozen=True)
class Matrix:
    field: Field
    nrows: int
    ncols: int
    rows: Tuple[Vector, ...]

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], ncols: Optional[int] = None) -> 'Matrix':
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(row) != ncols for row in rows):
            raise DimensionMismatchError('ragged matrix rows')
        return cls(field, len(rows), ncols, tuple(sparse(row, field) for row in rows))

    @classmethod
    def from_columns(cls, field: Field, nrows: int, columns: Sequence[Vector]) -> 'Matrix':
        rows = [dict() for _ in range(nrows)]
        for c, column in enumerate(columns):
            for r, value in column.items():
                rows[r][c] = value
        return cls(field, nrows, len(columns), tuple(rows))

    @classmethod
    def identity(cls, field: Field, size: int) -> 'Matrix':
        return cls(field, size, size, tuple({i: field(1)} for i in range(size)))

    def to_rows(self) -> List[List[Scalar]]:
        return [dense(row, self.ncols, self.field) for row in self.rows]

    def columns(self) -> List[Vector]:
        columns = [dict() for _ in range(self.ncols)]
        for r, row in enumerate(self.rows):
            for c, value in row.items():
                columns[c][r] = value
        return columns

    def apply(self, vector: Vector) -> Vector:
        result = {}
        for r, row in enumerate(self.rows):
            total = self.field.reduce(sum((value * vector[c] for c, value in row.items() if c in vector), 0))
            if total:
                result[r] = total
        return result

    def __matmul__(self, other: 'Matrix') -> 'Matrix':
        if self.ncols != other.nrows:
            raise DimensionMismatchError(f'cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}')
        rows = []
        for row in self.rows:
            rows.append(linear_combination(self.field, ((value, other.rows[c]) for c, value in row.items())))
        return Matrix(self.field, self.nrows, other.ncols, tuple(rows))

    def is_zero(self) -> bool:
        return not any(self.rows)


@dataclass(frozen=True)
class Subspace:
    field: Field
    ambient_dim: int
    basis: Tuple[Vector, ...]
    pivot_cols: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @classmethod
    def zero(cls, field: Field, ambient_dim: int) -> 'Subspace':
        return cls(field, ambient_dim, (), ())

    @classmethod
    def full(cls, field: Field, ambient_dim: int) -> 'Subspace':
        return cls(field, ambient_dim, tuple({i: field(1)} for i in range(ambient_dim)), tuple(range(ambient_dim)))

    @classmethod
    def spanned_by(cls, field: Field, ambient_dim: int, vectors: Iterable[Vector]) -> 'Subspace':
        echelon = Echelon(field)
        for vector in vectors:
            echelon.insert(vector)
        return echelon.subspace(ambient_dim)

    def contains(self, vector: Vector) -> bool:
        echelon = Echelon.from_subspace(self)
        return not echelon.reduce(vector)

    def coordinates(self, vector: Vector) -> Vector:
        """Coefficients of a member vector with respect to the echelon basis."""
        return {k: vector[p] for k, p in enumerate(self.pivot_cols) if p in vector}


class Echelon:
    """Incrementally maintained reduced row-echelon basis."""

    def __init__(self, field: Field):
        self.field = field
        self.rows: Dict[int, Vector] = {}

    @classmethod
    def from_subspace(cls, space: Subspace) -> 'Echelon':
        echelon = cls(space.field)
        for pivot, row in zip(space.pivot_cols, space.basis):
            echelon.rows[pivot] = row
        return echelon

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vector: Vector) -> Vector:
        result = dict(vector)
        # reduced rows are zero on every other pivot column, so one pass suffices
        for pivot in [c for c in vector if c in self.rows]:
            coefficient = result.get(pivot)
            if coefficient:
                axpy(self.field, result, -coefficient, self.rows[pivot])
        return result

    def insert(self, vector: Vector) -> bool:
        remainder = self.reduce(vector)
        if not remainder:
            return False
        lead = min(remainder)
        remainder = scaled(self.field, self.field.inv(remainder[lead]), remainder)
        for row in self.rows.values():
            coefficient = row.get(lead)
            if coefficient:
                axpy(self.field, row, -coefficient, remainder)
        self.rows[lead] = remainder
        return True

    def subspace(self, ambient_dim: int) -> Subspace:
        pivots = tuple(sorted(self.rows))
        return Subspace(self.field, ambient_dim, tuple(self.rows[p] for p in pivots), pivots)


def rref(m: Matrix) -> Tuple[Matrix, Tuple[int, ...]]:
    echelon = Echelon(m.field)
    for row in m.rows:
        echelon.insert(row)
    space = echelon.subspace(m.ncols)
    return Matrix(m.field, space.rank, m.ncols, space.basis), space.pivot_cols


def kernel_basis(m: Matrix) -> Subspace:
    reduced, pivots = rref(m)
    pivot_set = set(pivots)
    vectors = []
    for free in range(m.ncols):
        if free in pivot_set:
            continue
        vector = {free: m.field(1)}
        for pivot, row in zip(pivots, reduced.rows):
            if free in row:
                vector[pivot] = m.field.reduce(-row[free])
        vectors.append(vector)
    return Subspace.spanned_by(m.field, m.ncols, vectors)


class LinearSolver:
    """Solves m·x = b for many right-hand sides.

    Row reduces [m | I]; rows with a pivot inside m give the transformation to the rref, the remaining rows
    are the consistency conditions. The particular solution is zero on every non-pivot coordinate.
    """

    def __init__(self, m: Matrix):
        self.m = m
        echelon = Echelon(m.field)
        for r, row in enumerate(m.rows):
            augmented = dict(row)
            augmented[m.ncols + r] = m.field(1)
            echelon.insert(augmented)
        self.transforms: List[Tuple[int, Vector]] = []
        self.conditions: List[Vector] = []
        for pivot in sorted(echelon.rows):
            row = echelon.rows[pivot]
            left = {c - m.ncols: v for c, v in row.items() if c >= m.ncols}
            if pivot < m.ncols:
                self.transforms.append((pivot, left))
            else:
                self.conditions.append(left)

    @property
    def rank(self) -> int:
        return len(self.transforms)

    def _dot(self, u: Vector, v: Vector):
        if len(u) > len(v):
            u, v = v, u
        return self.m.field.reduce(sum((value * v[i] for i, value in u.items() if i in v), 0))

    def solve(self, rhs: Vector) -> Optional[Vector]:
        for condition in self.conditions:
            if self._dot(condition, rhs):
                return None
        solution = {}
        for pivot, transform in self.transforms:
            value = self._dot(transform, rhs)
            if value:
                solution[pivot] = value
        return solution


def solve(m: Matrix, rhs: Sequence) -> Optional[List[Scalar]]:
    if len(rhs) != m.nrows:
        raise DimensionMismatchError(f'right-hand side has length {len(rhs)}, matrix has {m.nrows} rows')
    solution = LinearSolver(m).solve(sparse(rhs, m.field))
    if solution is None:
        return None
    return dense(solution, m.ncols, m.field)


def _check_ambient(u: Subspace, v: Subspace) -> None:
    if u.ambient_dim != v.ambient_dim:
        raise DimensionMismatchError(f'ambient dimensions differ: {u.ambient_dim} and {v.ambient_dim}')


def complement_basis(sub: Subspace, within: Subspace) -> List[Vector]:
    _check_ambient(sub, within)
    echelon = Echelon.from_subspace(within)
    for vector in sub.basis:
        if echelon.reduce(vector):
            raise DimensionMismatchError('subspace is not contained in the enclosing space')
    echelon = Echelon.from_subspace(sub)
    chosen = []
    for vector in within.basis:
        if echelon.insert(vector):
            chosen.append(dict(vector))
    return chosen


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    _check_ambient(u, v)
    echelon = Echelon.from_subspace(u)
    for vector in v.basis:
        echelon.insert(vector)
    return echelon.subspace(u.ambient_dim)


def subspace_contains(u: Subspace, vector: Vector) -> bool:
    if vector and max(vector) >= u.ambient_dim:
        raise DimensionMismatchError(f'vector does not live in dimension {u.ambient_dim}')
    return u.contains(vector)


def intersect(u: Subspace, v: Subspace) -> Subspace:
    _check_ambient(u, v)
    field = u.field
    columns = list(u.basis) + [scaled(field, -1, vector) for vector in v.basis]
    relations = kernel_basis(Matrix.from_columns(field, u.ambient_dim, columns))
    vectors = []
    for relation in relations.basis:
        vectors.append(linear_combination(field, ((c, u.basis[k]) for k, c in relation.items() if k < u.rank)))
    return Subspace.spanned_by(field, u.ambient_dim, vectors)


def _rank_mod_p(columns: Sequence[Vector], nrows: int, p: int) -> int:
    a = np.zeros((len(columns), nrows), dtype=np.int64)
    for r, column in enumerate(columns):
        for c, value in column.items():
            a[r, c] = value
    rank = 0
    for c in range(nrows):
        candidates = np.nonzero(a[rank:, c])[0]
        if candidates.size == 0:
            continue
        pivot = rank + candidates[0]
        if pivot != rank:
            a[[rank, pivot], :] = a[[pivot, rank], :]
        a[rank] = a[rank] * pow(int(a[rank, c]), -1, p) % p
        below = a[rank + 1:, c].copy()
        a[rank + 1:] = (a[rank + 1:] - np.outer(below, a[rank])) % p
        rank += 1
        if rank == a.shape[0]:
            break
    return rank


def rank_of_vectors(field: Field, vectors: Sequence[Vector], ambient_dim: int) -> int:
    """Rank of a family of vectors; dense numpy elimination over GF(p), semi-echelon insertion over QQ."""
    vectors = [v for v in vectors if v]
    if not vectors:
        return 0
    if isinstance(field, PrimeField):
        return _rank_mod_p(vectors, ambient_dim, field.p)
    leads: Dict[int, Vector] = {}
    for vector in vectors:
        remainder = dict(vector)
        while remainder:
            lead = min(remainder)
            row = leads.get(lead)
            if row is None:
                leads[lead] = scaled(field, field.inv(remainder[lead]), remainder)
                break
            axpy(field, remainder, -remainder[lead], row)
    return len(leads)


def rank(m: Matrix) -> int:
    return rank_of_vectors(m.field, m.rows, m.ncols)
