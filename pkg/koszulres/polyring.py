"""Polynomial input and the graded quotient ring R = k[x_1..x_n]/I, computed degree by degree.

For a homogeneous ideal the degree-j piece I_j is the span of x_v * I_{j-1} together with the generators of
degree j, so no Groebner basis is needed: every piece is a row reduction over the monomials of degree j.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from pyparsing import Optional as Opt
from pyparsing import ParseException, StringEnd, Suppress, Word, ZeroOrMore, nums, oneOf

from koszulres.errors import CutoffError, RingInputError
from koszulres.exactlin import QQ, Echelon, Field, Vector, axpy

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]


def monomials_of_degree(n: int, degree: int) -> List[Monomial]:
    """Monomials of a degree in graded-lex order: x_1 heaviest first, following the declared variable order."""
    if n == 0:
        return [()] if degree == 0 else []
    if n == 1:
        return [(degree,)]
    result = []
    for first in range(degree, -1, -1):
        for rest in monomials_of_degree(n - 1, degree - first):
            result.append((first,) + rest)
    return result


def format_monomial(monomial: Monomial, names: Sequence[str]) -> str:
    factors = []
    for name, exponent in zip(names, monomial):
        if exponent == 1:
            factors.append(name)
        elif exponent > 1:
            factors.append(f'{name}^{exponent}')
    return '*'.join(factors) if factors else '1'


@dataclass(frozen=True)
class Polynomial:
    nvars: int
    terms: Dict[Monomial, object]
    declared_degree: Optional[int] = None

    def degrees(self):
        return sorted({sum(m) for m in self.terms})

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> Optional[int]:
        degrees = self.degrees()
        return degrees[-1] if degrees else None

    def to_string(self, names: Sequence[str], field: Field = QQ) -> str:
        if not self.terms:
            return '0'
        parts = []
        for monomial in sorted(self.terms, reverse=True):
            text = field.format(self.terms[monomial])
            mono = format_monomial(monomial, names)
            negative = text.startswith('-')
            text = text.lstrip('-')
            term = mono if text == '1' else (text if mono == '1' else f'{text}*{mono}')
            parts.append(('- ' if negative else '+ ') + term)
        joined = ' '.join(parts)
        return joined[2:] if joined.startswith('+ ') else '-' + joined[2:]


class _Term(NamedTuple):
    coefficient: Fraction
    exponents: Monomial


@lru_cache(maxsize=None)
def _grammar(names: Tuple[str, ...]):
    index = {name: i for i, name in enumerate(names)}
    n = len(names)

    natural = Word(nums)
    coefficient = natural + Opt(Suppress('/') + natural)
    coefficient.setParseAction(lambda t: Fraction(int(t[0]), int(t[1]) if len(t) > 1 else 1))

    # oneOf tries longer names first when one name is a prefix of another
    variable = oneOf(list(names))
    factor = variable + Opt(Suppress('^') + natural)

    def factor_action(t):
        exponents = [0] * n
        exponents[index[t[0]]] = int(t[1]) if len(t) > 1 else 1
        return _Term(Fraction(1), tuple(exponents))

    factor.setParseAction(factor_action)
    term = Opt(coefficient + Suppress('*')) + factor + ZeroOrMore(Suppress('*') + factor)

    def term_action(t):
        tokens = list(t)
        value = Fraction(1)
        if isinstance(tokens[0], Fraction):
            value = tokens.pop(0)
        exponents = [0] * n
        for f in tokens:
            exponents = [a + b for a, b in zip(exponents, f.exponents)]
        return _Term(value, tuple(exponents))

    term.setParseAction(term_action)
    sign = oneOf('+ -')
    return Opt(sign) + term + ZeroOrMore(sign + term) + StringEnd()


def _describe_failure(text: str, loc: int, names: Sequence[str]) -> Tuple[str, int]:
    """Message and 0-based position for a parse failure reported at loc."""
    position = loc
    while position < len(text) and text[position].isspace():
        position += 1
    if text[:position].rstrip().endswith('^') or (position < len(text) and text[position] == '^'):
        return 'malformed exponent', position
    if position == len(text):
        return 'unexpected end of polynomial', position
    probe = position
    while probe < len(text) and (text[probe] in '*+-' or text[probe].isspace()):
        probe += 1
    if probe == len(text):
        return 'unexpected end of polynomial', probe
    word = ''
    for ch in text[probe:]:
        if not (ch.isalnum() or ch == '_'):
            break
        word += ch
    if word and word[0].isalpha() and not any(word.startswith(name) for name in names):
        return f'unknown variable "{word}"', probe
    return f'unexpected "{text[position]}"', position


def parse_polynomial(text: str, names: Sequence[str], field: Field = QQ) -> Polynomial:
    if not text.strip():
        raise RingInputError('empty polynomial')
    names = tuple(names)
    try:
        tokens = _grammar(names).parseString(text, parseAll=True)
    except ParseException as err:
        message, position = _describe_failure(text, err.loc, names)
        raise RingInputError(message, column=position + 1) from None
    terms: Dict[Monomial, object] = {}
    sign = 1
    for token in tokens:
        if token in ('+', '-'):
            sign = -1 if token == '-' else 1
            continue
        value = field.reduce(terms.get(token.exponents, 0) + sign * field(token.coefficient))
        if value:
            terms[token.exponents] = value
        else:
            terms.pop(token.exponents, None)
        sign = 1
    return Polynomial(len(names), terms)


@dataclass
class DegreePiece:
    degree: int
    monomials: List[Monomial]
    index: Dict[Monomial, int]
    ideal: Echelon
    basis: List[Monomial]
    basis_index: Dict[Monomial, int]

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass
class RingElement:
    """Element of R as homogeneous components: internal degree -> coordinates in the basis of R_j."""
    components: Dict[int, Vector] = dc_field(default_factory=dict)

    def is_zero(self) -> bool:
        return not any(self.components.values())


class GradedQuotientRing:
    """Standard-graded quotient of a polynomial ring by a homogeneous ideal generated in degrees >= 2."""

    def __init__(self, names: Sequence[str], field: Field, generators: Sequence[Polynomial], cutoff: int,
                 artinian: bool, socle_degree: Optional[int], pieces: List[DegreePiece]):
        self.names = tuple(names)
        self.n = len(self.names)
        self.field = field
        self.generators = list(generators)
        self.cutoff = cutoff
        self.artinian = artinian
        self.socle_degree = socle_degree
        self.pieces = pieces
        self._products: Dict[Tuple[int, int, int, int], Vector] = {}
        self._variable_maps: Dict[Tuple[int, int], List[Vector]] = {}

    def __repr__(self):
        return f'GradedQuotientRing({self.field.name}[{",".join(self.names)}], dims={self.hilbert_series()})'

    def check_degree(self, degree: int) -> None:
        if degree > self.cutoff:
            raise CutoffError(f'degree {degree} exceeds the cutoff {self.cutoff}')

    def dim(self, degree: int) -> int:
        if degree < 0:
            return 0
        if degree > self.cutoff:
            if self.artinian:
                return 0
            self.check_degree(degree)
        return self.pieces[degree].dim

    def hilbert_series(self) -> List[int]:
        top = self.socle_degree if self.artinian else self.cutoff
        return [self.pieces[j].dim for j in range(top + 1)]

    def basis(self, degree: int) -> List[Monomial]:
        if self.dim(degree) == 0:
            return []
        return self.pieces[degree].basis

    def normal_form(self, degree: int, vector: Dict[Monomial, object]) -> Vector:
        """Coordinates in the basis of R_j of a degree-j polynomial given as monomial -> coefficient."""
        if self.artinian and degree > self.socle_degree:
            return {}
        self.check_degree(degree)
        piece = self.pieces[degree]
        row = {piece.index[m]: c for m, c in vector.items() if c}
        row = piece.ideal.reduce(row)
        return {piece.basis_index[piece.monomials[col]]: value for col, value in row.items()}

    def monomial_normal_form(self, monomial: Monomial) -> Vector:
        return self.normal_form(sum(monomial), {monomial: self.field(1)})

    def multiply_basis(self, degree_a: int, a: int, degree_b: int, b: int) -> Vector:
        key = (degree_a, a, degree_b, b) if (degree_a, a) <= (degree_b, b) else (degree_b, b, degree_a, a)
        result = self._products.get(key)
        if result is None:
            ma = self.pieces[degree_a].basis[a]
            mb = self.pieces[degree_b].basis[b]
            result = self.monomial_normal_form(tuple(x + y for x, y in zip(ma, mb)))
            self._products[key] = result
        return result

    def multiply_vectors(self, degree_a: int, u: Vector, degree_b: int, v: Vector) -> Vector:
        result = {}
        if self.artinian and degree_a + degree_b > self.socle_degree:
            return result
        self.check_degree(degree_a + degree_b)
        for a, ca in u.items():
            for b, cb in v.items():
                axpy(self.field, result, ca * cb, self.multiply_basis(degree_a, a, degree_b, b))
        return result

    def variable_map(self, variable: int, degree: int) -> List[Vector]:
        """Images of the basis of R_j under multiplication by x_v, as vectors in R_{j+1}."""
        key = (variable, degree)
        images = self._variable_maps.get(key)
        if images is None:
            unit = [0] * self.n
            unit[variable] = 1
            images = [self.monomial_normal_form(tuple(x + y for x, y in zip(m, unit))) for m in self.basis(degree)]
            self._variable_maps[key] = images
        return images

    def multiply(self, u: RingElement, v: RingElement) -> RingElement:
        result: Dict[int, Vector] = {}
        for du, cu in u.components.items():
            for dv, cv in v.components.items():
                product = self.multiply_vectors(du, cu, dv, cv)
                if product:
                    target = result.setdefault(du + dv, {})
                    axpy(self.field, target, 1, product)
        return RingElement({d: c for d, c in result.items() if c})

    def element(self, polynomial: Polynomial) -> RingElement:
        by_degree: Dict[int, Dict[Monomial, object]] = {}
        for monomial, coefficient in polynomial.terms.items():
            by_degree.setdefault(sum(monomial), {})[monomial] = coefficient
        components = {}
        for degree, part in by_degree.items():
            vector = self.normal_form(degree, part)
            if vector:
                components[degree] = vector
        return RingElement(components)

    def format_vector(self, degree: int, vector: Vector) -> str:
        poly = Polynomial(self.n, {self.basis(degree)[i]: c for i, c in vector.items()})
        return poly.to_string(self.names, self.field)

    def in_ideal(self, polynomial: Polynomial) -> bool:
        return self.element(polynomial).is_zero()


def hilbert_function(ring: GradedQuotientRing, degree: int) -> int:
    return ring.dim(degree)


def _ideal_piece(field: Field, n: int, degree: int, previous: Optional[DegreePiece],
                 generators: Sequence[Polynomial]) -> DegreePiece:
    monomials = monomials_of_degree(n, degree)
    index = {m: i for i, m in enumerate(monomials)}
    echelon = Echelon(field)
    if previous is not None:
        for row in previous.ideal.rows.values():
            for v in range(n):
                shifted_row = {}
                for col, value in row.items():
                    m = list(previous.monomials[col])
                    m[v] += 1
                    shifted_row[index[tuple(m)]] = value
                echelon.insert(shifted_row)
    for generator in generators:
        if generator.degree == degree:
            echelon.insert({index[m]: c for m, c in generator.terms.items()})
    basis = [m for i, m in enumerate(monomials) if i not in echelon.rows]
    return DegreePiece(degree, monomials, index, echelon, basis, {m: i for i, m in enumerate(basis)})


def build_quotient(names: Sequence[str], field: Field, generators: Sequence[Polynomial],
                   cutoff: Optional[int] = None, artinian_search_limit: int = 64) -> GradedQuotientRing:
    """Compute R_j for j = 0..D.

    D is the socle degree plus five when R turns out artinian, otherwise the given cutoff. Without a cutoff,
    degrees are explored up to artinian_search_limit before giving up.
    """
    names = list(names)
    if not names or len(set(names)) != len(names):
        raise RingInputError('variables must be nonempty and distinct')
    n = len(names)
    for k, generator in enumerate(generators):
        if not generator.terms:
            raise RingInputError(f'generator {k + 1} is zero')
        if not generator.is_homogeneous():
            raise RingInputError(f'generator {k + 1} is not homogeneous (degrees {generator.degrees()})')
        if generator.degree < 2:
            raise RingInputError(f'generator {k + 1} has degree {generator.degree} < 2')
    limit = cutoff if cutoff is not None else artinian_search_limit
    pieces: List[DegreePiece] = []
    previous = None
    socle_degree = None
    for degree in range(limit + 1):
        piece = _ideal_piece(field, n, degree, previous, generators)
        pieces.append(piece)
        previous = piece
        logger.debug('dim R_%d = %d', degree, piece.dim)
        if piece.dim == 0:
            socle_degree = degree - 1
            break
    if socle_degree is None and cutoff is None:
        raise CutoffError(f'R_j is nonzero up to degree {limit}; a non-artinian ring needs an explicit cutoff')
    artinian = socle_degree is not None
    if artinian:
        top = socle_degree + 5
        while len(pieces) <= top:
            pieces.append(_ideal_piece(field, n, len(pieces), pieces[-1], generators))
        if any(p.dim for p in pieces[socle_degree + 1:]):
            raise RingInputError('Hilbert function vanished and reappeared')
        cutoff = top
    ring = GradedQuotientRing(names, field, generators, cutoff, artinian, socle_degree, pieces)
    if not artinian:
        logger.warning('non-artinian ring truncated at internal degree %d: ranks are assumed to have stabilized '
                       'below the cutoff', cutoff)
    logger.info('built %r (artinian=%s, cutoff=%d)', ring, artinian, cutoff)
    return ring
