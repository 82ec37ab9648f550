"""The truncated minimal free resolution F of the residue field, built from Koszul blocks, and its verifiers.

Every F_k is a direct sum of shifted copies K_m(-shift) of Koszul modules. An element of F_k is a dict
summand index -> KoszulElement; the shift only enters when pieces are flattened by internal degree.
Each differential is a list of blocks (row summand <- column summand), either the Koszul differential or the
wedge by a fixed element on the left, with a sign.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Dict, List, Optional, Tuple

from tqdm import tqdm

from koszulres.errors import ConsistencyError, RingInputError
from koszulres.exactlin import (Matrix, Subspace, Vector, axpy, complement_basis, kernel_basis,
                                rank_of_vectors, shifted)
from koszulres.homalg import HomologyAlgebra
from koszulres.koszul import KoszulComplex, KoszulElement, subset_label, subset_order
from koszulres.polyring import GradedQuotientRing

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Summand:
    group: str
    index: Tuple[int, ...]
    koszul_degree: int
    shift: int

    @property
    def label(self) -> str:
        suffix = ','.join(str(k + 1) for k in self.index)
        return f'K{self.koszul_degree}' + (f'[{self.group} {suffix}]' if self.index else '')


@dataclass
class Block:
    row: int
    col: int
    kind: str
    sign: int
    name: str
    element: Optional[KoszulElement] = None


@dataclass
class ResolutionF:
    K: KoszulComplex
    summands: Dict[int, List[Summand]]
    blocks: Dict[int, List[Block]]

    def rank(self, k: int) -> int:
        return sum(comb(self.K.n, s.koszul_degree) for s in self.summands.get(k, []))

    @property
    def ranks(self) -> List[int]:
        return [self.rank(k) for k in range(6)]

    def layout(self, k: int) -> List[Tuple[str, int]]:
        """(group, multiplicity) in order, e.g. [('K5', 1), ('K3 z1', 7), ...]."""
        result: List[Tuple[str, int]] = []
        for summand in self.summands[k]:
            key = f'K{summand.koszul_degree}' + (f' {summand.group}' if summand.group != 'K' else '')
            if result and result[-1][0] == key:
                result[-1] = (key, result[-1][1] + 1)
            else:
                result.append((key, 1))
        return result


@dataclass
class VerificationVerdict:
    complex_ok: Dict[int, bool] = dc_field(default_factory=dict)
    exact_ok: Dict[int, bool] = dc_field(default_factory=dict)
    augmentation_ok: Optional[bool] = None
    minimal_ok: Optional[bool] = None
    betti_match: Optional[bool] = None
    truncated: bool = False
    details: List[str] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        checks = list(self.complex_ok.values()) + list(self.exact_ok.values())
        checks += [self.augmentation_ok, self.minimal_ok]
        if self.betti_match is not None:
            checks.append(self.betti_match)
        return all(c is True for c in checks)


def build_F(H: HomologyAlgebra) -> ResolutionF:
    K = H.K
    z1, z2, z3, z4 = (H.z[i] for i in (1, 2, 3, 4))
    d1, d2, d3, d4 = (H.z_degrees[i] for i in (1, 2, 3, 4))
    p1, p2 = H.p1, H.p2
    summands: Dict[int, List[Summand]] = {k: [] for k in range(6)}
    blocks: Dict[int, List[Block]] = {k: [] for k in range(1, 6)}

    def add(k, group, index, m, shift):
        summands[k].append(Summand(group, index, m, shift))
        return len(summands[k]) - 1

    def koszul(k, row, col, name, sign=1):
        blocks[k].append(Block(row, col, 'koszul', sign, name))

    def wedge(k, row, col, element, name, sign=1):
        blocks[k].append(Block(row, col, 'wedge', sign, name, element))

    f0 = add(0, 'K', (), 0, 0)
    f1 = add(1, 'K', (), 1, 0)
    koszul(1, f0, f1, 'd1:d')

    f2 = add(2, 'K', (), 2, 0)
    f2_z1 = [add(2, 'z1', (i,), 0, d1[i]) for i in range(len(z1))]
    koszul(2, f1, f2, 'd2:d')
    for i, col in enumerate(f2_z1):
        wedge(2, f1, col, z1[i], 'd2:z1^')

    f3 = add(3, 'K', (), 3, 0)
    f3_z1 = [add(3, 'z1', (i,), 1, d1[i]) for i in range(len(z1))]
    f3_z2 = [add(3, 'z2', (l,), 0, d2[l]) for l in range(len(z2))]
    koszul(3, f2, f3, 'd3:d')
    for i, col in enumerate(f3_z1):
        wedge(3, f2, col, z1[i], 'd3:z1^')
        koszul(3, f2_z1[i], col, 'd3:d^a1')
    for l, col in enumerate(f3_z2):
        wedge(3, f2, col, z2[l], 'd3:-z2^', sign=-1)

    f4 = add(4, 'K', (), 4, 0)
    f4_z1 = [add(4, 'z1', (i,), 2, d1[i]) for i in range(len(z1))]
    f4_z2 = [add(4, 'z2', (l,), 1, d2[l]) for l in range(len(z2))]
    f4_z3 = [add(4, 'z3', (t,), 0, d3[t]) for t in range(len(z3))]
    f4_p1 = [add(4, 'p1', (s,), 0, e.degree) for s, e in enumerate(p1)]
    koszul(4, f3, f4, 'd4:d')
    for i, col in enumerate(f4_z1):
        wedge(4, f3, col, z1[i], 'd4:z1^')
        koszul(4, f3_z1[i], col, 'd4:d^a1')
    for l, col in enumerate(f4_z2):
        wedge(4, f3, col, z2[l], 'd4:z2^')
        koszul(4, f3_z2[l], col, 'd4:d^z2')
    for t, col in enumerate(f4_z3):
        wedge(4, f3, col, z3[t], 'd4:z3^')
    for s, col in enumerate(f4_p1):
        wedge(4, f3, col, p1[s].lift, 'd4:-pi3^', sign=-1)
        for i in range(len(z1)):
            wedge(4, f3_z1[i], col, p1[s].parts[i], 'd4:p1^')

    f5 = add(5, 'K', (), 5, 0)
    f5_z1 = [add(5, 'z1', (i,), 3, d1[i]) for i in range(len(z1))]
    f5_z2 = [add(5, 'z2', (l,), 2, d2[l]) for l in range(len(z2))]
    f5_z3 = [add(5, 'z3', (t,), 1, d3[t]) for t in range(len(z3))]
    f5_z4 = [add(5, 'z4', (r,), 0, d4[r]) for r in range(len(z4))]
    f5_p1 = [add(5, 'p1', (s,), 1, e.degree) for s, e in enumerate(p1)]
    f5_p2 = [add(5, 'p2', (u,), 0, e.degree) for u, e in enumerate(p2)]
    f5_gamma = {(l, i): add(5, 'gamma', (l, i), 0, d2[l] + d1[i]) for l in range(len(z2)) for i in range(len(z1))}
    koszul(5, f4, f5, 'd5:d')
    for i, col in enumerate(f5_z1):
        wedge(5, f4, col, z1[i], 'd5:z1^')
        koszul(5, f4_z1[i], col, 'd5:d^a1')
    for l, col in enumerate(f5_z2):
        wedge(5, f4, col, z2[l], 'd5:-z2^', sign=-1)
        koszul(5, f4_z2[l], col, 'd5:d^z2')
    for t, col in enumerate(f5_z3):
        wedge(5, f4, col, z3[t], 'd5:z3^')
        koszul(5, f4_z3[t], col, 'd5:d^z3')
    for r, col in enumerate(f5_z4):
        wedge(5, f4, col, z4[r], 'd5:z4^')
    for s, col in enumerate(f5_p1):
        wedge(5, f4, col, p1[s].lift, 'd5:-pi3^', sign=-1)
        for i in range(len(z1)):
            wedge(5, f4_z1[i], col, p1[s].parts[i], 'd5:p1^')
        koszul(5, f4_p1[s], col, 'd5:d^p1')
    for u, col in enumerate(f5_p2):
        wedge(5, f4, col, p2[u].lift, 'd5:-pi4^', sign=-1)
        for i in range(len(z1)):
            wedge(5, f4_z1[i], col, p2[u].parts[i], 'd5:p2^')
    for (l, i), col in f5_gamma.items():
        wedge(5, f4_z1[i], col, z2[l], 'd5:-z2^gamma', sign=-1)
        wedge(5, f4_z2[l], col, z1[i], 'd5:z1^gamma')

    F = ResolutionF(K, summands, blocks)
    logger.info('built F with ranks %s', F.ranks)
    return F


# applying the differential

def apply_block(F: ResolutionF, block: Block, element: KoszulElement) -> KoszulElement:
    K = F.K
    if block.kind == 'koszul':
        image = K.apply_differential(element)
    else:
        image = K.wedge(block.element, element)
    return K.scale(block.sign, image) if block.sign != 1 else image


def apply_differential(F: ResolutionF, k: int, vector: Dict[int, KoszulElement]) -> Dict[int, KoszulElement]:
    result: Dict[int, KoszulElement] = {}
    for block in F.blocks[k]:
        element = vector.get(block.col)
        if element is None or element.is_zero():
            continue
        image = apply_block(F, block, element)
        if block.row in result:
            result[block.row] = F.K.add(result[block.row], image)
        else:
            result[block.row] = image
    return {row: e for row, e in result.items() if not e.is_zero()}


def _free_generators(F: ResolutionF, k: int):
    """(summand index, subset, element T_S with coefficient 1) for every free generator of F_k."""
    for c, summand in enumerate(F.summands[k]):
        m = summand.koszul_degree
        for s, subset in enumerate(subset_order(F.K.n, m)):
            yield c, subset, F.K.basis_element(m, m, F.K.piece(m, m).index(s, 0))


def verify_complex(F: ResolutionF, verdict: Optional[VerificationVerdict] = None) -> VerificationVerdict:
    """d_{k-1} d_k = 0 on every free generator of F_k; by R-linearity this covers every graded piece."""
    verdict = verdict or VerificationVerdict()
    for k in range(2, 6):
        ok = True
        for c, subset, generator in _free_generators(F, k):
            composite = apply_differential(F, k - 1, apply_differential(F, k, {c: generator}))
            if composite:
                row = min(composite)
                verdict.details.append(
                    f'd{k - 1}.d{k} != 0 on {subset_label(subset)} of {F.summands[k][c].label}, '
                    f'component {F.summands[k - 2][row].label}: {F.K.format(composite[row])}')
                ok = False
                break
        verdict.complex_ok[k - 1] = ok
    logger.info('complex check: %s', verdict.complex_ok)
    return verdict


def verify_minimality(F: ResolutionF, verdict: Optional[VerificationVerdict] = None) -> VerificationVerdict:
    """Every differential maps free generators into mF."""
    verdict = verdict or VerificationVerdict()
    verdict.minimal_ok = True
    for k in range(1, 6):
        for block in F.blocks[k]:
            for subset_index, subset in enumerate(subset_order(F.K.n, F.summands[k][block.col].koszul_degree)):
                m = F.summands[k][block.col].koszul_degree
                generator = F.K.basis_element(m, m, F.K.piece(m, m).index(subset_index, 0))
                image = apply_block(F, block, generator)
                if not image.is_zero() and not image.in_maximal_ideal():
                    verdict.minimal_ok = False
                    verdict.details.append(f'block {block.name} ({F.summands[k - 1][block.row].label} <- '
                                           f'{F.summands[k][block.col].label}) has a unit entry')
                    break
    logger.info('minimality check: %s', verdict.minimal_ok)
    return verdict


# flattening by internal degree

def _ring_top(F: ResolutionF) -> int:
    ring = F.K.ring
    return ring.socle_degree if ring.artinian else ring.cutoff


def graded_dim(F: ResolutionF, k: int, j: int) -> int:
    return sum(F.K.piece(s.koszul_degree, j - s.shift).dim for s in F.summands.get(k, []))


def _offsets(F: ResolutionF, k: int, j: int) -> Tuple[Dict[int, int], int]:
    offsets, total = {}, 0
    for c, s in enumerate(F.summands[k]):
        offsets[c] = total
        total += F.K.piece(s.koszul_degree, j - s.shift).dim
    return offsets, total


def _columns(F: ResolutionF, k: int, j: int) -> Tuple[List[Vector], int]:
    """Images of the basis of (F_k)_j flattened into (F_{k-1})_j."""
    row_offsets, nrows = _offsets(F, k - 1, j)
    by_col: Dict[int, List[Block]] = {}
    for block in F.blocks[k]:
        by_col.setdefault(block.col, []).append(block)
    columns = []
    for c, summand in enumerate(F.summands[k]):
        piece = F.K.piece(summand.koszul_degree, j - summand.shift)
        for col in range(piece.dim):
            basis = F.K.basis_element(summand.koszul_degree, j - summand.shift, col)
            vector: Vector = {}
            for block in by_col.get(c, []):
                image = apply_block(F, block, basis)
                target_degree = j - F.summands[k - 1][block.row].shift
                for degree, coordinates in image.components.items():
                    if degree != target_degree:
                        raise ConsistencyError(f'block {block.name} does not preserve internal degree')
                    axpy(F.K.field, vector, 1, shifted(coordinates, row_offsets[block.row]))
            columns.append(vector)
    return columns, nrows


def _degree_window(F: ResolutionF, ks) -> range:
    """Internal degrees where some F_k (k in ks) is nonzero; capped by the cutoff for non-artinian rings."""
    top = _ring_top(F)
    summands = [s for k in ks for s in F.summands.get(k, [])]
    low = min(s.shift + s.koszul_degree for s in summands)
    high = max(s.shift + s.koszul_degree + top for s in summands)
    if not F.K.ring.artinian:
        high = min(high, min(s.shift + s.koszul_degree for s in summands) + top)
    return range(low, high + 1)


def verify_exactness(F: ResolutionF, verdict: Optional[VerificationVerdict] = None,
                     progress: bool = False) -> VerificationVerdict:
    """rank d_{k+1}|_j + rank d_k|_j = dim (F_k)_j for k = 1..4 and every internal degree j; Im d_1 = m."""
    verdict = verdict or VerificationVerdict()
    ring = F.K.ring
    verdict.truncated = not ring.artinian
    if verdict.truncated:
        logger.warning('non-artinian ring: exactness is verified only in internal degrees within the cutoff')
    ranks: Dict[Tuple[int, int], int] = {}

    def rank_at(k, j):
        if (k, j) not in ranks:
            columns, nrows = _columns(F, k, j)
            ranks[(k, j)] = rank_of_vectors(F.K.field, columns, nrows)
        return ranks[(k, j)]

    verdict.augmentation_ok = True
    for j in _degree_window(F, (0, 1)):
        expected = ring.dim(j) if j >= 1 else 0
        if rank_at(1, j) != expected:
            verdict.augmentation_ok = False
            verdict.details.append(f'Im d1 differs from m in internal degree {j}: rank {rank_at(1, j)}, '
                                   f'dim R_{j} = {expected}')
            break
    for k in range(1, 5):
        verdict.exact_ok[k] = True
        window = _degree_window(F, (k - 1, k, k + 1))
        for j in tqdm(window, desc=f'exactness at F{k}', disable=not progress):
            dim = graded_dim(F, k, j)
            if dim == 0:
                continue
            try:
                homology = dim - rank_at(k + 1, j) - rank_at(k, j)
            except ConsistencyError as err:
                verdict.exact_ok[k] = False
                verdict.details.append(f'internal degree {j}: {err}')
                break
            if homology:
                verdict.exact_ok[k] = False
                verdict.details.append(f'homology of F at degree {k}, internal degree {j}: dimension {homology}')
                break
        logger.info('exactness at F%d: %s', k, verdict.exact_ok[k])
    return verdict


def verify(F: ResolutionF, progress: bool = False) -> VerificationVerdict:
    verdict = VerificationVerdict()
    verify_complex(F, verdict)
    verify_exactness(F, verdict, progress)
    verify_minimality(F, verdict)
    return verdict


# independent Betti numbers

def _free_layout(ring: GradedQuotientRing, shifts: List[int], j: int) -> Tuple[List[int], List[int], int]:
    """Offsets of the summands of (G)_j, the owning generator of every coordinate, and the total dimension."""
    offsets, owners = [], []
    for g, shift in enumerate(shifts):
        offsets.append(len(owners))
        owners.extend([g] * ring.dim(j - shift))
    return offsets, owners, len(owners)


def _split_free(ring: GradedQuotientRing, shifts: List[int], j: int, vector: Vector) -> Dict[int, Vector]:
    offsets, owners, _ = _free_layout(ring, shifts, j)
    parts: Dict[int, Vector] = {}
    for position, value in vector.items():
        g = owners[position]
        parts.setdefault(g, {})[position - offsets[g]] = value
    return parts


def _times_basis(ring: GradedQuotientRing, parts: Dict[int, Vector], shifts: List[int], source_degree: int,
                 offsets: List[int], degree: int, basis_index: int) -> Vector:
    """The element with components `parts` in (G)_source_degree times a basis monomial of R_degree."""
    result: Vector = {}
    for g, coordinates in parts.items():
        coefficient_degree = source_degree - shifts[g]
        for b, value in coordinates.items():
            product = ring.multiply_basis(degree, basis_index, coefficient_degree, b)
            axpy(ring.field, result, value, shifted(product, offsets[g]))
    return result


def _times_variable(ring: GradedQuotientRing, parts: Dict[int, Vector], shifts: List[int], source_degree: int,
                    offsets: List[int], variable: int) -> Vector:
    result: Vector = {}
    for g, coordinates in parts.items():
        images = ring.variable_map(variable, source_degree - shifts[g])
        for b, value in coordinates.items():
            axpy(ring.field, result, value, shifted(images[b], offsets[g]))
    return result


def syzygy_oracle(ring: GradedQuotientRing, N: int = 5, progress: bool = False) -> List[int]:
    """Betti numbers beta_0..beta_N of k over R from an explicit minimal resolution, degree by degree.

    Shares nothing with the Koszul construction beyond the ring itself.
    """
    if not ring.artinian:
        raise RingInputError('the syzygy oracle needs an artinian ring')
    top = ring.socle_degree
    field = ring.field
    # G_0 = R and the augmentation kernel is m
    shifts: List[int] = [0]
    kernels: Dict[int, Subspace] = {j: Subspace.full(field, ring.dim(j)) for j in range(1, top + 1)}
    kernels[0] = Subspace.zero(field, 1)
    betti = [1]
    for stage in tqdm(range(N), desc='syzygy oracle', disable=not progress):
        generators: List[Tuple[int, Vector]] = []
        for j in sorted(kernels):
            kernel = kernels[j]
            if not kernel.rank:
                continue
            multiples: List[Vector] = []
            previous = kernels.get(j - 1)
            if previous is not None and previous.rank:
                offsets, _, _ = _free_layout(ring, shifts, j)
                for vector in previous.basis:
                    parts = _split_free(ring, shifts, j - 1, vector)
                    multiples.extend(_times_variable(ring, parts, shifts, j - 1, offsets, v) for v in range(ring.n))
            decomposable = Subspace.spanned_by(field, kernel.ambient_dim, multiples)
            generators.extend((j, vector) for vector in complement_basis(decomposable, kernel))
        betti.append(len(generators))
        logger.info('oracle: beta_%d = %d', stage + 1, len(generators))
        if stage == N - 1 or not generators:
            break
        new_shifts = [j for j, _ in generators]
        images = [_split_free(ring, shifts, j, vector) for j, vector in generators]
        new_kernels: Dict[int, Subspace] = {}
        for j in range(min(new_shifts), max(new_shifts) + top + 1):
            offsets, _, nrows = _free_layout(ring, shifts, j)
            columns = [_times_basis(ring, images[g], shifts, shift, offsets, j - shift, b)
                       for g, shift in enumerate(new_shifts) for b in range(ring.dim(j - shift))]
            new_kernels[j] = kernel_basis(Matrix.from_columns(field, nrows, columns))
        shifts, kernels = new_shifts, new_kernels
    betti.extend([0] * (N + 1 - len(betti)))
    return betti


# fault injection

SEEDED_MUTATIONS = ('d3:-z2^', 'd4:z1^', 'd4:p1^', 'd5:-z2^gamma', 'd5:p1^')


def flip_block_sign(F: ResolutionF, name: str) -> ResolutionF:
    """Negate every block carrying the given name."""
    k = int(name[1])
    if not any(b.name == name for b in F.blocks.get(k, [])):
        raise KeyError(f'no block named {name}')
    blocks = dict(F.blocks)
    blocks[k] = [Block(b.row, b.col, b.kind, -b.sign if b.name == name else b.sign, b.name, b.element)
                 for b in F.blocks[k]]
    return ResolutionF(F.K, F.summands, blocks)


def drop_summand(F: ResolutionF, k: int, group: str) -> ResolutionF:
    """Delete every summand of a group from F_k together with the blocks touching it."""
    keep = [c for c, s in enumerate(F.summands[k]) if s.group != group]
    renumber = {old: new for new, old in enumerate(keep)}
    summands = dict(F.summands)
    summands[k] = [F.summands[k][c] for c in keep]
    blocks = dict(F.blocks)
    blocks[k] = [Block(b.row, renumber[b.col], b.kind, b.sign, b.name, b.element)
                 for b in F.blocks[k] if b.col in renumber]
    if k + 1 in F.blocks:
        blocks[k + 1] = [Block(renumber[b.row], b.col, b.kind, b.sign, b.name, b.element)
                         for b in F.blocks[k + 1] if b.row in renumber]
    return ResolutionF(F.K, summands, blocks)


def add_unit_entry(F: ResolutionF, k: int) -> ResolutionF:
    """Add an identity block F_k -> F_{k-1} between summands of equal Koszul degree, equal shifts first."""
    pairs = [(c, r) for c, source in enumerate(F.summands[k]) for r, target in enumerate(F.summands[k - 1])
             if source.koszul_degree == target.koszul_degree]
    if not pairs:
        raise KeyError(f'no pair of summands with equal Koszul degree in d{k}')
    pairs.sort(key=lambda p: F.summands[k][p[0]].shift != F.summands[k - 1][p[1]].shift)
    c, r = pairs[0]
    unit = KoszulElement(0, {0: {0: F.K.field(1)}})
    blocks = dict(F.blocks)
    blocks[k] = F.blocks[k] + [Block(r, c, 'wedge', 1, f'd{k}:unit', unit)]
    return ResolutionF(F.K, F.summands, blocks)


FAULTS = SEEDED_MUTATIONS + ('drop-gamma', 'unit-d4')


def inject_fault(F: ResolutionF, name: str) -> ResolutionF:
    if name in SEEDED_MUTATIONS:
        return flip_block_sign(F, name)
    if name == 'drop-gamma':
        return drop_summand(F, 5, 'gamma')
    if name.startswith('unit-d'):
        return add_unit_entry(F, int(name[len('unit-d'):]))
    raise KeyError(f'unknown fault {name}')
