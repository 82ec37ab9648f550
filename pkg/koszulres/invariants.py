"""Closed-form numeric layer: Betti numbers, Golod bound and defect, deviations, Poincare denominator."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from math import comb
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from koszulres.errors import ConsistencyError, RingInputError

logger = logging.getLogger(__name__)

TOP = 5
GORENSTEIN_TABLE = Path(__file__).resolve().parent.parent / 'dataset' / 'gorenstein_codepth4.csv'


@dataclass(frozen=True)
class InvariantInput:
    n: int
    c: int
    ranks: Tuple[int, ...]
    q11: int = 0
    q12: int = 0
    q13: int = 0
    q22: int = 0
    massey_rank: int = 0
    b: int = 0

    def __post_init__(self):
        self.validate()

    def a(self, i: int) -> int:
        return self.ranks[i - 1] if 1 <= i <= len(self.ranks) else 0

    def validate(self) -> None:
        values = (self.n, self.c, self.q11, self.q12, self.q13, self.q22, self.massey_rank, self.b) + tuple(self.ranks)
        if any(v < 0 for v in values):
            raise RingInputError('invariants must be non-negative')
        if self.c > self.n:
            raise RingInputError(f'codepth {self.c} exceeds embedding dimension {self.n}')
        if self.q11 > self.a(2) or self.q12 > self.a(3) or self.massey_rank > self.a(4):
            raise RingInputError('product ranks must not exceed the ranks of the homology they land in')

    @classmethod
    def from_algebra(cls, algebra, depth: Optional[int] = None) -> 'InvariantInput':
        """Engine invariants of a computed homology algebra; codepth is n - depth, depth 0 when artinian."""
        n = algebra.n
        if algebra.K.ring.artinian:
            c = n
        elif depth is not None:
            c = n - depth
        else:
            c = max((i for i in range(1, algebra.max_hdeg + 1) if algebra.rank(i)), default=0)
            logger.warning('no depth declared for a non-artinian ring; using codepth %d from the homology', c)
        ranks = tuple(algebra.rank(i) for i in range(1, 5))
        products = algebra.product_ranks
        return cls(n, c, ranks, products.get('q11', 0), products.get('q12', 0), products.get('q13', 0),
                   products.get('q22', 0), algebra.massey.a, algebra.b)


def betti_formula(inp: InvariantInput) -> List[int]:
    n, a1, a2, a3, a4 = inp.n, inp.a(1), inp.a(2), inp.a(3), inp.a(4)
    q11, q12 = inp.q11, inp.q12
    return [
        1,
        n,
        comb(n, 2) + a1,
        comb(n, 3) + n * a1 + a2 - q11,
        comb(n, 4) + comb(n, 2) * a1 + n * a2 + a3 + a1 ** 2 - (n + 1) * q11 - q12,
        comb(n, 5) + comb(n, 3) * a1 + comb(n, 2) * a2 + n * a3 + a4 + n * a1 ** 2 + 2 * a1 * a2
        - (comb(n + 1, 2) + 2 * a1) * q11 - (n + 1) * q12 + inp.b - inp.massey_rank,
    ]


def golod_bound(n: int, ranks: Sequence[int], N: int = TOP) -> List[int]:
    """b_i = sum_{j=1}^{i-1} a_j b_{i-j-1} + C(n, i), the coefficients of (1+t)^n / (1 - sum a_i t^{i+1})."""
    a = list(ranks)
    bound: List[int] = []
    for i in range(N + 1):
        bound.append(comb(n, i) + sum(a[j - 1] * bound[i - j - 1] for j in range(1, i) if j <= len(a)))
    return bound


def golod_defect(inp: InvariantInput) -> List[int]:
    n, a1, q11, q12 = inp.n, inp.a(1), inp.q11, inp.q12
    defect = [0, 0, 0, q11, (n + 1) * q11 + q12,
              (comb(n + 1, 2) + 2 * a1) * q11 + (n + 1) * q12 + inp.massey_rank - inp.b]
    bound = golod_bound(n, [inp.a(i) for i in range(1, 5)])
    difference = [b - beta for b, beta in zip(bound, betti_formula(inp))]
    if defect != difference:
        raise ConsistencyError(f'defect formula {defect} disagrees with bound minus Betti numbers {difference}')
    return defect


def deviations_formula(inp: InvariantInput) -> List[int]:
    n, a1, a2, a3, a4 = inp.n, inp.a(1), inp.a(2), inp.a(3), inp.a(4)
    q11, q12 = inp.q11, inp.q12
    return [n, a1, a2 - q11, a3 - q12 + comb(a1, 2) - q11,
            a4 + a1 * a2 - a1 * q11 - q12 + inp.b - inp.massey_rank]


def deviations_from_betti(betti: Sequence[int]) -> List[int]:
    """Invert the relations between beta_1..beta_5 and eps_1..eps_5."""
    b1, b2, b3, b4, b5 = betti[1:6] if len(betti) > 5 else betti[:5]
    e1 = b1
    e2 = b2 - comb(e1, 2)
    e3 = b3 - e2 * e1 - comb(e1, 3)
    if min(e1, e2, e3) < 0:
        raise RingInputError(f'inconsistent Betti sequence {list(betti)}: negative deviation')
    e4 = b4 - e3 * e1 - comb(1 + e2, 2) - e2 * comb(e1, 2) - comb(e1, 4)
    e5 = (b5 - e4 * e1 - e3 * e2 - e3 * comb(e1, 2) - e2 ** 2 * e1 + e1 * comb(e2, 2) - e2 * comb(e1, 3)
          - comb(e1, 5))
    if min(e4, e5) < 0:
        raise RingInputError(f'inconsistent Betti sequence {list(betti)}: negative deviation')
    return [e1, e2, e3, e4, e5]


def poincare_denominator(inp: InvariantInput) -> List[int]:
    """d(t) through t^5, where P(t) = (1+t)^n / d(t)."""
    d = [1, 0] + [-inp.a(i) for i in range(1, 5)]
    for k, g in enumerate(gamma(inp)):
        d[k] += g
    return d


def gamma(inp: InvariantInput) -> List[int]:
    return [0, 0, 0, inp.q11, inp.q11 + inp.q12, inp.q12 - inp.b + inp.massey_rank]


def invariants_from_denominator(n: int, c: int, ranks: Sequence[int], d: Sequence[int]) -> Tuple[int, int, int]:
    """(q11, q12, a - b) from the first six coefficients of d(t)."""
    if len(d) < 6 or d[0] != 1 or d[1] != 0:
        raise RingInputError(f'denominator must start 1 + 0*t, got {list(d)[:2]}')
    if c > n:
        raise RingInputError(f'codepth {c} exceeds embedding dimension {n}')
    a = list(ranks) + [0] * (4 - len(ranks))
    g = [d[k] + (a[k - 2] if k >= 2 else 0) for k in range(6)]
    if g[2]:
        raise RingInputError(f'coefficient of t^2 should be -a1 = {-a[0]}, got {d[2]}')
    q11 = g[3]
    q12 = g[4] - q11
    if q11 < 0 or q12 < 0:
        raise RingInputError(f'denominator gives negative product ranks q11={q11}, q12={q12}')
    return q11, q12, g[5] - q12


def codepth3_quotient(inp: InvariantInput) -> List[int]:
    """d(t) / (1+t) through t^5."""
    inverse = np.array([(-1) ** k for k in range(TOP + 1)], dtype=np.int64)
    return [int(v) for v in np.convolve(np.array(poincare_denominator(inp), dtype=np.int64), inverse)[:TOP + 1]]


def codepth3_closed_form(inp: InvariantInput) -> List[int]:
    return [1, -1, -(inp.a(1) - 1), -(inp.a(3) - inp.q11), inp.q12, -inp.b]


def check_codepth3(inp: InvariantInput) -> Optional[bool]:
    """None unless a4 = a = 0 and 1 - a1 + a2 - a3 = 0."""
    if inp.a(4) or inp.massey_rank or 1 - inp.a(1) + inp.a(2) - inp.a(3):
        return None
    return codepth3_quotient(inp) == codepth3_closed_form(inp)


def avramov_b_prime(inp: InvariantInput) -> int:
    return inp.a(1) ** 3 - 2 * inp.a(1) * inp.q11 + inp.b


def gorenstein_codepth4_table(path: Path = GORENSTEIN_TABLE) -> pd.DataFrame:
    return pd.read_csv(path, dtype=str, comment='#').set_index('class')


def _evaluate(expression: str, p: Optional[int]) -> Optional[int]:
    total = 0
    for token in expression.replace(' ', '').split('+'):
        if token == 'p':
            if p is None:
                return None
            total += p
        else:
            total += int(token)
    return total


def matching_gorenstein_classes(inp: InvariantInput, table: Optional[pd.DataFrame] = None) -> List[str]:
    table = gorenstein_codepth4_table() if table is None else table
    observed = {'q11': inp.q11, 'q12': inp.q12, 'q22': inp.q22, 'q13': inp.q13, 'a': inp.massey_rank, 'b': inp.b}
    matches = []
    for name, row in table.iterrows():
        # the parameter p of a symbolic row is read off q11
        p = inp.q11 if row['q11'].strip() == 'p' else None
        if p is not None and p < 1:
            continue
        if all(_evaluate(row[key], p) == value for key, value in observed.items()):
            matches.append(name.replace('p', str(p)) if p is not None else name)
    return matches


@dataclass
class InvariantReport:
    inp: InvariantInput
    betti: List[int] = dc_field(default_factory=list)
    bound: List[int] = dc_field(default_factory=list)
    defect: List[int] = dc_field(default_factory=list)
    deviations: List[int] = dc_field(default_factory=list)
    denominator: List[int] = dc_field(default_factory=list)
    gamma: List[int] = dc_field(default_factory=list)
    b_prime: int = 0
    codepth3_ok: Optional[bool] = None
    gorenstein_classes: List[str] = dc_field(default_factory=list)


def invariant_report(inp: InvariantInput) -> InvariantReport:
    report = InvariantReport(inp)
    report.betti = betti_formula(inp)
    report.bound = golod_bound(inp.n, [inp.a(i) for i in range(1, 5)])
    report.defect = golod_defect(inp)
    report.deviations = deviations_formula(inp)
    if report.deviations != deviations_from_betti(report.betti):
        raise ConsistencyError('deviations from the formulas and from the Betti numbers disagree')
    report.denominator = poincare_denominator(inp)
    report.gamma = gamma(inp)
    recovered = invariants_from_denominator(inp.n, inp.c, inp.ranks, report.denominator)
    if recovered != (inp.q11, inp.q12, inp.massey_rank - inp.b):
        raise ConsistencyError(f'denominator round trip gave {recovered}')
    report.b_prime = avramov_b_prime(inp)
    report.codepth3_ok = check_codepth3(inp)
    if report.codepth3_ok is False:
        raise ConsistencyError('codepth-3 specialization of d(t)/(1+t) fails')
    if inp.c == 4:
        report.gorenstein_classes = matching_gorenstein_classes(inp)
    if any(v < 0 for v in report.defect):
        logger.warning('negative Golod defect %s', report.defect)
    logger.info('Betti numbers %s, defect %s', report.betti, report.defect)
    return report
