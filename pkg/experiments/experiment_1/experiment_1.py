import pandas as pd

from koszulres.cli import load_ring, read_ring_file
from koszulres.homalg import compute_homology_algebra
from koszulres.invariants import InvariantInput, invariant_report
from koszulres.koszul import KoszulComplex

# relevant inputs
ring_file = 'dataset/massey_codepth4.ring'


def compute_invariants():
    ring = load_ring(read_ring_file(ring_file))
    algebra = compute_homology_algebra(KoszulComplex(ring))
    report = invariant_report(InvariantInput.from_algebra(algebra))
    return ring, algebra, report


def write_homology_to_file(ring, algebra):
    df = pd.DataFrame({'a_i': [algebra.rank(i) for i in range(1, 5)]}, index=pd.Index(range(1, 5), name='i'))
    df.to_csv('experiments/experiment_1/results/homology.csv')
    with open('experiments/experiment_1/results/homology.txt', 'w') as f:
        f.write(f'Hilbert function of R: {ring.hilbert_series()}\n')
        f.write(f'ranks of the Koszul homology: {[algebra.rank(i) for i in range(1, 5)]}\n')
        for key, value in algebra.product_ranks.items():
            f.write(f'{key}: {value}\n')
        f.write(f'rank of Ker phi1: {len(algebra.p1)}\n')
        f.write(f'size of B: {len(algebra.p2)}\n')
        f.write(f'a: {algebra.massey.a}\n')
        f.write(f'b: {algebra.b} (from coker psi: {algebra.b_from_psi})\n')


def write_invariants_to_file(report):
    df = pd.DataFrame({'betti': report.betti, 'bound': report.bound, 'defect': report.defect})
    df.index.name = 'i'
    df.to_csv('experiments/experiment_1/results/series.csv')
    with open('experiments/experiment_1/results/invariants.txt', 'w') as f:
        f.write(f'Betti numbers: {report.betti}\n')
        f.write(f'Golod bound: {report.bound}\n')
        f.write(f'Golod defect: {report.defect}\n')
        f.write(f'deviations: {report.deviations}\n')
        f.write(f'Poincare denominator: {report.denominator}\n')
        f.write(f'b\': {report.b_prime}\n')


if __name__ == '__main__':
    ring, algebra, report = compute_invariants()
    write_homology_to_file(ring, algebra)
    write_invariants_to_file(report)
