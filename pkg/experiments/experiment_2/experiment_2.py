import pandas as pd

from koszulres.cli import load_ring, read_ring_file
from koszulres.homalg import compute_homology_algebra
from koszulres.invariants import InvariantInput, betti_formula
from koszulres.koszul import KoszulComplex
from koszulres.resolution import build_F, syzygy_oracle, verify

# relevant inputs
ring_file = 'dataset/massey_codepth4.ring'
top = 5


def write_layout_to_file(F):
    with open('experiments/experiment_2/results/layout.txt', 'w') as f:
        for k in range(top + 1):
            groups = ' + '.join(f'{group}^{count}' if count > 1 else group for group, count in F.layout(k))
            f.write(f'F{k} (rank {F.rank(k)}): {groups}\n')


def write_verdict_to_file(verdict):
    with open('experiments/experiment_2/results/verification.txt', 'w') as f:
        f.write(f'd o d = 0: {verdict.complex_ok}\n')
        f.write(f'exact: {verdict.exact_ok}\n')
        f.write(f'Im d1 = m: {verdict.augmentation_ok}\n')
        f.write(f'minimal: {verdict.minimal_ok}\n')
        f.write(f'passed: {verdict.passed}\n')
        for line in verdict.details:
            f.write(f'{line}\n')


def write_betti_to_file(F, formula, oracle):
    df = pd.DataFrame({'rank F': F.ranks, 'formula': formula, 'oracle': oracle})
    df.index.name = 'i'
    df.to_csv('experiments/experiment_2/results/betti.csv')


if __name__ == '__main__':
    ring = load_ring(read_ring_file(ring_file))
    algebra = compute_homology_algebra(KoszulComplex(ring))
    F = build_F(algebra)
    write_layout_to_file(F)

    verdict = verify(F, progress=True)
    write_verdict_to_file(verdict)

    formula = betti_formula(InvariantInput.from_algebra(algebra))
    oracle = syzygy_oracle(ring, top, progress=True)
    write_betti_to_file(F, formula, oracle)
