import pandas as pd

from koszulres.cli import load_ring, read_ring_file
from koszulres.homalg import compute_homology_algebra
from koszulres.invariants import InvariantInput, invariant_report
from koszulres.koszul import KoszulComplex
from koszulres.resolution import build_F, syzygy_oracle, verify

# relevant inputs
ring_files = ['dual_numbers', 'golod_xy', 'ci_codepth3', 'ci_codepth4']


def sanity_row(name):
    ring = load_ring(read_ring_file(f'dataset/{name}.ring'))
    algebra = compute_homology_algebra(KoszulComplex(ring))
    report = invariant_report(InvariantInput.from_algebra(algebra))
    F = build_F(algebra)
    verdict = verify(F)
    oracle = syzygy_oracle(ring)
    return {'ring': name, 'betti': report.betti, 'bound': report.bound, 'rank F': F.ranks, 'oracle': oracle,
            'golod': not any(report.defect), 'gorenstein': ' '.join(report.gorenstein_classes),
            'codepth3_check': report.codepth3_ok, 'verified': verdict.passed}


def write_table_to_file(df):
    df.to_csv('experiments/experiment_5/results/sanity.csv', index=False)
    with open('experiments/experiment_5/results/sanity.txt', 'w') as f:
        f.write(df.to_string(index=False))
        f.write('\n')


if __name__ == '__main__':
    write_table_to_file(pd.DataFrame([sanity_row(name) for name in ring_files]))
