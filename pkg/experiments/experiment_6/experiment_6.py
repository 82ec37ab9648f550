import pandas as pd

from koszulres.cli import load_ring, read_ring_file
from koszulres.homalg import compute_homology_algebra
from koszulres.koszul import KoszulComplex
from koszulres.resolution import SEEDED_MUTATIONS, build_F, inject_fault, verify

# relevant inputs
ring_file = 'dataset/massey_codepth4.ring'
faults = list(SEEDED_MUTATIONS) + ['drop-gamma']


def run_fault(F, fault):
    verdict = verify(inject_fault(F, fault))
    return {'fault': fault, 'complex': all(verdict.complex_ok.values()), 'exact': all(verdict.exact_ok.values()),
            'minimal': verdict.minimal_ok, 'caught': not verdict.passed,
            'first detail': verdict.details[0] if verdict.details else ''}


def write_faults_to_file(df):
    df.to_csv('experiments/experiment_6/results/faults.csv', index=False)
    with open('experiments/experiment_6/results/faults.txt', 'w') as f:
        f.write(df.to_string(index=False))
        f.write('\n')
        f.write(f'caught {int(df["caught"].sum())} of {len(df)} faults\n')


if __name__ == '__main__':
    ring = load_ring(read_ring_file(ring_file))
    F = build_F(compute_homology_algebra(KoszulComplex(ring)))
    write_faults_to_file(pd.DataFrame([run_fault(F, fault) for fault in faults]))
