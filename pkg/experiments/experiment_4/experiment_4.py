import pandas as pd

from koszulres.cli import load_ring, read_ring_file
from koszulres.homalg import compute_homology_algebra
from koszulres.invariants import InvariantInput, invariant_report
from koszulres.koszul import KoszulComplex

# relevant inputs
ring_files = {'J1': 'dataset/roos_j1.ring', 'J2': 'dataset/roos_j2.ring'}


def roos_run(path):
    definition = read_ring_file(path)
    ring = load_ring(definition)
    algebra = compute_homology_algebra(KoszulComplex(ring))
    inp = InvariantInput.from_algebra(algebra, definition.depth)
    return ring, algebra, invariant_report(inp)


def write_massey_to_file(name, algebra):
    K = algebra.K
    with open(f'experiments/experiment_4/results/massey_{name}.txt', 'w') as f:
        f.write(f'rank of the constrained Massey span: {algebra.massey.span.rank}\n')
        f.write(f'a: {algebra.massey.a}\n')
        for vector in algebra.massey.span.basis:
            f.write(f'{K.format(algebra.element(4, vector))}\n')


def write_table_to_file(rows):
    df = pd.DataFrame(rows)
    df.to_csv('experiments/experiment_4/results/roos.csv', index=False)
    with open('experiments/experiment_4/results/roos.txt', 'w') as f:
        f.write(df.to_string(index=False))
        f.write('\n')


if __name__ == '__main__':
    rows = []
    for name, path in ring_files.items():
        ring, algebra, report = roos_run(path)
        write_massey_to_file(name, algebra)
        rows.append({'ring': name, 'cutoff': ring.cutoff, 'ranks': [algebra.rank(i) for i in range(1, 5)],
                     'a': algebra.massey.a, 'b': algebra.b, 'betti': report.betti, 'defect': report.defect})
    write_table_to_file(rows)
