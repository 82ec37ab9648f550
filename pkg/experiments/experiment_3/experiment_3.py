import pandas as pd

from koszulres.cli import load_ring, read_ring_file
from koszulres.homalg import compute_homology_algebra
from koszulres.invariants import InvariantInput, invariant_report
from koszulres.koszul import KoszulComplex

# relevant inputs
ring_files = {f'I{i}': f'dataset/yoshino_i{i}.ring' for i in range(1, 5)}


def yoshino_row(name, path):
    ring = load_ring(read_ring_file(path))
    inp = InvariantInput.from_algebra(compute_homology_algebra(KoszulComplex(ring)))
    report = invariant_report(inp)
    return {'ring': name, 'a1': inp.a(1), 'a2': inp.a(2), 'a3': inp.a(3), 'a4': inp.a(4), 'q11': inp.q11,
            'q12': inp.q12, 'a': inp.massey_rank, 'b': inp.b, 'betti': report.betti,
            'denominator': report.denominator}


def write_table_to_file(df):
    df.to_csv('experiments/experiment_3/results/yoshino.csv', index=False)
    with open('experiments/experiment_3/results/yoshino.txt', 'w') as f:
        f.write(df.to_string(index=False))
        f.write('\n')


if __name__ == '__main__':
    rows = [yoshino_row(name, path) for name, path in ring_files.items()]
    write_table_to_file(pd.DataFrame(rows))
