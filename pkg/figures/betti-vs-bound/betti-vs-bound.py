from pathlib import Path

import numpy as np
from matplotlib import pyplot as plt

from koszulres.cli import load_ring, read_ring_file
from koszulres.homalg import compute_homology_algebra
from koszulres.invariants import InvariantInput, invariant_report
from koszulres.koszul import KoszulComplex

# relevant inputs
dataset = Path('dataset')
width = 0.35


def series(path):
    definition = read_ring_file(path)
    algebra = compute_homology_algebra(KoszulComplex(load_ring(definition)))
    report = invariant_report(InvariantInput.from_algebra(algebra, definition.depth))
    return report.betti, report.bound


def plot_ring(name, betti, bound):
    x = np.arange(len(betti))
    plt.bar(x - width / 2, bound, width, color='cornflowerblue', label='Golod bound')
    plt.bar(x + width / 2, betti, width, color='darkviolet', label='Betti number')
    plt.yscale('log')
    plt.xticks(x)
    plt.xlabel('homological degree i')
    plt.ylabel('rank')
    plt.title(name)
    plt.legend(fontsize=12)
    plt.grid(axis='y')
    plt.savefig(f'figures/betti-vs-bound/betti-vs-bound_{name}.png', transparent=False, bbox_inches='tight',
                pad_inches=0)
    plt.close()


if __name__ == '__main__':
    plt.rcParams.update({'font.size': 14})
    for path in sorted(dataset.glob('*.ring')):
        betti, bound = series(path)
        plot_ring(path.stem, betti, bound)
