from pathlib import Path

import pytest

from koszulres.cli import load_ring, read_ring_file
from koszulres.homalg import compute_homology_algebra
from koszulres.koszul import KoszulComplex
from koszulres.resolution import build_F

DATASET = Path(__file__).resolve().parent.parent / 'dataset'


def ring_from_dataset(name):
    return load_ring(read_ring_file(DATASET / f'{name}.ring'))


def algebra_from_dataset(name):
    return compute_homology_algebra(KoszulComplex(ring_from_dataset(name)))


@pytest.fixture(scope='module')
def flagship_ring():
    return ring_from_dataset('massey_codepth4')


@pytest.fixture(scope='module')
def flagship_complex(flagship_ring):
    return KoszulComplex(flagship_ring)


@pytest.fixture(scope='module')
def flagship_algebra(flagship_complex):
    return compute_homology_algebra(flagship_complex)


@pytest.fixture(scope='module')
def flagship_resolution(flagship_algebra):
    return build_F(flagship_algebra)


@pytest.fixture(scope='module')
def dual_numbers_algebra():
    return algebra_from_dataset('dual_numbers')


@pytest.fixture(scope='module')
def golod_algebra():
    return algebra_from_dataset('golod_xy')


@pytest.fixture(scope='module')
def ci3_algebra():
    return algebra_from_dataset('ci_codepth3')


@pytest.fixture(scope='module')
def ci4_algebra():
    return algebra_from_dataset('ci_codepth4')
