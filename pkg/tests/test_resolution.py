import pytest

from koszulres.errors import RingInputError
from koszulres.polyring import build_quotient, parse_polynomial
from koszulres.exactlin import QQ
from koszulres.resolution import (FAULTS, SEEDED_MUTATIONS, add_unit_entry, build_F, drop_summand,
                                  flip_block_sign, graded_dim, inject_fault, syzygy_oracle, verify,
                                  verify_complex, verify_minimality)


@pytest.fixture(scope='module')
def golod_resolution(golod_algebra):
    return build_F(golod_algebra)


class TestLayout:
    def test_flagship_ranks(self, flagship_resolution):
        assert flagship_resolution.ranks == [1, 4, 13, 40, 121, 364]

    def test_flagship_layout(self, flagship_resolution):
        assert flagship_resolution.layout(2) == [('K2', 1), ('K0 z1', 7)]
        assert flagship_resolution.layout(4)[-1] == ('K0 p1', 42)
        groups = dict(flagship_resolution.layout(5))
        assert groups['K0 p2'] == 46
        assert groups['K0 gamma'] == 8 * 7

    def test_summand_labels(self, flagship_resolution):
        assert flagship_resolution.summands[0][0].label == 'K0'
        assert flagship_resolution.summands[3][1].label == 'K1[z1 1]'

    def test_shifts_follow_homology_degrees(self, flagship_resolution, flagship_algebra):
        z1 = [s for s in flagship_resolution.summands[2] if s.group == 'z1']
        assert [s.shift for s in z1] == flagship_algebra.basis(1).degrees

    def test_dual_numbers(self, dual_numbers_algebra):
        assert build_F(dual_numbers_algebra).ranks == [1] * 6

    def test_golod_ring(self, golod_resolution):
        assert golod_resolution.ranks == [1, 2, 4, 8, 16, 32]

    def test_complete_intersection(self, ci3_algebra):
        assert build_F(ci3_algebra).ranks == [1, 3, 6, 10, 15, 21]

    def test_graded_dimension(self, golod_resolution):
        # F_1 = K_1 is R^2 in internal degrees 1 and 2
        assert graded_dim(golod_resolution, 1, 1) == 2
        assert graded_dim(golod_resolution, 1, 2) == 4
        assert graded_dim(golod_resolution, 1, 3) == 0


class TestVerify:
    @pytest.mark.parametrize('name', ['dual_numbers_algebra', 'golod_algebra', 'ci3_algebra'])
    def test_small_rings_pass(self, request, name):
        verdict = verify(build_F(request.getfixturevalue(name)))
        assert verdict.passed, verdict.details
        assert not verdict.truncated
        assert set(verdict.exact_ok) == {1, 2, 3, 4}

    def test_flagship_is_minimal(self, flagship_resolution):
        assert verify_minimality(flagship_resolution).minimal_ok

    @pytest.mark.slow
    def test_flagship_passes(self, flagship_resolution):
        verdict = verify(flagship_resolution)
        assert verdict.passed, verdict.details
        assert verdict.complex_ok == {1: True, 2: True, 3: True, 4: True}


class TestFaults:
    def test_unit_entry_breaks_minimality(self, golod_resolution):
        verdict = verify(add_unit_entry(golod_resolution, 4))
        assert verdict.minimal_ok is False
        assert not verdict.passed
        assert any('unit' in line for line in verdict.details)

    def test_dropped_gamma_breaks_exactness(self, golod_resolution):
        broken = drop_summand(golod_resolution, 5, 'gamma')
        assert broken.rank(5) == golod_resolution.rank(5) - 6
        verdict = verify(broken)
        assert verdict.exact_ok[4] is False
        assert not verdict.passed

    def test_fault_names(self, golod_resolution):
        assert set(SEEDED_MUTATIONS) < set(FAULTS)
        with pytest.raises(KeyError):
            inject_fault(golod_resolution, 'no-such-fault')
        with pytest.raises(KeyError):
            flip_block_sign(golod_resolution, 'd4:nothing')

    def test_faults_leave_the_original_untouched(self, golod_resolution):
        inject_fault(golod_resolution, 'unit-d4')
        inject_fault(golod_resolution, 'drop-gamma')
        assert golod_resolution.ranks == [1, 2, 4, 8, 16, 32]
        assert all(b.name != 'd4:unit' for b in golod_resolution.blocks[4])

    @pytest.mark.slow
    @pytest.mark.parametrize('name', SEEDED_MUTATIONS)
    def test_sign_flips_are_caught_on_flagship(self, flagship_resolution, name):
        verdict = verify_complex(inject_fault(flagship_resolution, name))
        assert not all(verdict.complex_ok.values())
        assert verdict.details

    @pytest.mark.slow
    def test_dropped_gamma_on_flagship(self, flagship_resolution):
        assert not verify(inject_fault(flagship_resolution, 'drop-gamma')).passed


class TestSyzygyOracle:
    def test_dual_numbers(self, dual_numbers_algebra):
        assert syzygy_oracle(dual_numbers_algebra.K.ring) == [1] * 6

    def test_golod_ring(self, golod_algebra):
        assert syzygy_oracle(golod_algebra.K.ring, N=4) == [1, 2, 4, 8, 16]

    def test_complete_intersection(self, ci3_algebra):
        assert syzygy_oracle(ci3_algebra.K.ring) == [1, 3, 6, 10, 15, 21]

    def test_non_artinian_ring_rejected(self):
        names = ('x', 'y')
        ring = build_quotient(names, QQ, [parse_polynomial('x^2', names)], cutoff=6)
        with pytest.raises(RingInputError):
            syzygy_oracle(ring)

    @pytest.mark.slow
    def test_flagship(self, flagship_ring):
        assert syzygy_oracle(flagship_ring) == [1, 4, 13, 40, 121, 364]
