import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qqw.oracle import (
    BitOracle,
    QueryStats,
    all_inputs,
    bits_dump,
    bits_from_index,
    child_rng,
    hamming_weight,
    index_from_bits,
    planted_input,
    trial_rngs,
)


class TestQuery:
    def test_reads_and_counts(self):
        o = BitOracle([1, 0, 1, 1])
        assert o.query(0) == 1
        assert o.query_count == 1
        assert o.query(1) == 0
        assert o.query_count == 2

    def test_all_zero(self):
        o = BitOracle([0, 0, 0, 0])
        assert [o.query(j) for j in range(4)] == [0, 0, 0, 0]
        assert o.query_count == 4

    @pytest.mark.parametrize("j", [-1, 4, 100])
    def test_out_of_range(self, j):
        with pytest.raises(IndexError):
            BitOracle([1, 0, 1, 1]).query(j)

    def test_bits_immutable(self):
        o = BitOracle([1, 0])
        with pytest.raises(ValueError):
            o.simulator_view()[0] = 0

    def test_rejects_empty_and_nonbinary(self):
        with pytest.raises(ValueError):
            BitOracle([])
        with pytest.raises(ValueError):
            BitOracle([0, 2])

    def test_query_kinds_are_separated(self):
        o = BitOracle([1, 1, 0])
        o.query(0)
        o.charge(5)
        assert o.xor_query(0, 2) == 1
        assert o.stats == QueryStats(6, 1)
        assert o.query_count == o.stats.total == 7

    def test_no_refunds(self):
        with pytest.raises(ValueError):
            BitOracle([1]).charge(-1)

    def test_fork_has_fresh_counters(self):
        o = BitOracle([1, 0, 1])
        o.query(0)
        f = o.fork()
        assert f.query_count == 0
        assert f.query(2) == 1
        assert o.query_count == 1


class TestHarness:
    def test_weight_is_free(self):
        o = BitOracle([1, 0, 1, 1])
        assert hamming_weight(o) == 3
        assert o.query_count == 0

    def test_weight_zero(self):
        assert hamming_weight(BitOracle([0, 0, 0, 0])) == 0

    def test_random_weight_matches_popcount(self, rng):
        bits = rng.integers(0, 2, 20)
        assert hamming_weight(BitOracle(bits)) == int(bits.sum())

    def test_capability_flag(self):
        o = BitOracle([1, 0], harness=False)
        with pytest.raises(PermissionError):
            hamming_weight(o)
        with pytest.raises(PermissionError):
            bits_dump(o)


class TestPlanted:
    def test_extremes(self, rng):
        assert bits_dump(planted_input(4, 0, rng)).tolist() == [0, 0, 0, 0]
        assert bits_dump(planted_input(4, 4, rng)).tolist() == [1, 1, 1, 1]

    def test_weight(self, rng):
        assert hamming_weight(planted_input(64, 3, rng)) == 3

    def test_too_many(self, rng):
        with pytest.raises(ValueError):
            planted_input(4, 5, rng)

    def test_positions_roughly_uniform(self):
        hits = np.zeros(8)
        for i in range(4000):
            hits += bits_dump(planted_input(8, 1, child_rng(3, i)))
        assert np.all(np.abs(hits / 4000 - 1 / 8) < 0.03)


class TestSeeds:
    def test_child_rng_reproducible(self):
        a = child_rng(7, 1, 2).integers(1 << 30, size=5)
        b = child_rng(7, 1, 2).integers(1 << 30, size=5)
        c = child_rng(7, 2, 1).integers(1 << 30, size=5)
        assert a.tolist() == b.tolist()
        assert a.tolist() != c.tolist()

    def test_trial_rngs_independent(self):
        gens = trial_rngs(11, 3)
        draws = [g.integers(1 << 30) for g in gens]
        assert len(set(draws)) == 3

    def test_replay_reproduces_run(self):
        from qqw.amplitude import unknown_t_search

        def run():
            rng = child_rng(5, 0)
            o = planted_input(256, 2, rng)
            out = unknown_t_search(o, rng)
            return out.index, o.query_count

        assert run() == run()


class TestBitConventions:
    @given(st.integers(1, 12), st.data())
    def test_roundtrip(self, N, data):
        i = data.draw(st.integers(0, (1 << N) - 1))
        assert index_from_bits(bits_from_index(i, N)) == i

    def test_msb_first(self):
        assert bits_from_index(1, 3).tolist() == [0, 0, 1]
        assert all_inputs(2).tolist() == [[0, 0], [0, 1], [1, 0], [1, 1]]
