import itertools

import numpy as np
import pytest

from qqw.boolfn import (
    TruthTable,
    check_monotone_relations,
    decision_tree_depth,
    degree,
    is_monotone,
    read_truth_table,
    sensitivity,
    write_truth_table,
)


def threshold(N, k):
    return TruthTable.from_function(N, lambda X: X.sum(axis=1) >= k, vectorized=True)


class TestConstruction:
    def test_lexicographic_order(self):
        f = TruthTable.dictator(3, 0)
        assert f.values.tolist() == [0, 0, 0, 0, 1, 1, 1, 1]

    def test_scalar_function(self):
        f = TruthTable.from_function(2, lambda x: x[0] ^ x[1])
        assert f.values.tolist() == [0, 1, 1, 0]

    def test_validation(self):
        with pytest.raises(ValueError):
            TruthTable(2, [0, 1, 1])
        with pytest.raises(ValueError):
            TruthTable(1, [0, 2])

    def test_file_roundtrip(self, tmp_path):
        f = TruthTable.majority(5)
        write_truth_table(f, tmp_path / "maj.txt")
        g = read_truth_table(tmp_path / "maj.txt")
        assert g.N == 5 and np.array_equal(g.values, f.values)

    def test_bad_file(self, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("2\n01x1\n")
        with pytest.raises(ValueError):
            read_truth_table(p)


class TestMeasures:
    @pytest.mark.parametrize("N", range(1, 11))
    def test_or(self, N):
        f = TruthTable.OR(N)
        assert degree(f) == sensitivity(f) == decision_tree_depth(f) == N

    def test_constant(self):
        f = TruthTable.constant(4, 1)
        assert degree(f) == sensitivity(f) == decision_tree_depth(f) == 0

    def test_dictator(self):
        f = TruthTable.dictator(5, 3)
        assert (degree(f), sensitivity(f), decision_tree_depth(f)) == (1, 1, 1)

    def test_majority3(self):
        f = TruthTable.majority(3)
        # x0x1 + x0x2 + x1x2 - 2 x0x1x2
        assert (degree(f), sensitivity(f), decision_tree_depth(f)) == (3, 2, 3)

    def test_sort_function_has_low_sensitivity(self):
        # the address function on 2 + 4 bits
        f = TruthTable.from_function(6, lambda x: x[2 + 2 * x[0] + x[1]])
        assert decision_tree_depth(f) == 3
        assert sensitivity(f) == 3

    def test_depth_cap(self):
        with pytest.raises(ValueError):
            decision_tree_depth(TruthTable.OR(15))


class TestMonotone:
    def test_detection(self):
        assert is_monotone(TruthTable.majority(5))
        assert not is_monotone(TruthTable.from_function(2, lambda x: x[0] ^ x[1]))

    def test_rejects_non_monotone(self):
        with pytest.raises(ValueError):
            check_monotone_relations(TruthTable.from_function(3, lambda x: 1 - x[0]))

    @pytest.mark.parametrize("N,k", [(n, k) for n in range(1, 8) for k in range(0, n + 2)])
    def test_thresholds(self, N, k):
        r = check_monotone_relations(threshold(N, k))
        assert r.monotone and r.D_le_s_squared and r.deg_ge_s

    def test_all_monotone_functions_on_three_bits(self):
        X = list(itertools.product((0, 1), repeat=3))
        count = 0
        for vals in itertools.product((0, 1), repeat=8):
            f = TruthTable(3, vals)
            if is_monotone(f):
                count += 1
                r = check_monotone_relations(f)
                assert r.D <= r.s**2 and r.deg >= r.s
        assert count == 20  # Dedekind number for three variables
