import itertools

import numpy as np
import pytest

from qqw.andor import eval_tree
from qqw.graphs import (
    GraphOracle,
    StarCertificate,
    e_of,
    edge_exists,
    has_star,
    majority_exact,
    majority_property,
    majority_worst_case,
    star_shape,
    star_zero_error,
    verify_star_certificate,
)
from qqw.oracle import BitOracle, all_inputs, child_rng


def random_graph(n, p, rng):
    a = (rng.random((n, n)) < p).astype(np.uint8)
    np.fill_diagonal(a, 0)
    return a


def star_graph(n, center, rng, p=0.5):
    a = random_graph(n, p, rng)
    a[center] = 1
    a[center, center] = 0
    return a


class TestEncoding:
    @pytest.mark.parametrize("n", [2, 3, 5, 8])
    def test_position_roundtrip(self, n):
        g = GraphOracle(n, BitOracle(np.zeros(n * (n - 1), dtype=np.uint8)))
        seen = set()
        for i, j in itertools.permutations(range(n), 2):
            p = g.position(i, j)
            assert g.unmap(p) == (i, j)
            seen.add(p)
        assert seen == set(range(n * (n - 1)))

    def test_out_edges_contiguous(self):
        g = GraphOracle(4, BitOracle(np.zeros(12, dtype=np.uint8)))
        assert sorted(g.position(2, j) for j in (0, 1, 3)) == [6, 7, 8]

    def test_adjacency_roundtrip(self, rng):
        a = random_graph(6, 0.4, rng)
        np.testing.assert_array_equal(GraphOracle.from_adjacency(a).adjacency(), a)

    def test_errors(self):
        with pytest.raises(ValueError):
            GraphOracle(3, BitOracle(np.zeros(5, dtype=np.uint8)))
        g = GraphOracle(3, BitOracle(np.zeros(6, dtype=np.uint8)))
        with pytest.raises(ValueError):
            g.position(1, 1)
        with pytest.raises(ValueError):
            g.unmap(6)


class TestStar:
    def test_shape_matches_property(self, rng):
        for n in (3, 4, 6):
            for _ in range(30):
                a = random_graph(n, 0.8, rng)
                g = GraphOracle.from_adjacency(a)
                assert eval_tree(star_shape(n), g.oracle.simulator_view()) == int(has_star(a))

    @pytest.mark.parametrize("n", [8, 16])
    def test_zero_error(self, n):
        for i in range(60):
            r = child_rng(31, n, i)
            a = star_graph(n, int(r.integers(n)), r) if i % 2 else random_graph(n, 0.7, r)
            g = GraphOracle.from_adjacency(a)
            v = star_zero_error(g, r)
            if v.dontknow:
                continue
            assert v.value == int(has_star(a))
            assert verify_star_certificate(GraphOracle.from_adjacency(a), v.certificate)
            if v.value:
                assert len(v.certificate.edges) == n - 1
            else:
                assert len(v.certificate.missing) == n

    def test_bad_certificates(self):
        a = np.ones((3, 3), dtype=np.uint8)
        np.fill_diagonal(a, 0)
        a[0, 1] = 0
        g = GraphOracle.from_adjacency(a)
        assert not verify_star_certificate(g, StarCertificate(0, ((0, 1), (0, 2)), ()))
        assert verify_star_certificate(g, StarCertificate(1, ((1, 0), (1, 2)), ()))
        assert not verify_star_certificate(g, StarCertificate(1, ((1, 0),), ()))
        assert not verify_star_certificate(g, StarCertificate(None, (), ((0, 1),)))


class TestMajority:
    @pytest.mark.parametrize("N", range(1, 13))
    def test_exhaustive(self, N):
        worst = 0
        for x in all_inputs(N):
            o = BitOracle(x)
            w = int(x.sum())
            want = 1 if 2 * w > N else (0 if 2 * w < N else 1)
            assert majority_exact(o) == want
            worst = max(worst, o.query_count)
        assert worst == majority_worst_case(N) == N - e_of(N) + 1

    def test_tie_convention(self):
        assert majority_exact(BitOracle([1, 0]), tie_value=0) == 0
        g = GraphOracle.from_adjacency(np.array([[0, 1], [0, 0]]))
        assert majority_property(g) == 0

    def test_e_of(self):
        assert [e_of(n) for n in (0, 1, 2, 3, 7, 8, 12)] == [0, 1, 1, 2, 3, 1, 2]
        with pytest.raises(ValueError):
            e_of(-1)


class TestEdgeExistence:
    def test_empty_graph(self, rng):
        g = GraphOracle.from_adjacency(np.zeros((8, 8), dtype=np.uint8))
        assert edge_exists(g, rng) == 0

    def test_one_edge(self):
        a = np.zeros((16, 16), dtype=np.uint8)
        a[3, 11] = 1
        found = sum(edge_exists(GraphOracle.from_adjacency(a), child_rng(41, i)) for i in range(300))
        assert found / 300 >= 2 / 3 - 0.08
