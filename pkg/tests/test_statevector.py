import numpy as np
import pytest

from qqw.oracle import all_inputs
from qqw.statevector import (
    Circuit,
    Diffusion,
    MAX_DIM,
    Oracle,
    PhaseOracle,
    UniformPrep,
    Unitary,
    acceptance_table,
    apply_gate,
    dense_unitary,
    grover_circuit,
    initial_state,
    random_circuit,
    random_unitary,
    run_circuit,
    run_state,
)


def brute_oracle_matrix(bits, work_bits):
    """Permutation matrix of |j, b, w> -> |j, b xor x_j, w> from the flat index."""
    N = len(bits)
    W = 1 << work_bits
    dim = N * 2 * W
    M = np.zeros((dim, dim))
    for j in range(N):
        for b in range(2):
            for w in range(W):
                src = j * 2 * W + b * W + w
                dst = j * 2 * W + (b ^ int(bits[j])) * W + w
                M[dst, src] = 1
    return M


class TestGates:
    @pytest.mark.parametrize("work_bits", [0, 1, 2])
    def test_oracle_matches_brute_force(self, work_bits, rng):
        for _ in range(5):
            bits = rng.integers(0, 2, 4)
            np.testing.assert_array_equal(dense_unitary(Oracle(), 4, work_bits, bits), brute_oracle_matrix(bits, work_bits))

    @pytest.mark.parametrize("gate", [Oracle(), PhaseOracle(), Diffusion(), UniformPrep()])
    def test_involutions(self, gate):
        bits = np.array([1, 0, 1, 1, 0])
        U = dense_unitary(gate, 5, 1, bits)
        np.testing.assert_allclose(U @ U, np.eye(U.shape[0]), atol=1e-12)
        np.testing.assert_allclose(U.conj().T @ U, np.eye(U.shape[0]), atol=1e-12)

    def test_uniform_prep_maps_zero_to_uniform(self):
        s = apply_gate(initial_state(8), UniformPrep())
        np.testing.assert_allclose(s.amplitudes[:, 0, 0], np.full(8, 1 / np.sqrt(8)), atol=1e-12)

    def test_index_unitary(self, rng):
        U = random_unitary(4, rng)
        s = apply_gate(initial_state(4, 1), Unitary(U, "index"))
        np.testing.assert_allclose(s.amplitudes[:, 0, 0], U[:, 0], atol=1e-12)

    def test_random_unitary_is_unitary(self, rng):
        U = random_unitary(12, rng)
        np.testing.assert_allclose(U.conj().T @ U, np.eye(12), atol=1e-10)

    def test_shape_errors(self):
        with pytest.raises(ValueError):
            apply_gate(initial_state(4), Oracle(), [1, 0])
        with pytest.raises(ValueError):
            apply_gate(initial_state(4), Unitary(np.eye(3)))
        with pytest.raises(TypeError):
            apply_gate(initial_state(4), "H")


class TestCircuits:
    def test_norm_preserved(self, rng):
        c = random_circuit(6, 3, rng)
        for x in all_inputs(6)[::7]:
            assert run_state(c, x).norm() == pytest.approx(1.0, abs=1e-10)

    def test_query_count(self, rng):
        assert random_circuit(4, 3, rng).queries == 3
        assert grover_circuit(8, 2).queries == 3

    def test_grover_acceptance(self):
        # one iteration on N=4 with a single marked item is exact
        tab = acceptance_table(grover_circuit(4, 1))
        for x, p in zip(all_inputs(4), tab):
            w = x.sum()
            if w == 1:
                assert p == pytest.approx(1.0, abs=1e-12)
            if w == 0:
                assert p == pytest.approx(0.0, abs=1e-12)

    def test_grover_table_is_symmetric(self):
        tab = acceptance_table(grover_circuit(6, 2))
        X = all_inputs(6)
        w = X.sum(axis=1)
        for k in range(7):
            assert np.ptp(tab[w == k]) < 1e-12

    def test_dimension_cap(self):
        with pytest.raises(ValueError):
            run_circuit(Circuit(MAX_DIM, [], 0), np.zeros(MAX_DIM))

    def test_table_cap(self):
        with pytest.raises(ValueError):
            acceptance_table(Circuit(13, []))
