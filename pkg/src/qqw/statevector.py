"""Full statevector simulation of small query circuits.

Basis states are ``|j, b, w>`` with ``j`` the query index, ``b`` the output
qubit and ``w`` a workspace of ``work_bits`` qubits.  The flat index is
``j * 2**(1 + work_bits) + b * 2**work_bits + w``; internally the state is an
array of shape ``(N, 2, 2**work_bits)`` in that order.

A circuit is a list of gates.  ``Oracle`` and ``PhaseOracle`` are the only
gates that touch the input and each counts as one query.  Acceptance is the
probability of measuring ``b = 1`` at the end.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .oracle import all_inputs

__all__ = [
    "MAX_DIM",
    "MAX_TABLE_N",
    "PureState",
    "Unitary",
    "Oracle",
    "PhaseOracle",
    "Diffusion",
    "UniformPrep",
    "Circuit",
    "initial_state",
    "apply_oracle",
    "apply_gate",
    "run_state",
    "run_circuit",
    "acceptance_table",
    "index_distribution",
    "grover_circuit",
    "random_unitary",
    "random_circuit",
    "dense_unitary",
]

MAX_DIM = 1 << 22
MAX_TABLE_N = 12


@dataclass
class PureState:
    amplitudes: np.ndarray  # shape (N, 2, 2**work_bits)

    @property
    def dimension(self) -> int:
        return int(self.amplitudes.size)

    @property
    def N(self) -> int:
        return int(self.amplitudes.shape[0])

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def flat(self) -> np.ndarray:
        return self.amplitudes.reshape(-1)

    def acceptance(self) -> float:
        return float(min(1.0, max(0.0, np.sum(np.abs(self.amplitudes[:, 1, :]) ** 2))))


@dataclass(frozen=True)
class Unitary:
    """Dense unitary on the whole space (``register="full"``) or on the index
    register alone (``register="index"``)."""

    matrix: np.ndarray
    register: str = "full"


@dataclass(frozen=True)
class Oracle:
    """``|j, b> -> |j, b xor x_j>``."""


@dataclass(frozen=True)
class PhaseOracle:
    """``|j> -> (-1)^{x_j} |j>`` (the bit oracle with ``b`` in ``|->``)."""


@dataclass(frozen=True)
class Diffusion:
    """``2|u><u| - I`` on the index register, ``u`` uniform."""


@dataclass(frozen=True)
class UniformPrep:
    """Householder reflection on the index register swapping ``|0>`` and ``|u>``."""


@dataclass
class Circuit:
    N: int
    gates: list = field(default_factory=list)
    work_bits: int = 0

    @property
    def dimension(self) -> int:
        return self.N * (2 << self.work_bits)

    @property
    def queries(self) -> int:
        return sum(isinstance(g, (Oracle, PhaseOracle)) for g in self.gates)

    def __post_init__(self):
        if self.N < 1 or self.work_bits < 0:
            raise ValueError("need N >= 1 and work_bits >= 0")


def initial_state(N: int, work_bits: int = 0) -> PureState:
    a = np.zeros((N, 2, 1 << work_bits), dtype=complex)
    a[0, 0, 0] = 1.0
    return PureState(a)


def _check_bits(state: PureState, bits) -> np.ndarray:
    bits = np.asarray(bits, dtype=bool).ravel()
    if bits.shape[0] != state.N:
        raise ValueError(f"oracle has {bits.shape[0]} bits, state index register has {state.N}")
    return bits


def apply_oracle(state: PureState, oracle_bits) -> PureState:
    bits = _check_bits(state, oracle_bits)
    a = state.amplitudes.copy()
    a[bits] = a[bits][:, ::-1, :]
    return PureState(a)


def _apply_index_matrix(a: np.ndarray, M: np.ndarray) -> np.ndarray:
    return np.tensordot(M, a, axes=([1], [0]))


def apply_gate(state: PureState, gate, oracle_bits=None) -> PureState:
    a = state.amplitudes
    N = state.N
    if isinstance(gate, Oracle):
        return apply_oracle(state, oracle_bits)
    if isinstance(gate, PhaseOracle):
        bits = _check_bits(state, oracle_bits)
        sign = np.where(bits, -1.0, 1.0)
        return PureState(a * sign[:, None, None])
    if isinstance(gate, Diffusion):
        mean = a.mean(axis=0, keepdims=True)
        return PureState(2 * mean - a)
    if isinstance(gate, UniformPrep):
        # reflection about v = e0 - u; swaps e0 and u when N > 1
        if N == 1:
            return PureState(a.copy())
        v = -np.full(N, 1 / np.sqrt(N))
        v[0] += 1.0
        v /= np.linalg.norm(v)
        proj = np.tensordot(v, a, axes=([0], [0]))
        return PureState(a - 2 * v[:, None, None] * proj[None])
    if isinstance(gate, Unitary):
        M = np.asarray(gate.matrix, dtype=complex)
        if gate.register == "index":
            if M.shape != (N, N):
                raise ValueError("index-register unitary has the wrong shape")
            return PureState(_apply_index_matrix(a, M))
        if M.shape != (a.size, a.size):
            raise ValueError("full-space unitary has the wrong shape")
        return PureState((M @ a.reshape(-1)).reshape(a.shape))
    raise TypeError(f"unknown gate {gate!r}")


def run_state(circuit: Circuit, oracle_bits) -> PureState:
    if circuit.dimension > MAX_DIM:
        raise ValueError(f"circuit dimension {circuit.dimension} exceeds cap {MAX_DIM}")
    s = initial_state(circuit.N, circuit.work_bits)
    for g in circuit.gates:
        s = apply_gate(s, g, oracle_bits)
    return s


def run_circuit(circuit: Circuit, oracle_bits) -> float:
    """Acceptance probability of ``circuit`` on input ``oracle_bits``."""
    return run_state(circuit, oracle_bits).acceptance()


def index_distribution(circuit: Circuit, oracle_bits) -> np.ndarray:
    """Distribution of the index register when measured at the end."""
    a = run_state(circuit, oracle_bits).amplitudes
    return np.sum(np.abs(a) ** 2, axis=(1, 2))


def acceptance_table(circuit: Circuit, N: int | None = None) -> np.ndarray:
    """Acceptance probability for each of the ``2**N`` inputs (row ``i`` of
    :func:`qqw.oracle.all_inputs`)."""
    N = circuit.N if N is None else N
    if N != circuit.N:
        raise ValueError("table size does not match the circuit")
    if N > MAX_TABLE_N:
        raise ValueError(f"acceptance tables are limited to N <= {MAX_TABLE_N}")
    return np.array([run_circuit(circuit, x) for x in all_inputs(N)])


# ---------------------------------------------------------------------------
# circuit builders
# ---------------------------------------------------------------------------


def grover_circuit(N: int, k: int, final_query: bool = True) -> Circuit:
    """Uniform preparation, ``k`` Grover iterations, then (optionally) one
    query of the measured index into the output qubit.  ``k + 1`` queries."""
    gates = [UniformPrep()]
    for _ in range(k):
        gates += [PhaseOracle(), Diffusion()]
    if final_query:
        gates.append(Oracle())
    return Circuit(N, gates)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a complex Gaussian."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_circuit(N: int, T: int, rng: np.random.Generator, work_bits: int = 1) -> Circuit:
    """``U_T O U_{T-1} ... O U_0`` with Haar-random dense ``U_i``."""
    dim = N * (2 << work_bits)
    gates = [Unitary(random_unitary(dim, rng))]
    for _ in range(T):
        gates += [Oracle(), Unitary(random_unitary(dim, rng))]
    return Circuit(N, gates, work_bits)


def dense_unitary(gate, N: int, work_bits: int, oracle_bits=None) -> np.ndarray:
    """Matrix of ``gate`` on the full space, built column by column."""
    dim = N * (2 << work_bits)
    cols = []
    for i in range(dim):
        e = np.zeros(dim, dtype=complex)
        e[i] = 1
        s = PureState(e.reshape(N, 2, 1 << work_bits))
        cols.append(apply_gate(s, gate, oracle_bits).flat())
    return np.stack(cols, axis=1)
