"""Black-box inputs with exact query accounting.

Algorithms touch the input only through :class:`BitOracle`:

* ``query(j)`` / ``query_many(idx)`` -- classical reads, one query per bit;
* ``xor_query(i, j)`` -- the parity of two bits for one quantum query;
* ``charge(k)`` -- bills ``k`` query-gate applications made by a simulated
  quantum circuit.

Simulated circuits need the marked set to compute their outcome distribution.
They get it from :meth:`BitOracle.simulator_view`, which stands in for the
physics of the device and is never used to make algorithmic decisions.

Input bit strings map to integers with ``x_0`` as the most significant bit, so
lexicographic order of strings is numeric order of indices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "BitOracle",
    "QueryStats",
    "planted_input",
    "hamming_weight",
    "bits_dump",
    "make_rng",
    "child_rng",
    "trial_rngs",
    "bits_from_index",
    "index_from_bits",
    "all_inputs",
]


@dataclass
class QueryStats:
    quantum_queries: int = 0
    classical_verification_queries: int = 0

    @property
    def total(self) -> int:
        return self.quantum_queries + self.classical_verification_queries

    def __add__(self, other: "QueryStats") -> "QueryStats":
        return QueryStats(
            self.quantum_queries + other.quantum_queries,
            self.classical_verification_queries + other.classical_verification_queries,
        )

    def add(self, other: "QueryStats") -> None:
        self.quantum_queries += other.quantum_queries
        self.classical_verification_queries += other.classical_verification_queries


class BitOracle:
    """An input ``x in {0,1}^N`` behind a counting query interface."""

    def __init__(self, bits, *, harness: bool = True):
        b = np.array(bits, dtype=np.uint8).ravel()
        if b.size < 1:
            raise ValueError("oracle needs N >= 1")
        if np.any(b > 1):
            raise ValueError("oracle bits must be 0/1")
        b.setflags(write=False)
        self._bits = b
        self._harness = harness
        self._marked_cache = {}
        self.query_count = 0
        self.stats = QueryStats()

    @property
    def N(self) -> int:
        return int(self._bits.shape[0])

    def __len__(self) -> int:
        return self.N

    def __repr__(self) -> str:
        return f"BitOracle(N={self.N}, queries={self.query_count})"

    def _check(self, j) -> int:
        j = int(j)
        if not 0 <= j < self.N:
            raise IndexError(f"query index {j} outside [0, {self.N})")
        return j

    def query(self, j) -> int:
        j = self._check(j)
        self.query_count += 1
        self.stats.classical_verification_queries += 1
        return int(self._bits[j])

    def query_many(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= self.N):
            raise IndexError("query index out of range")
        self.query_count += int(idx.size)
        self.stats.classical_verification_queries += int(idx.size)
        return self._bits[idx].copy()

    def xor_query(self, i, j) -> int:
        # |i,j,b> -> |i,j,b + x_i + x_j> costs one query in superposition
        i, j = self._check(i), self._check(j)
        self.charge(1)
        return int(self._bits[i] ^ self._bits[j])

    def charge(self, k: int) -> None:
        if k < 0:
            raise ValueError("cannot refund queries")
        self.query_count += int(k)
        self.stats.quantum_queries += int(k)

    def bill(self, stats: QueryStats) -> None:
        """Charge externally accounted queries (e.g. a dovetailed run)."""
        self.query_count += stats.total
        self.stats.add(stats)

    def fork(self) -> "BitOracle":
        """Same input, fresh counters."""
        o = object.__new__(BitOracle)
        o._bits = self._bits
        o._harness = self._harness
        o._marked_cache = self._marked_cache
        o.query_count = 0
        o.stats = QueryStats()
        return o

    def simulator_view(self) -> np.ndarray:
        """Read-only bits for computing simulated outcome distributions."""
        return self._bits

    def simulator_cache(self) -> dict:
        """Scratch space for per-input simulator precomputation, shared by forks."""
        return self._marked_cache

    def simulator_marked(self, lo: int, hi: int, target: int) -> np.ndarray:
        """Positions in ``[lo, hi)`` holding ``target`` (cached; simulator only)."""
        cache = self._marked_cache
        key = (lo, hi, target)
        m = cache.get(key)
        if m is None:
            m = np.flatnonzero(self._bits[lo:hi] == target) + lo
            m.setflags(write=False)
            cache[key] = m
        return m


def _require_harness(oracle: BitOracle) -> None:
    if not oracle._harness:
        raise PermissionError("oracle was built without harness access")


def hamming_weight(oracle: BitOracle) -> int:
    """Number of ones; does not touch the query counter. Harness only."""
    _require_harness(oracle)
    return int(oracle._bits.sum())


def bits_dump(oracle: BitOracle) -> np.ndarray:
    _require_harness(oracle)
    return oracle._bits.copy()


def planted_input(N: int, t: int, rng: np.random.Generator, *, harness: bool = True) -> BitOracle:
    """Oracle with exactly ``t`` ones at uniformly random positions."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if not 0 <= t <= N:
        raise ValueError(f"cannot plant t={t} ones in N={N} bits")
    bits = np.zeros(N, dtype=np.uint8)
    if t:
        bits[rng.choice(N, size=t, replace=False)] = 1
    return BitOracle(bits, harness=harness)


# ---------------------------------------------------------------------------
# seeds
# ---------------------------------------------------------------------------


def make_rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def child_rng(seed: int, *keys: int) -> np.random.Generator:
    """Generator for a sub-task identified by integer ``keys``."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, keys)]))


def trial_rngs(seed: int, n: int) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(int(seed)).spawn(n)]


# ---------------------------------------------------------------------------
# bit conventions
# ---------------------------------------------------------------------------


def bits_from_index(index: int, N: int) -> np.ndarray:
    return np.array([(index >> (N - 1 - j)) & 1 for j in range(N)], dtype=np.uint8)


def index_from_bits(bits) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | int(b)
    return out


def all_inputs(N: int) -> np.ndarray:
    """``(2**N, N)`` matrix; row ``i`` is the input with index ``i``."""
    idx = np.arange(1 << N, dtype=np.int64)
    shifts = np.arange(N - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts[None, :]) & 1).astype(np.uint8)
