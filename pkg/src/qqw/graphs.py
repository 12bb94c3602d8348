"""Monotone properties of directed graphs given as edge-bit oracles.

Ordered pair ``(i, j)``, ``i != j``, lives at position
``i*(n-1) + (j if j < i else j-1)``, so the out-edges of vertex ``i`` form the
contiguous block ``[i*(n-1), (i+1)*(n-1))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .amplitude import default_cutoff, unknown_t_search
from .andor import OR, TreeShape, ZeroErrorVerdict, calibrate, zero_error_evaluate
from .oracle import BitOracle, QueryStats

__all__ = [
    "GraphOracle",
    "StarCertificate",
    "StarVerdict",
    "GRAPH_CSV_COLUMNS",
    "star_shape",
    "has_star",
    "star_zero_error",
    "verify_star_certificate",
    "e_of",
    "majority_exact",
    "majority_property",
    "majority_worst_case",
    "edge_exists",
    "EDGE_ERROR",
]

GRAPH_CSV_COLUMNS = ("n", "N", "property", "verdict", "queries_quantum", "queries_classical", "seed")
EDGE_ERROR = 1 / 3


class GraphOracle:
    def __init__(self, n: int, oracle: BitOracle):
        if n < 2:
            raise ValueError("graphs need n >= 2")
        if oracle.N != n * (n - 1):
            raise ValueError(f"n={n} needs {n * (n - 1)} edge bits, oracle has {oracle.N}")
        self.n = n
        self.oracle = oracle

    @property
    def N(self) -> int:
        return self.n * (self.n - 1)

    def position(self, i: int, j: int) -> int:
        n = self.n
        if not (0 <= i < n and 0 <= j < n) or i == j:
            raise ValueError(f"no edge slot for ({i}, {j})")
        return i * (n - 1) + (j if j < i else j - 1)

    def unmap(self, p: int) -> tuple[int, int]:
        if not 0 <= p < self.N:
            raise ValueError(f"position {p} out of range")
        i, r = divmod(p, self.n - 1)
        return i, (r if r < i else r + 1)

    @classmethod
    def from_adjacency(cls, adj, *, harness: bool = True) -> "GraphOracle":
        a = np.asarray(adj, dtype=np.uint8)
        n = a.shape[0]
        if a.shape != (n, n):
            raise ValueError("adjacency matrix must be square")
        bits = a[~np.eye(n, dtype=bool)]  # row-major off-diagonal matches position()
        return cls(n, BitOracle(bits, harness=harness))

    def adjacency(self) -> np.ndarray:
        """Adjacency matrix from the simulator view (harness / test use)."""
        n = self.n
        a = np.zeros((n, n), dtype=np.uint8)
        a[~np.eye(n, dtype=bool)] = self.oracle.simulator_view()
        return a


def e_of(N: int) -> int:
    """Number of ones in the binary expansion of ``N``."""
    if N < 0:
        raise ValueError("N must be >= 0")
    return bin(N).count("1")


# ---------------------------------------------------------------------------
# STAR: some vertex has an edge to every other vertex
# ---------------------------------------------------------------------------


def star_shape(n: int) -> TreeShape:
    """OR over vertices of the AND of that vertex's ``n - 1`` out-edges."""
    return TreeShape(2, (n, n - 1), OR)


def has_star(adj) -> bool:
    a = np.asarray(adj, dtype=bool)
    off = a | np.eye(a.shape[0], dtype=bool)
    return bool(np.any(np.all(off, axis=1)))


@dataclass(frozen=True)
class StarCertificate:
    center: int | None
    edges: tuple  # confirmed out-edges of the center (value 1)
    missing: tuple  # one absent out-edge per vertex (value 0)

    @property
    def value(self) -> int:
        return 1 if self.center is not None else 0


@dataclass
class StarVerdict:
    value: int | None
    certificate: StarCertificate | None
    queries: QueryStats = field(default_factory=QueryStats)
    verdict: ZeroErrorVerdict | None = None

    @property
    def dontknow(self) -> bool:
        return self.value is None


def verify_star_certificate(graph: GraphOracle, cert: StarCertificate) -> bool:
    n = graph.n
    if cert.center is not None:
        want = {(cert.center, j) for j in range(n) if j != cert.center}
        if set(cert.edges) != want:
            return False
        return all(graph.oracle.query(graph.position(i, j)) == 1 for i, j in cert.edges)
    if sorted(i for i, _ in cert.missing) != list(range(n)):
        return False
    return all(graph.oracle.query(graph.position(i, j)) == 0 for i, j in cert.missing)


def star_zero_error(graph: GraphOracle, rng: np.random.Generator, cutoff_multiplier: float = 2.0, restart_factor: float = 10.0) -> StarVerdict:
    shape = star_shape(graph.n)
    v = zero_error_evaluate(shape, graph.oracle, rng, cutoff_multiplier, restart_factor, calibrate(shape, restart_factor))
    if v.dontknow:
        return StarVerdict(None, None, v.queries, v)
    pairs = tuple(graph.unmap(p) for p in v.certificate.indices)
    if v.value == 1:
        cert = StarCertificate(pairs[0][0], pairs, ())
    else:
        cert = StarCertificate(None, (), pairs)
    return StarVerdict(v.value, cert, v.queries, v)


# ---------------------------------------------------------------------------
# Majority with pairwise comparisons
# ---------------------------------------------------------------------------


def majority_exact(oracle: BitOracle, tie_value: int = 1) -> int:
    """Majority of the bits, always correct.

    Blocks of provably equal bits are kept with power-of-two sizes, like the
    digits of a binary counter.  Each new bit carries into the counter: equal
    blocks of the same size merge, unequal ones cancel (equal counts of zeros
    and ones).  Every comparison is one parity query.  The largest surviving
    block outweighs all others together, so one read of its representative
    gives the answer.  If everything cancels the count is an exact tie.
    """
    blocks = {}  # size -> representative index
    for i in range(oracle.N):
        rep, size = i, 1
        while size in blocks:
            other = blocks.pop(size)
            if oracle.xor_query(other, rep):
                rep = None
                break
            size *= 2
        if rep is not None:
            blocks[size] = rep
    if not blocks:
        return int(tie_value)
    return oracle.query(blocks[max(blocks)])


def majority_property(graph: GraphOracle) -> int:
    """More than ``n(n-1)/2`` edges (a tie is not a majority)."""
    return majority_exact(graph.oracle, tie_value=0)


def majority_worst_case(N: int) -> int:
    """``N - e(N) + 1`` queries: comparisons of a full binary counter plus one read."""
    return N - e_of(N) + 1


# ---------------------------------------------------------------------------
# edge existence
# ---------------------------------------------------------------------------


def edge_exists(graph: GraphOracle, rng: np.random.Generator, error: float = EDGE_ERROR) -> int:
    """1 if some edge was found (never wrong), 0 otherwise (wrong with probability <= ``error``)."""
    cutoff = default_cutoff(graph.N, 1, error)
    return int(unknown_t_search(graph.oracle, rng, cutoff_queries=cutoff).found)
