"""Two-party certificate finding and the Disjointness reduction.

Alice holds ``x``, Bob holds ``y``; together they want a set ``c`` of indices
whose values ``(x_i, y_i)`` force ``g(x AND y)`` for an AND-OR formula ``g``.
Alice runs the zero-error certificate finder on ``z = x AND y`` and routes
every query to Bob: she sends the index register and the target qubit, he
applies his bit and sends both back.  One query therefore costs
``2 * (ceil(log2 N) + 1)`` qubits.

Messages are simulated at the accounting level: the channel counts qubits and
optionally logs one record per message.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .andor import TreeShape, Certificate, calibrate, eval_partial, make_theorem9_shape, zero_error_evaluate
from .oracle import BitOracle, QueryStats

__all__ = [
    "Channel",
    "CertRelationInstance",
    "DistributedResult",
    "COMM_CSV_COLUMNS",
    "qubits_per_message",
    "distributed_certificate",
    "verify_relation",
    "disjointness_shape",
    "disjointness_via_R",
    "DisjointnessResult",
    "write_transcript",
]

COMM_CSV_COLUMNS = ("N", "k", "instance_class", "output", "qubits_sent", "queries", "seed")


def qubits_per_message(N: int) -> int:
    """Index register plus target qubit."""
    return max(0, math.ceil(math.log2(N))) + 1


@dataclass
class Channel:
    N: int
    qubits_sent: int = 0
    classical_bits_sent: int = 0
    record: bool = False
    transcript: list = field(default_factory=list)

    def route_queries(self, k: int) -> None:
        """``k`` queries, each a round trip Alice -> Bob -> Alice."""
        if k < 0:
            raise ValueError("query count must be >= 0")
        m = qubits_per_message(self.N)
        if self.record:
            cum = self.qubits_sent
            for _ in range(k):
                cum += m
                self.transcript.append(("A->B", m, cum))
                cum += m
                self.transcript.append(("B->A", m, cum))
        self.qubits_sent += 2 * m * k

    def send_bits(self, direction: str, nbits: int) -> None:
        self.classical_bits_sent += nbits
        if self.record:
            self.transcript.append((direction, nbits, self.qubits_sent))


@dataclass(frozen=True)
class CertRelationInstance:
    x: np.ndarray
    y: np.ndarray
    shape: TreeShape

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.uint8).ravel()
        y = np.asarray(self.y, dtype=np.uint8).ravel()
        if x.shape[0] != self.shape.N or y.shape[0] != self.shape.N:
            raise ValueError("x and y must both have one bit per leaf")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def z(self) -> np.ndarray:
        return self.x & self.y


@dataclass
class DistributedResult:
    c: tuple
    value: int
    certificate: Certificate
    queries: QueryStats
    channel: Channel
    attempts: int


def distributed_certificate(
    instance: CertRelationInstance,
    rng: np.random.Generator,
    channel: Channel | None = None,
    cutoff_multiplier: float = 2.0,
    restart_factor: float = 10.0,
    max_attempts: int = 1000,
) -> DistributedResult:
    """Index set ``c`` with ``(x, y, c)`` in the certificate relation.

    Runs the zero-error evaluator on ``x AND y``; a "don't know" is retried,
    so the output is always correct and only the cost is random.
    """
    shape = instance.shape
    ch = channel if channel is not None else Channel(shape.N)
    cal = calibrate(shape, restart_factor)
    oracle = BitOracle(instance.z)
    total = QueryStats()
    for attempt in range(1, max_attempts + 1):
        v = zero_error_evaluate(shape, oracle.fork(), rng, cutoff_multiplier, restart_factor, cal)
        total.add(v.queries)
        ch.route_queries(v.queries.total)
        if not v.dontknow:
            return DistributedResult(v.certificate.indices, v.value, v.certificate, total, ch, attempt)
    raise RuntimeError(f"no certificate after {max_attempts} attempts")


def verify_relation(x, y, c, shape: TreeShape) -> bool:
    """Whether the values ``(x_i, y_i)``, ``i`` in ``c``, determine ``g(x AND y)``."""
    z = np.asarray(x, dtype=np.uint8) & np.asarray(y, dtype=np.uint8)
    if z.shape[0] != shape.N:
        raise ValueError("input length does not match the shape")
    partial = np.full(shape.N, -1, dtype=np.int8)
    idx = np.asarray(list(c), dtype=np.int64)
    if idx.size:
        partial[idx] = z[idx]
    return eval_partial(shape, partial) != -1


# ---------------------------------------------------------------------------
# Disjointness from certificates
# ---------------------------------------------------------------------------


def disjointness_shape(k: int, N: int | None = None) -> TreeShape:
    """AND of ``c`` ORs of ``c^2`` leaves for the reduction on ``k`` bits.

    Without ``N`` the shape is the one filled exactly, ``k = c(c^2 - 1)``.
    With ``N = c^3`` given, ``k`` only has to split into ``c`` blocks of at
    most ``c^2 - 1`` bits; the spare leaves are zero for both parties.
    """
    if N is None:
        c = 1
        while c * (c * c - 1) < k:
            c += 1
        if c * (c * c - 1) != k:
            raise ValueError(f"k={k} is not of the form c*(c^2 - 1)")
        return make_theorem9_shape(c**3)
    shape = make_theorem9_shape(N)
    c, width = shape.branching
    if k < 1 or k % c or k // c > width - 1:
        raise ValueError(f"k={k} does not fit {c} blocks of at most {width - 1} bits")
    return shape


@dataclass
class DisjointnessResult:
    output: int
    c: tuple
    queries: QueryStats
    qubits_sent: int
    attempts: int


def disjointness_via_R(
    x, y, rng: np.random.Generator, N: int | None = None, channel: Channel | None = None, cutoff_multiplier: float = 2.0
) -> DisjointnessResult:
    """One-sided test for a common 1 in ``x`` and ``y``.

    Each block of bits gets a dummy 1 appended for both parties,
    then both permute the block with the same public-coin permutation.  The
    formula is then always 1 and any 1-certificate picks one common 1 per
    block; the answer is 1 iff one of those is not a dummy.  Disjoint inputs
    always give 0; intersecting ones give 1 with probability at least 1/2.
    """
    x = np.asarray(x, dtype=np.uint8).ravel()
    y = np.asarray(y, dtype=np.uint8).ravel()
    if x.shape != y.shape:
        raise ValueError("x and y must have the same length")
    k = x.shape[0]
    shape = disjointness_shape(k, N)
    blocks, width = shape.branching
    per = k // blocks
    public = rng.spawn(1)[0]
    xs = np.zeros((blocks, width), dtype=np.uint8)
    ys = np.zeros((blocks, width), dtype=np.uint8)
    xs[:, :per] = x.reshape(blocks, per)
    ys[:, :per] = y.reshape(blocks, per)
    xs[:, -1] = ys[:, -1] = 1
    dummy = np.zeros((blocks, width), dtype=bool)
    dummy[:, -1] = True
    for b in range(blocks):
        perm = public.permutation(width)
        xs[b], ys[b], dummy[b] = xs[b, perm], ys[b, perm], dummy[b, perm]
    inst = CertRelationInstance(xs.ravel(), ys.ravel(), shape)
    res = distributed_certificate(inst, rng, channel, cutoff_multiplier)
    flat_dummy = dummy.ravel()
    z = inst.z
    out = int(any(z[i] and not flat_dummy[i] for i in res.c))
    return DisjointnessResult(out, res.c, res.queries, res.channel.qubits_sent, res.attempts)


def write_transcript(channel: Channel, path) -> None:
    """One ``direction payload cumulative`` record per line."""
    lines = [f"{d}\t{p}\t{c}" for d, p, c in channel.transcript]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
