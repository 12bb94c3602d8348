"""Brute-force complexity measures of small Boolean functions.

Truth tables list ``f`` in lexicographic input order: entry ``i`` is the value
on the input whose bits, read ``x_0 x_1 ... x_{N-1}``, spell ``i`` in binary.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .kernels import decision_tree_depth_table, mobius_transform, popcount, sensitivity_profile
from .oracle import all_inputs

__all__ = [
    "TruthTable",
    "MAX_DEGREE_N",
    "MAX_DEPTH_N",
    "degree",
    "sensitivity",
    "decision_tree_depth",
    "is_monotone",
    "MonotoneReport",
    "check_monotone_relations",
    "read_truth_table",
    "write_truth_table",
]

MAX_DEGREE_N = 22
MAX_DEPTH_N = 14


@dataclass(frozen=True)
class TruthTable:
    N: int
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.uint8).ravel()
        if v.shape[0] != 1 << self.N:
            raise ValueError(f"truth table for N={self.N} needs {1 << self.N} entries, got {v.shape[0]}")
        if np.any(v > 1):
            raise ValueError("truth table entries must be 0/1")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, N: int, fn, vectorized: bool = False) -> "TruthTable":
        """Tabulate ``fn(bits)`` over all inputs; with ``vectorized`` it gets
        the whole ``(2**N, N)`` input matrix at once."""
        X = all_inputs(N)
        if vectorized:
            vals = np.asarray(fn(X), dtype=np.uint8)
        else:
            vals = np.array([fn(x) for x in X], dtype=np.uint8)
        return cls(N, vals)

    @classmethod
    def OR(cls, N: int) -> "TruthTable":
        v = np.ones(1 << N, dtype=np.uint8)
        v[0] = 0
        return cls(N, v)

    @classmethod
    def AND(cls, N: int) -> "TruthTable":
        v = np.zeros(1 << N, dtype=np.uint8)
        v[-1] = 1
        return cls(N, v)

    @classmethod
    def majority(cls, N: int) -> "TruthTable":
        return cls(N, (2 * popcount(np.arange(1 << N)) > N).astype(np.uint8))

    @classmethod
    def dictator(cls, N: int, i: int = 0) -> "TruthTable":
        return cls.from_function(N, lambda X: X[:, i], vectorized=True)

    @classmethod
    def constant(cls, N: int, c: int) -> "TruthTable":
        return cls(N, np.full(1 << N, c, dtype=np.uint8))


def _cap(f: TruthTable, cap: int, what: str) -> None:
    if f.N > cap:
        raise ValueError(f"{what} is limited to N <= {cap}")


def degree(f: TruthTable) -> int:
    """Degree of the unique multilinear polynomial equal to ``f`` (exact integers)."""
    _cap(f, MAX_DEGREE_N, "degree")
    coef = mobius_transform(f.values)
    nz = np.flatnonzero(coef)
    return int(popcount(nz).max()) if nz.size else 0


def sensitivity(f: TruthTable) -> int:
    _cap(f, MAX_DEGREE_N, "sensitivity")
    return int(sensitivity_profile(f.values).max())


def decision_tree_depth(f: TruthTable) -> int:
    """Optimal deterministic query depth by minimax over all restrictions."""
    _cap(f, MAX_DEPTH_N, "decision_tree_depth")
    return decision_tree_depth_table(f.values, f.N)


def is_monotone(f: TruthTable) -> bool:
    """``f(x) <= f(x + e_i)`` for every covering pair."""
    v = f.values
    idx = np.arange(v.shape[0])
    for b in range(f.N):
        low = idx[(idx >> b) & 1 == 0]
        if np.any(v[low] > v[low | (1 << b)]):
            return False
    return True


@dataclass(frozen=True)
class MonotoneReport:
    D: int
    s: int
    deg: int
    monotone: bool
    D_le_s_squared: bool
    deg_ge_s: bool


def check_monotone_relations(f: TruthTable) -> MonotoneReport:
    _cap(f, MAX_DEPTH_N, "check_monotone_relations")
    mono = is_monotone(f)
    if not mono:
        raise ValueError("function is not monotone")
    D, s, d = decision_tree_depth(f), sensitivity(f), degree(f)
    return MonotoneReport(D, s, d, mono, D <= s * s, d >= s)


def read_truth_table(path) -> TruthTable:
    """First line ``N``; second line ``2**N`` characters of 0/1."""
    lines = Path(path).read_text(encoding="utf-8").split()
    if len(lines) < 2:
        raise ValueError("truth table file needs two lines")
    N = int(lines[0])
    s = lines[1]
    if set(s) - {"0", "1"}:
        raise ValueError("truth table line must be 0/1 characters")
    return TruthTable(N, np.frombuffer(s.encode(), dtype=np.uint8) - ord("0"))


def write_truth_table(f: TruthTable, path) -> None:
    Path(path).write_text(f"{f.N}\n{''.join(map(str, f.values.tolist()))}\n", encoding="utf-8")
