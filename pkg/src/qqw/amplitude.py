"""Two-dimensional simulation of Grover-type search.

For a search space of ``n`` items with ``t`` marked, every circuit built from
the uniform superposition, reflections and phase oracles stays in the plane
spanned by the normalised marked and unmarked superpositions.  A run is then a
product of 2x2 matrices, and its outcome distribution is "uniform over marked
with probability p, uniform over unmarked otherwise".

A generalised iteration with target phase ``beta`` costs one query when
``beta`` is 0 or pi (the usual |-> ancilla trick) and two queries otherwise
(compute the bit, rotate, uncompute).

Every search primitive verifies the candidate it measures with one classical
read, so a returned index is always a genuine solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .kernels import bbht_failure, bbht_schedule
from .oracle import BitOracle, QueryStats

__all__ = [
    "RotationState",
    "SearchOutcome",
    "SearchSpace",
    "SearchPlan",
    "grover_success_prob",
    "rotation_state",
    "ordinary_plan",
    "exact_plan",
    "fixed_point_plan",
    "plan_success",
    "fixed_iteration_search",
    "exact_search",
    "exact_search_query_bound",
    "fixed_point_search",
    "run_plan",
    "unknown_t_search",
    "unknown_t_failure",
    "default_cutoff",
    "BBHT_FACTOR",
    "PROB_ONE_TOL",
]

BBHT_FACTOR = 6 / 5
PROB_ONE_TOL = 1e-9


def _clamp(p):
    return np.clip(p, 0.0, 1.0)


def _theta(lam):
    return np.arcsin(np.sqrt(_clamp(lam)))


@dataclass(frozen=True)
class RotationState:
    theta: float
    k: int
    success_prob: float


def grover_success_prob(N: int, t: int, k: int) -> float:
    """``sin^2((2k+1) arcsin sqrt(t/N))``."""
    if N < 1 or k < 0:
        raise ValueError("need N >= 1 and k >= 0")
    if not 0 <= t <= N:
        raise ValueError(f"t={t} outside [0, {N}]")
    if t == 0:
        return 0.0
    theta = math.asin(math.sqrt(t / N))
    return float(min(1.0, max(0.0, math.sin((2 * k + 1) * theta) ** 2)))


def rotation_state(N: int, t: int, k: int) -> RotationState:
    theta = math.asin(math.sqrt(t / N)) if t else 0.0
    return RotationState(theta, k, grover_success_prob(N, t, k))


# ---------------------------------------------------------------------------
# plans: sequences of (generalised) Grover iterations
# ---------------------------------------------------------------------------


def _is_cheap_phase(beta: float) -> bool:
    r = math.remainder(beta, math.pi)
    return abs(r) < 1e-12


@dataclass(frozen=True)
class SearchPlan:
    """``ordinary`` standard iterations followed by generalised ones.

    Each generalised iteration is ``-S_s(phase_s) S_t(phase_t)`` with
    ``S_t(b) = I - (1 - e^{ib})|t><t|`` and ``S_s(a) = I - (1 - e^{ia})|s><s|``.
    """

    ordinary: int = 0
    phases: tuple = ()
    label: str = ""

    @cached_property
    def queries(self) -> int:
        q = self.ordinary
        for _, beta in self.phases:
            q += 1 if _is_cheap_phase(beta) else 2
        return q


def ordinary_plan(k: int) -> SearchPlan:
    return SearchPlan(ordinary=int(k), label=f"grover[{k}]")


def plan_success(plan: SearchPlan, lam) -> np.ndarray:
    """Probability of measuring a marked item after ``plan``, for each
    marked fraction in ``lam`` (vectorised)."""
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    theta = _theta(lam)
    ang = (2 * plan.ordinary + 1) * theta
    bad = np.cos(ang).astype(complex)
    good = np.sin(ang).astype(complex)
    if plan.phases:
        sc, ss = np.sqrt(_clamp(1 - lam)), np.sqrt(_clamp(lam))
        for phase_s, phase_t in plan.phases:
            good = good * np.exp(1j * phase_t)
            overlap = sc * bad + ss * good
            f = (1 - np.exp(1j * phase_s)) * overlap
            bad, good = -(bad - f * sc), -(good - f * ss)
    return _clamp(np.abs(good) ** 2)


@lru_cache(maxsize=None)
def exact_plan(N: int, t: int) -> SearchPlan:
    """Plan that reaches a marked item with certainty when exactly ``t`` of
    ``N`` items are marked: ``floor(pi/(4 theta) - 1/2)`` ordinary iterations
    and at most one phase-adjusted final iteration."""
    if not 1 <= t <= N:
        raise ValueError(f"exact search needs 1 <= t <= N, got t={t}, N={N}")
    lam = t / N
    theta = math.asin(math.sqrt(lam))
    k0 = max(0, math.floor(math.pi / (4 * theta) - 0.5))
    while (2 * k0 + 3) * theta <= math.pi / 2 + 1e-13:
        k0 += 1
    while k0 > 0 and (2 * k0 + 1) * theta > math.pi / 2 + 1e-13:
        k0 -= 1
    a = (2 * k0 + 1) * theta
    if abs(a - math.pi / 2) < 1e-12:
        return SearchPlan(ordinary=k0, label=f"exact[{t}/{N}]")
    # choose the target phase so the final reflection about |s> can zero the
    # unmarked amplitude exactly, then solve for the reflection phase
    cos_beta = -math.cos(a) * math.cos(2 * theta) / (math.sin(2 * theta) * math.sin(a))
    beta = math.acos(min(1.0, max(-1.0, cos_beta)))
    c = math.cos(theta) * math.cos(a) + complex(math.cos(beta), math.sin(beta)) * math.sin(theta) * math.sin(a)
    z = math.cos(a) / (c * math.cos(theta))
    alpha = float(np.angle(1 - z))
    return SearchPlan(ordinary=k0, phases=((alpha, beta),), label=f"exact[{t}/{N}]")


def exact_search_query_bound(N: int, t: int) -> int:
    """Advertised ceiling ``ceil(pi / (4 arcsin sqrt(t/N))) + 2`` (incl. verification)."""
    return math.ceil(math.pi / (4 * math.asin(math.sqrt(t / N)))) + 2


@lru_cache(maxsize=None)
def fixed_point_plan(w: float, delta2: float) -> SearchPlan:
    """Fixed-point search: success ``>= 1 - delta2`` whenever the marked
    fraction is at least ``w``, whatever its exact value.

    Uses the Chebyshev phase schedule with ``L = 2l + 1`` the smallest odd
    integer for which the guaranteed band reaches down to ``w``.
    """
    if not 0 < w <= 1:
        raise ValueError("w must lie in (0, 1]")
    if not 0 < delta2 < 1:
        raise ValueError("delta2 must lie in (0, 1)")
    delta = math.sqrt(delta2)
    if w >= 1.0:
        return SearchPlan(label="fixed-point[trivial]")
    num = math.acosh(1 / delta)
    den = math.acosh(1 / math.sqrt(1 - w))
    L = max(1, math.ceil(num / den - 1e-12))
    if L % 2 == 0:
        L += 1
    l = (L - 1) // 2
    gamma_inv = math.cosh(num / L)
    s = math.sqrt(max(0.0, 1 - 1 / gamma_inv**2))
    alphas = [2 * math.atan2(1.0, math.tan(2 * math.pi * j / L) * s) for j in range(1, l + 1)]
    betas = [-a for a in reversed(alphas)]
    # reflection-about-|s> phases enter with the opposite sign in our convention
    phases = tuple((-a, b) for a, b in zip(alphas, betas))
    return SearchPlan(phases=phases, label=f"fixed-point[L={L}]")


# ---------------------------------------------------------------------------
# sampling against an oracle
# ---------------------------------------------------------------------------


@dataclass
class SearchOutcome:
    index: int | None
    queries: QueryStats = field(default_factory=QueryStats)

    @property
    def found(self) -> bool:
        return self.index is not None


class SearchSpace:
    """Positions ``[lo, hi)`` of an oracle; items equal to ``target`` are marked."""

    __slots__ = ("oracle", "lo", "hi", "target")

    def __init__(self, oracle: BitOracle, lo: int = 0, hi: int | None = None, target: int = 1):
        self.oracle = oracle
        self.lo = lo
        self.hi = oracle.N if hi is None else hi
        self.target = target

    @property
    def n(self) -> int:
        return self.hi - self.lo

    def _marked(self) -> np.ndarray:
        return self.oracle.simulator_marked(self.lo, self.hi, self.target)

    def marked_fraction(self) -> float:
        """Simulator-side quantity; feeds outcome probabilities only."""
        return len(self._marked()) / self.n

    def measure(self, p_marked: float, rng: np.random.Generator) -> int:
        """Sample the measured position given the marked-subspace weight."""
        marked = self._marked()
        t = len(marked)
        if t and (t == self.n or rng.random() < p_marked):
            return int(marked[rng.integers(t)])
        # uniform over unmarked positions by rejection
        while True:
            j = self.lo + int(rng.integers(self.n))
            if t == 0 or self.oracle.simulator_view()[j] != self.target:
                return j

    def verify(self, j: int) -> bool:
        return self.oracle.query(j) == self.target


def _space(oracle, space):
    return space if space is not None else SearchSpace(oracle)


@lru_cache(maxsize=65536)
def _success_scalar(plan: SearchPlan, lam: float) -> float:
    return float(plan_success(plan, lam)[0])


def run_plan(oracle: BitOracle, plan: SearchPlan, rng: np.random.Generator, space: SearchSpace | None = None) -> SearchOutcome:
    """Run ``plan``, measure, verify the candidate with one classical read."""
    sp = _space(oracle, space)
    p = _success_scalar(plan, sp.marked_fraction())
    j = sp.measure(p, rng)
    sp.oracle.charge(plan.queries)
    ok = sp.verify(j)
    return SearchOutcome(j if ok else None, QueryStats(plan.queries, 1))


def fixed_iteration_search(oracle: BitOracle, k: int, rng: np.random.Generator, space: SearchSpace | None = None) -> SearchOutcome:
    if k < 0:
        raise ValueError("k must be >= 0")
    return run_plan(oracle, ordinary_plan(k), rng, space)


def exact_search(oracle: BitOracle, t_known: int, rng: np.random.Generator, space: SearchSpace | None = None) -> SearchOutcome:
    """Search that cannot fail when exactly ``t_known`` items are marked."""
    if t_known < 1:
        raise ValueError("exact search needs t_known >= 1")
    sp = _space(oracle, space)
    return run_plan(oracle, exact_plan(sp.n, t_known), rng, sp)


def fixed_point_search(oracle: BitOracle, w: float, rng: np.random.Generator, delta2: float = 0.5, space: SearchSpace | None = None) -> SearchOutcome:
    return run_plan(oracle, fixed_point_plan(w, delta2), rng, space)


# ---------------------------------------------------------------------------
# unknown number of solutions
# ---------------------------------------------------------------------------


def _schedule_len(cutoff: int) -> int:
    return int(cutoff) + 2


@lru_cache(maxsize=None)
def _sizes(N: int, factor: float, cutoff: int) -> np.ndarray:
    s = bbht_schedule(N, factor, _schedule_len(cutoff))
    s.setflags(write=False)
    return s


def unknown_t_failure(N: int, ts, cutoff: int, factor: float = BBHT_FACTOR):
    """Exact (failure probability, mean queries) of :func:`unknown_t_search`
    for each solution count in ``ts``."""
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    thetas = _theta(ts / N)
    return bbht_failure(thetas, _sizes(N, factor, int(cutoff)), int(cutoff))


def _min_cutoff(N, ts, target, factor):
    def bad(c):
        return float(np.max(unknown_t_failure(N, ts, c, factor)[0])) > target

    hi = max(2, math.ceil(math.sqrt(N / max(1, min(ts)))))
    while bad(hi):
        hi *= 2
    lo = 0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if bad(mid):
            lo = mid
        else:
            hi = mid
    return hi


@lru_cache(maxsize=None)
def default_cutoff(N: int, t_min: int = 1, target_failure: float = 0.5, factor: float = BBHT_FACTOR, worst_case: bool = False) -> int:
    """Smallest query cutoff with failure ``<= target_failure`` at ``t_min``
    solutions (or at every count ``>= t_min`` when ``worst_case``)."""
    ts = np.arange(t_min, N + 1) if worst_case else np.array([t_min])
    return _min_cutoff(N, ts, target_failure, factor)


def unknown_t_search(
    oracle: BitOracle,
    rng: np.random.Generator,
    schedule_factor: float = BBHT_FACTOR,
    cutoff_queries: int | None = None,
    space: SearchSpace | None = None,
) -> SearchOutcome:
    """Search with an unknown number of solutions.

    Round ``r`` draws ``k`` uniformly from ``[0, ceil(m_r))``, runs ``k``
    iterations and verifies the measured item; ``m`` grows by
    ``schedule_factor`` per round up to ``sqrt(n)``.  A round that would push
    the total past ``cutoff_queries`` is not started.
    """
    if schedule_factor <= 1:
        raise ValueError("schedule_factor must exceed 1")
    sp = _space(oracle, space)
    if cutoff_queries is None:
        cutoff_queries = default_cutoff(sp.n, factor=schedule_factor)
    if cutoff_queries < 1:
        raise ValueError("cutoff_queries must be >= 1")
    sizes = _sizes(sp.n, schedule_factor, int(cutoff_queries))
    lam = sp.marked_fraction()
    theta = math.asin(math.sqrt(lam))
    stats = QueryStats()
    used = 0
    for M in sizes:
        k = int(rng.integers(M))
        if used + k + 1 > cutoff_queries:
            break
        p = math.sin((2 * k + 1) * theta) ** 2
        j = sp.measure(p, rng)
        sp.oracle.charge(k)
        used += k + 1
        stats.quantum_queries += k
        stats.classical_verification_queries += 1
        if sp.verify(j):
            return SearchOutcome(j, stats)
    return SearchOutcome(None, stats)
