"""Small-error search and the error/queries trade-off.

Two strategies reach one-sided error ``eps``:

* :func:`theorem3_search` -- exact searches for every solution count
  ``1..t0`` (``t0 = ceil(log2(1/eps))``), then ``t0`` fixed-point searches
  that each succeed with probability ``>= 1/2`` once there are more than
  ``t0`` solutions.  About ``2.45 sqrt(N log2(1/eps))`` queries.
* :func:`case2_amplify` -- repeat a ``>= 1/2``-success unknown-count search
  ``ceil(log2(1/eps))`` times.  About ``sqrt(N/t) log(1/eps)`` queries, which
  wins when many solutions are promised.

Both have closed-form failure probabilities, so the error can be evaluated far
below Monte Carlo resolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .amplitude import (
    SearchOutcome,
    SearchSpace,
    default_cutoff,
    exact_plan,
    exact_search,
    fixed_point_plan,
    plan_success,
    run_plan,
    unknown_t_failure,
    unknown_t_search,
)
from .oracle import BitOracle, QueryStats, child_rng, planted_input

__all__ = [
    "TradeoffRecord",
    "Verdict",
    "STEP2_DELTA2",
    "TRADEOFF_CSV_COLUMNS",
    "t0_for",
    "validate_eps",
    "theorem3_search",
    "theorem3_failure",
    "theorem3_worst_queries",
    "theorem3_worst_error",
    "case2_cutoff",
    "case2_amplify",
    "case2_failure",
    "case2_worst_queries",
    "case2_worst_error",
    "choose_method",
    "tradeoff_ratio",
    "run_point",
    "tradeoff_sweep",
    "amplify_one_sided",
]

STEP2_DELTA2 = 0.5
TRADEOFF_CSV_COLUMNS = ("N", "t", "q", "eps_target", "eps_measured", "eps_analytic", "T_mean", "T_max", "trials", "seed")


def validate_eps(eps: float, N: int | None = None) -> None:
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if N is not None and eps < 2.0**-N:
        raise ValueError(f"eps={eps} is below 2^-N for N={N}")


def t0_for(eps: float) -> int:
    """``ceil(log2(1/eps))``, exact for dyadic ``eps``."""
    m, e = math.frexp(eps)
    if m == 0.5:
        return 1 - e
    return math.ceil(-math.log2(eps))


# ---------------------------------------------------------------------------
# exact-then-fixed-point search
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _theorem3_plans(N: int, t0: int):
    exact = tuple(exact_plan(N, tp) for tp in range(1, min(t0, N) + 1))
    fp = fixed_point_plan((t0 + 1) / N, STEP2_DELTA2) if t0 < N else None
    return exact, fp


def theorem3_search(oracle: BitOracle, eps: float, rng: np.random.Generator, space: SearchSpace | None = None) -> SearchOutcome:
    sp = space if space is not None else SearchSpace(oracle)
    validate_eps(eps, sp.n)
    t0 = t0_for(eps)
    exact, fp = _theorem3_plans(sp.n, t0)
    stats = QueryStats()
    for plan in exact:
        out = run_plan(oracle, plan, rng, sp)
        stats.add(out.queries)
        if out.found:
            return SearchOutcome(out.index, stats)
    if fp is not None:
        for _ in range(t0):
            out = run_plan(oracle, fp, rng, sp)
            stats.add(out.queries)
            if out.found:
                return SearchOutcome(out.index, stats)
    return SearchOutcome(None, stats)


def theorem3_failure(N: int, eps: float, ts) -> np.ndarray:
    """Exact failure probability for each true solution count in ``ts``."""
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    lam = ts / N
    exact, fp = _theorem3_plans(N, t0_for(eps))
    fail = np.ones_like(lam)
    for plan in exact:
        fail *= 1 - plan_success(plan, lam)
    if fp is not None:
        fail *= (1 - plan_success(fp, lam)) ** t0_for(eps)
    fail[ts == 0] = 1.0
    return np.clip(fail, 0.0, 1.0)


def theorem3_worst_queries(N: int, eps: float) -> int:
    """Queries when every step runs (the run fails or finds late)."""
    t0 = t0_for(eps)
    exact, fp = _theorem3_plans(N, t0)
    q = sum(p.queries + 1 for p in exact)
    if fp is not None:
        q += t0 * (fp.queries + 1)
    return q


def theorem3_worst_error(N: int, eps: float, t: int = 1) -> float:
    return float(np.max(theorem3_failure(N, eps, np.arange(t, N + 1))))


# ---------------------------------------------------------------------------
# repeated unknown-count search
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def case2_cutoff(N: int, t: int) -> int:
    """Smallest cutoff giving failure ``<= 1/2`` for every count ``>= t``."""
    return default_cutoff(N, t, worst_case=True)


def _reps(eps: float) -> int:
    return t0_for(eps)


def case2_amplify(oracle: BitOracle, t: int, eps: float, rng: np.random.Generator, space: SearchSpace | None = None) -> SearchOutcome:
    sp = space if space is not None else SearchSpace(oracle)
    if t < 1 or t > sp.n:
        raise ValueError("need 1 <= t <= N")
    validate_eps(eps)
    cutoff = case2_cutoff(sp.n, t)
    stats = QueryStats()
    for _ in range(_reps(eps)):
        out = unknown_t_search(oracle, rng, cutoff_queries=cutoff, space=sp)
        stats.add(out.queries)
        if out.found:
            return SearchOutcome(out.index, stats)
    return SearchOutcome(None, stats)


def case2_failure(N: int, t: int, eps: float, ts) -> np.ndarray:
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    f, _ = unknown_t_failure(N, ts, case2_cutoff(N, t))
    return np.clip(f, 0.0, 1.0) ** _reps(eps)


def case2_worst_queries(N: int, t: int, eps: float) -> int:
    return _reps(eps) * case2_cutoff(N, t)


def case2_worst_error(N: int, t: int, eps: float) -> float:
    return float(np.max(case2_failure(N, t, eps, np.arange(t, N + 1))))


def choose_method(N: int, t: int, eps: float) -> str:
    """``"theorem3"`` or ``"case2"``, whichever has the smaller predicted
    worst-case query count.  The prediction for repeated search only uses the
    cutoff at exactly ``t`` solutions to stay cheap."""
    t3 = theorem3_worst_queries(N, eps)
    c2 = _reps(eps) * default_cutoff(N, t)
    return "case2" if c2 < t3 else "theorem3"


# ---------------------------------------------------------------------------
# trade-off experiments
# ---------------------------------------------------------------------------


@dataclass
class TradeoffRecord:
    N: int
    t: int
    q: float
    eps_target: float
    eps_measured: float
    eps_analytic: float
    T_mean: float
    T_max: int
    trials: int
    seed: int
    method: str = ""
    case: int = 0
    T_worst: int = 0
    eps_worst: float = 0.0
    c0: float = 0.0

    def csv_row(self) -> list:
        return [getattr(self, c) for c in TRADEOFF_CSV_COLUMNS]

    def as_dict(self) -> dict:
        return {c: getattr(self, c) for c in TRADEOFF_CSV_COLUMNS}


def tradeoff_ratio(eps: float, T: float, N: int, t: int) -> float:
    """``log2(1/eps) / (T^2/N + T sqrt(t/N))``."""
    return -math.log2(eps) / (T * T / N + T * math.sqrt(t / N))


def run_point(N: int, t: int, eps: float, trials: int, seed: int, method: str | None = None) -> TradeoffRecord:
    """Monte Carlo plus analytic evaluation at one grid point.

    Every trial plants exactly ``t`` solutions afresh.  ``eps_analytic`` is
    the exact failure at ``t``; ``eps_worst`` is the maximum over all counts
    ``>= t`` (the promise).
    """
    if not 1 <= t <= N:
        raise ValueError("need 1 <= t <= N")
    validate_eps(eps, N)
    method = method or choose_method(N, t, eps)
    fails, qs = 0, []
    for i in range(trials):
        rng = child_rng(seed, i)
        oracle = planted_input(N, t, rng)
        if method == "theorem3":
            out = theorem3_search(oracle, eps, rng)
        else:
            out = case2_amplify(oracle, t, eps, rng)
        fails += not out.found
        qs.append(out.queries.total)
    if method == "theorem3":
        eps_a = float(theorem3_failure(N, eps, [t])[0])
        eps_w = theorem3_worst_error(N, eps, t)
        T_w = theorem3_worst_queries(N, eps)
    else:
        eps_a = float(case2_failure(N, t, eps, [t])[0])
        eps_w = case2_worst_error(N, t, eps)
        T_w = case2_worst_queries(N, t, eps)
    return TradeoffRecord(
        N=N,
        t=t,
        q=t / N,
        eps_target=eps,
        eps_measured=fails / trials if trials else float("nan"),
        eps_analytic=eps_a,
        T_mean=float(np.mean(qs)) if qs else float("nan"),
        T_max=int(max(qs)) if qs else 0,
        trials=trials,
        seed=seed,
        method=method,
        case=1 if T_w >= math.sqrt(t * N) else 2,
        T_worst=T_w,
        eps_worst=eps_w,
        c0=T_w - 2.45 * math.sqrt(N * t0_for(eps)),
    )


def tradeoff_sweep(grid, trials: int, seed: int, jobs: int = 1) -> list[TradeoffRecord]:
    """One record per ``(N, t, eps)`` grid point, in grid order.  Point ``i``
    uses seed ``seed + i`` so results do not depend on ``jobs``."""
    grid = [(int(N), int(t), float(eps)) for N, t, eps in grid]
    args = [(N, t, eps, trials, seed + i) for i, (N, t, eps) in enumerate(grid)]
    if jobs > 1 and len(args) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_run_point_args, args))
    return [run_point(*a) for a in args]


def _run_point_args(a):
    return run_point(*a)


# ---------------------------------------------------------------------------
# amplification of one-sided classical algorithms
# ---------------------------------------------------------------------------


@dataclass
class Verdict:
    value: int
    witness: int | None
    method: str
    queries: QueryStats = field(default_factory=QueryStats)


def amplify_one_sided(sample_oracle: BitOracle, eps: float, rng: np.random.Generator, q: float | None = None) -> Verdict:
    """OR over the sample space of a one-sided classical algorithm.

    ``sample_oracle`` holds ``A(x, r)`` for every random string ``r``; each
    query is one call of the algorithm.  With a known acceptance fraction
    ``q`` on 1-inputs, the cheaper of repeated amplitude amplification and
    the exact-then-fixed-point search is used; otherwise the latter.
    """
    S = sample_oracle.N
    validate_eps(eps, S)
    if q is not None:
        if not 0 < q <= 1:
            raise ValueError("q must lie in (0, 1]")
        t = min(S, math.ceil(q * S - 1e-12))
        method = choose_method(S, t, eps)
    else:
        method = "theorem3"
    if method == "case2":
        out = case2_amplify(sample_oracle, t, eps, rng)
    else:
        out = theorem3_search(sample_oracle, eps, rng)
    return Verdict(int(out.found), out.index, method, out.queries)
