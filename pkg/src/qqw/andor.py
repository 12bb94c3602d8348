"""Uniform AND-OR trees and zero-error certificate finding.

A :class:`TreeShape` has ``depth`` levels of alternating gates; level 0 is the
root.  Leaves are numbered in mixed radix, so every subtree covers a
contiguous block of leaf indices.

Certificate finders are written as generators that yield query blocks
``("q", k)`` (quantum) or ``("c", k)`` (classical reads) and return the
certificate entries.  That lets a driver run two finders side by side with
exact per-query interleaving, cut a run off after any number of queries and
bill only what was actually spent.

Quantum subroutines are simulated at the distribution level: the driver
looks at the input through :meth:`BitOracle.simulator_view` to compute outcome
probabilities, and the queries each subroutine would make are charged.

At a node whose value is decided by one child (OR looking for 1, AND looking
for 0) the finder searches for a good child and recurses, restarting if the
recursion overruns ``restart_factor`` times its calibrated expected cost.  At
a node that needs every child, it recurses into all children in order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .amplitude import BBHT_FACTOR, SearchSpace, fixed_point_plan, plan_success, unknown_t_search
from .oracle import BitOracle, QueryStats, child_rng

__all__ = [
    "OR",
    "AND",
    "TreeShape",
    "Certificate",
    "ZeroErrorVerdict",
    "FindResult",
    "CalibrationInfo",
    "INPUT_CLASSES",
    "ANDOR_CSV_COLUMNS",
    "make_theorem9_shape",
    "uniform_shape",
    "eval_tree",
    "eval_partial",
    "classical_evaluate",
    "verify_certificate",
    "forced_value",
    "hard_instance",
    "balanced_leaf_prob",
    "random_instance",
    "make_instance",
    "evaluator_probs",
    "multilevel_grover",
    "find_certificate",
    "find_certificate_A1",
    "find_certificate_A0",
    "dovetail",
    "calibrate",
    "zero_error_evaluate",
    "query_costs",
]

OR, AND = "OR", "AND"
UNKNOWN = -1
EVAL_DELTA2 = 0.1
HANG_BLOCK = 1 << 40
PILOT_RUNS = 32
PILOT_SEED = 0x5EED
INPUT_CLASSES = ("hard1", "hard0", "random_balanced")
ANDOR_CSV_COLUMNS = ("shape_id", "N", "d", "input_class", "verdict", "queries_quantum", "queries_classical", "dontknow", "seed")


# ---------------------------------------------------------------------------
# shapes and evaluation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TreeShape:
    depth: int
    branching: tuple
    root_gate: str = OR

    def __post_init__(self):
        b = tuple(int(x) for x in self.branching)
        object.__setattr__(self, "branching", b)
        if self.depth < 1 or len(b) != self.depth:
            raise ValueError("branching must list one factor per level")
        if any(x < 1 for x in b):
            raise ValueError("branching factors must be positive")
        if self.root_gate not in (OR, AND):
            raise ValueError("root_gate must be OR or AND")

    @property
    def N(self) -> int:
        return math.prod(self.branching)

    @property
    def shape_id(self) -> str:
        return f"{self.root_gate}-" + "x".join(map(str, self.branching))

    def gate(self, level: int) -> str:
        return self.root_gate if level % 2 == 0 else (AND if self.root_gate == OR else OR)

    def size(self, level: int) -> int:
        """Leaves under one node at ``level`` (``level == depth`` is a leaf)."""
        return math.prod(self.branching[level:])

    def subshape(self, level: int) -> "TreeShape":
        return TreeShape(self.depth - level, self.branching[level:], self.gate(level))


def make_theorem9_shape(N: int) -> TreeShape:
    """AND of ``N^(1/3)`` ORs of ``N^(2/3)`` leaves each."""
    c = round(N ** (1 / 3))
    if c**3 != N:
        raise ValueError(f"N={N} is not a perfect cube")
    return TreeShape(2, (c, c * c), AND)


def uniform_shape(d: int, n: int, root_gate: str = OR) -> TreeShape:
    return TreeShape(d, (n,) * d, root_gate)


def _decider(gate: str) -> int:
    """The child value that alone decides ``gate``: 1 for OR, 0 for AND."""
    return 1 if gate == OR else 0


def eval_tree(shape: TreeShape, assignment) -> int:
    a = np.asarray(assignment, dtype=np.int8).ravel()
    if a.shape[0] != shape.N:
        raise ValueError(f"assignment has length {a.shape[0]}, tree has {shape.N} leaves")
    return int(_eval_levels(shape, a)[0][0])


def _eval_levels(shape: TreeShape, a):
    """Three-valued values per level, bottom up; ``levels[l]`` holds the nodes of level ``l``."""
    levels = [None] * (shape.depth + 1)
    cur = np.asarray(a, dtype=np.int8)
    levels[shape.depth] = cur
    for lev in range(shape.depth - 1, -1, -1):
        x = cur.reshape(-1, shape.branching[lev])
        d = _decider(shape.gate(lev))
        has_d = np.any(x == d, axis=1)
        all_nd = np.all(x == 1 - d, axis=1)
        cur = np.where(has_d, d, np.where(all_nd, 1 - d, UNKNOWN)).astype(np.int8)
        levels[lev] = cur
    return levels


def eval_partial(shape: TreeShape, partial) -> int:
    """Value forced by a partial assignment (entries 0, 1 or -1 for unknown);
    -1 if not determined."""
    return int(_eval_levels(shape, partial)[0][0])


def classical_evaluate(shape: TreeShape, oracle: BitOracle) -> int:
    """Read every leaf (``N`` classical queries) and evaluate."""
    return eval_tree(shape, oracle.query_many(np.arange(shape.N)))


@dataclass(frozen=True)
class Certificate:
    entries: tuple
    claimed_value: int

    def __post_init__(self):
        e = tuple(sorted((int(i), int(v)) for i, v in self.entries))
        idx = [i for i, _ in e]
        if len(set(idx)) != len(idx):
            raise ValueError("certificate lists an index twice")
        object.__setattr__(self, "entries", e)

    @property
    def indices(self) -> tuple:
        return tuple(i for i, _ in self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def forced_value(shape: TreeShape, entries) -> int:
    partial = np.full(shape.N, UNKNOWN, dtype=np.int8)
    for i, v in entries:
        partial[i] = v
    return eval_partial(shape, partial)


def verify_certificate(shape: TreeShape, oracle: BitOracle, cert: Certificate) -> bool:
    """Read the certificate's positions (``|cert|`` classical queries), check
    them, and check that they force ``claimed_value``."""
    if not cert.entries:
        return forced_value(shape, ()) == cert.claimed_value
    idx = np.array(cert.indices, dtype=np.int64)
    if idx.min() < 0 or idx.max() >= shape.N:
        return False
    got = oracle.query_many(idx)
    want = np.array([v for _, v in cert.entries], dtype=np.uint8)
    if np.any(got != want):
        return False
    return forced_value(shape, cert.entries) == cert.claimed_value


# ---------------------------------------------------------------------------
# input classes
# ---------------------------------------------------------------------------


def hard_instance(shape: TreeShape, value: int, rng: np.random.Generator) -> np.ndarray:
    """Input with ``f = value`` where every deciding node has exactly one
    child with the deciding value and every other node has all children
    agreeing."""

    def build(level, v):
        n = shape.branching[level]
        decided = v == _decider(shape.gate(level))
        if level == shape.depth - 1:
            out = np.full(n, v if not decided else 1 - v, dtype=np.uint8)
            if decided:
                out[rng.integers(n)] = v
            return out
        if decided:
            special = rng.integers(n)
            return np.concatenate([build(level + 1, v if i == special else 1 - v) for i in range(n)])
        return np.concatenate([build(level + 1, v) for _ in range(n)])

    return build(0, int(value))


def _p_one(shape: TreeShape, p: float) -> float:
    q = p
    for lev in range(shape.depth - 1, -1, -1):
        n = shape.branching[lev]
        q = 1 - (1 - q) ** n if shape.gate(lev) == OR else q**n
    return q


@lru_cache(maxsize=None)
def balanced_leaf_prob(shape: TreeShape) -> float:
    """Leaf probability ``p`` with ``P(f = 1) = 1/2`` for i.i.d. leaves."""
    lo, hi = 0.0, 1.0
    for _ in range(80):
        mid = (lo + hi) / 2
        if _p_one(shape, mid) < 0.5:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def random_instance(shape: TreeShape, rng: np.random.Generator, p: float | None = None) -> np.ndarray:
    p = balanced_leaf_prob(shape) if p is None else p
    return (rng.random(shape.N) < p).astype(np.uint8)


def make_instance(shape: TreeShape, input_class: str, rng: np.random.Generator) -> np.ndarray:
    if input_class == "hard1":
        return hard_instance(shape, 1, rng)
    if input_class == "hard0":
        return hard_instance(shape, 0, rng)
    if input_class == "random_balanced":
        return random_instance(shape, rng)
    raise ValueError(f"unknown input class {input_class!r}")


# ---------------------------------------------------------------------------
# bounded-error evaluators behind the multilevel search
# ---------------------------------------------------------------------------


def _majority_reps(n: int) -> int:
    return 2 * math.ceil(math.log2(n)) + 1 if n > 1 else 1


@lru_cache(maxsize=None)
def _fp_fail(n: int) -> np.ndarray:
    """Failure of the fixed-point search over ``n`` items, indexed by marked count."""
    plan = fixed_point_plan(1 / n, EVAL_DELTA2)
    f = 1 - plan_success(plan, np.arange(n + 1) / n)
    f[0] = 1.0
    f.setflags(write=False)
    return f


@lru_cache(maxsize=None)
def _fp_queries(n: int) -> int:
    return fixed_point_plan(1 / n, EVAL_DELTA2).queries


def _majority_one(p, r: int):
    """P(more than half of ``r`` independent Bernoulli(p) draws are 1)."""
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    for j in range(r // 2 + 1, r + 1):
        out += math.comb(r, j) * p**j * (1 - p) ** (r - j)
    return np.clip(out, 0.0, 1.0)


def _poisson_binomial(p: np.ndarray) -> np.ndarray:
    """Row-wise distribution of the number of successes; ``p`` is ``(rows, n)``."""
    rows, n = p.shape
    dist = np.zeros((rows, n + 1))
    dist[:, 0] = 1.0
    for i in range(n):
        pi = p[:, i : i + 1]
        nxt = dist * (1 - pi)
        nxt[:, 1:] += dist[:, :-1] * pi
        dist = nxt
    return dist


@dataclass(frozen=True)
class QueryCosts:
    eval: tuple  # per level, cost of one bounded-error evaluation of a node there
    search: tuple  # per level, cost of one multilevel search among its children


@lru_cache(maxsize=None)
def query_costs(shape: TreeShape) -> QueryCosts:
    """Queries of the simulated evaluators.

    A node whose children are leaves is evaluated by one fixed-point search
    plus a check (``2l + 1``).  Higher up, each oracle call of the search is a
    majority of ``r`` child evaluations, and the found child is re-evaluated
    once more (``r`` evaluations) to confirm it.
    """
    ev = [0] * shape.depth
    se = [0] * shape.depth
    last = shape.depth - 1
    ev[last] = _fp_queries(shape.branching[last]) + 1
    for lev in range(last - 1, -1, -1):
        n = shape.branching[lev]
        r = _majority_reps(n)
        se[lev] = _fp_queries(n) * r * ev[lev + 1]
        ev[lev] = se[lev] + r * ev[lev + 1]
    return QueryCosts(tuple(ev), tuple(se))


@dataclass
class _LevelProbs:
    p_one: list  # per level, probability that a node's evaluator outputs 1
    p_marked: list  # per level, (nodes, n) probability each child is marked in a search


def evaluator_probs(shape: TreeShape, oracle: BitOracle) -> _LevelProbs:
    """Per-node output distributions of the bounded-error evaluators on this input
    (simulator side; cached per input)."""
    cache = oracle.simulator_cache()
    key = ("andor-probs", shape)
    hit = cache.get(key)
    if hit is not None:
        return hit
    bits = oracle.simulator_view()
    p_one = [None] * shape.depth
    p_marked = [None] * shape.depth
    last = shape.depth - 1
    m = shape.branching[last]
    x = bits.reshape(-1, m).sum(axis=1)
    if shape.gate(last) == OR:
        p_one[last] = 1 - _fp_fail(m)[x]
    else:
        p_one[last] = _fp_fail(m)[m - x]
    for lev in range(last - 1, -1, -1):
        n = shape.branching[lev]
        child = p_one[lev + 1].reshape(-1, n)
        amp1 = _majority_one(child, _majority_reps(n))
        d = _decider(shape.gate(lev))
        pm = amp1 if d == 1 else 1 - amp1
        p_marked[lev] = pm
        found = _poisson_binomial(pm) @ (1 - _fp_fail(n))
        p_one[lev] = found if d == 1 else 1 - found
    out = _LevelProbs(p_one, p_marked)
    cache[key] = out
    return out


def _sample_candidate(pm: np.ndarray, rng: np.random.Generator) -> int:
    """Child returned by a fixed-point search whose marked set is drawn from ``pm``."""
    n = pm.shape[0]
    marked = np.flatnonzero(rng.random(n) < pm)
    k = marked.shape[0]
    if k and rng.random() >= _fp_fail(n)[k]:
        return int(marked[rng.integers(k)])
    rest = np.setdiff1d(np.arange(n), marked, assume_unique=True) if k < n else marked
    return int(rest[rng.integers(rest.shape[0])])


def multilevel_grover(shape: TreeShape, oracle: BitOracle, target_value: int, rng: np.random.Generator):
    """Index of a root child that probably has value ``target_value``.

    ``target_value`` must be the value that decides the root gate.  With one
    level this is plain unknown-count search over the leaves and returns
    ``None`` when nothing was found.  Callers must verify the candidate.
    """
    if target_value != _decider(shape.root_gate):
        raise ValueError(f"a {shape.root_gate} root searches for children of value {_decider(shape.root_gate)}")
    if shape.depth == 1:
        out = unknown_t_search(oracle, rng, space=SearchSpace(oracle, 0, shape.N, target_value))
        return out.index
    pm = evaluator_probs(shape, oracle).p_marked[0][0]
    i = _sample_candidate(pm, rng)
    oracle.charge(query_costs(shape).search[0])
    return i


# ---------------------------------------------------------------------------
# certificate finders (generators of query blocks)
# ---------------------------------------------------------------------------


class _Ctx:
    def __init__(self, shape, oracle, rng, restart_factor):
        self.shape = shape
        self.oracle = oracle
        self.bits = oracle.simulator_view()
        self.rng = rng
        self.restart_factor = restart_factor
        self.costs = query_costs(shape)
        self._probs = None

    @property
    def probs(self):
        if self._probs is None:
            self._probs = evaluator_probs(self.shape, self.oracle)
        return self._probs

    def threshold(self, level: int, target: int) -> int:
        exp = _expected_cost(self.shape.subshape(level), target, self.restart_factor)
        return max(1, math.ceil(self.restart_factor * exp))


def _hang():
    while True:
        yield ("q", HANG_BLOCK)


def _limited(gen, limit):
    """Re-yield ``gen`` for at most ``limit`` queries; returns ``(done, value)``."""
    used = 0
    while True:
        try:
            kind, k = next(gen)
        except StopIteration as stop:
            return True, stop.value
        if used + k > limit:
            if limit > used:
                yield (kind, limit - used)
            gen.close()
            return False, None
        used += k
        yield (kind, k)


def _search_leaves(ctx: _Ctx, lo: int, n: int, target: int):
    """Unknown-count search over ``n`` leaves without cutoff, verifying every candidate."""
    sp = SearchSpace(ctx.oracle, lo, lo + n, target)
    theta = math.asin(math.sqrt(sp.marked_fraction()))
    cap = math.sqrt(n)
    m = 1.0
    rng = ctx.rng
    while True:
        k = int(rng.integers(max(1, math.ceil(m - 1e-12))))
        if k:
            yield ("q", k)
        j = sp.measure(math.sin((2 * k + 1) * theta) ** 2, rng)
        yield ("c", 1)
        if ctx.bits[j] == target:
            return [(j, target)]
        m = min(BBHT_FACTOR * m, cap)


def _find(ctx: _Ctx, level: int, lo: int, target: int):
    shape = ctx.shape
    n = shape.branching[level]
    decided = target == _decider(shape.gate(level))
    if level == shape.depth - 1:
        if decided:
            return (yield from _search_leaves(ctx, lo, n, target))
        yield ("c", n)
        if np.any(ctx.bits[lo : lo + n] != target):
            yield from _hang()
        return [(lo + j, target) for j in range(n)]
    csize = shape.size(level + 1)
    if decided:
        thr = ctx.threshold(level + 1, target)
        node = lo // shape.size(level)
        pm = ctx.probs.p_marked[level][node]
        q = ctx.costs.search[level]
        while True:
            i = _sample_candidate(pm, ctx.rng)
            yield ("q", q)
            done, entries = yield from _limited(_find(ctx, level + 1, lo + i * csize, target), thr)
            if done:
                return entries
    entries = []
    for i in range(n):
        entries += yield from _find(ctx, level + 1, lo + i * csize, target)
    return entries


def _finder(ctx: _Ctx, target: int):
    """Whole-tree finder: search, then classically verify the certificate."""
    entries = yield from _find(ctx, 0, 0, target)
    yield ("c", len(entries))
    return Certificate(tuple(entries), target)


class _Runner:
    __slots__ = ("gen", "blocks", "used", "done", "result")

    def __init__(self, gen):
        self.gen = gen
        self.blocks = []
        self.used = 0
        self.done = False
        self.result = None

    def step(self):
        try:
            kind, k = next(self.gen)
        except StopIteration as stop:
            self.done = True
            self.result = stop.value
            return
        if k:
            self.blocks.append((kind, k))
            self.used += k

    def stats(self, upto: int) -> QueryStats:
        s = QueryStats()
        left = upto
        for kind, k in self.blocks:
            if left <= 0:
                break
            take = min(k, left)
            if kind == "q":
                s.quantum_queries += take
            else:
                s.classical_verification_queries += take
            left -= take
        return s


@dataclass
class FindResult:
    certificate: Certificate | None
    queries: QueryStats = field(default_factory=QueryStats)

    @property
    def status(self) -> str:
        return "certificate" if self.certificate is not None else "nontermination"


def find_certificate(shape: TreeShape, oracle: BitOracle, target: int, rng: np.random.Generator, restart_factor: float = 10.0, budget: int = 10**6) -> FindResult:
    """Run one finder until it returns a verified certificate or spends ``budget`` queries."""
    run = _Runner(_finder(_Ctx(shape, oracle, rng, restart_factor), target))
    while not run.done and run.used < budget:
        run.step()
    if run.done and run.used <= budget:
        stats = run.stats(run.used)
        cert = run.result
        assert verify_certificate(shape, oracle.fork(), cert)
    else:
        stats = run.stats(budget)
        cert = None
    oracle.bill(stats)
    return FindResult(cert, stats)


def find_certificate_A1(shape, oracle, rng, restart_factor=10.0, budget=10**6) -> FindResult:
    return find_certificate(shape, oracle, 1, rng, restart_factor, budget)


def find_certificate_A0(shape, oracle, rng, restart_factor=10.0, budget=10**6) -> FindResult:
    return find_certificate(shape, oracle, 0, rng, restart_factor, budget)


@dataclass
class DovetailResult:
    winner: int | None  # certificate value of the finisher, None if cut off
    certificate: Certificate | None
    finish: int  # combined queries when it stopped
    queries: QueryStats


def dovetail(shape: TreeShape, oracle: BitOracle, rng: np.random.Generator, restart_factor: float = 10.0, cutoff: float = math.inf) -> DovetailResult:
    """Run the 1- and 0-certificate finders with strictly alternating queries
    (the 1-finder first) until one finishes or ``cutoff`` combined queries.

    The 1-finder's ``q``-th query is global query ``2q - 1``, the 0-finder's
    is ``2q``.
    """
    r1, r0 = rng.spawn(2)
    a1 = _Runner(_finder(_Ctx(shape, oracle, r1, restart_factor), 1))
    a0 = _Runner(_finder(_Ctx(shape, oracle, r0, restart_factor), 0))
    lim1 = math.inf if math.isinf(cutoff) else (int(cutoff) + 1) // 2
    lim0 = math.inf if math.isinf(cutoff) else int(cutoff) // 2
    while True:
        if a0.done and a0.used <= lim0:
            lim1 = min(lim1, a0.used)
        if a1.done and a1.used <= lim1:
            lim0 = min(lim0, a1.used - 1)
        act = [r for r, lim in ((a1, lim1), (a0, lim0)) if not r.done and r.used < lim]
        if not act:
            break
        min(act, key=lambda r: r.used).step()
    f1 = 2 * a1.used - 1 if a1.done and a1.used <= lim1 else math.inf
    f0 = 2 * a0.used if a0.done and a0.used <= lim0 else math.inf
    if f1 < f0:
        q1, q0, win = a1.used, a1.used - 1, a1
    elif f0 < f1:
        q1, q0, win = a0.used, a0.used, a0
    else:
        c = int(cutoff)
        stats = a1.stats((c + 1) // 2) + a0.stats(c // 2)
        return DovetailResult(None, None, c, stats)
    stats = a1.stats(q1) + a0.stats(q0)
    cert = win.result
    return DovetailResult(cert.claimed_value, cert, q1 + q0, stats)


# ---------------------------------------------------------------------------
# calibration of expected costs
# ---------------------------------------------------------------------------


def _shape_key(shape: TreeShape):
    return (shape.depth, 0 if shape.root_gate == OR else 1, *shape.branching)


@lru_cache(maxsize=None)
def _expected_cost(sub: TreeShape, target: int, restart_factor: float) -> float:
    """Mean queries of the ``target`` finder on a subtree (without the final
    verification), measured on hard instances with a fixed pilot seed."""
    total = 0
    for r in range(PILOT_RUNS):
        rng = child_rng(PILOT_SEED, *_shape_key(sub), target, r)
        oracle = BitOracle(hard_instance(sub, target, rng))
        run = _Runner(_find(_Ctx(sub, oracle, rng, restart_factor), 0, 0, target))
        while not run.done:
            run.step()
        total += run.used
    return total / PILOT_RUNS


@dataclass(frozen=True)
class CalibrationInfo:
    shape: TreeShape
    restart_factor: float
    class_means: dict
    expected: float
    worst_class: str
    pilot_runs: int = PILOT_RUNS


@lru_cache(maxsize=None)
def calibrate(shape: TreeShape, restart_factor: float = 10.0) -> CalibrationInfo:
    """Pilot estimate of the expected combined cost of the side-by-side run,
    per input class.  The cutoff uses the largest class mean, since the
    algorithm cannot tell which class its input came from."""
    means = {}
    for ci, cls in enumerate(INPUT_CLASSES):
        total = 0
        for r in range(PILOT_RUNS):
            rng = child_rng(PILOT_SEED, *_shape_key(shape), 100 + ci, r)
            oracle = BitOracle(make_instance(shape, cls, rng))
            total += dovetail(shape, oracle, rng, restart_factor).finish
        means[cls] = total / PILOT_RUNS
    worst = max(means, key=means.get)
    return CalibrationInfo(shape, restart_factor, means, means[worst], worst)


@dataclass
class ZeroErrorVerdict:
    value: int | None
    certificate: Certificate | None
    queries: QueryStats
    cutoff: int
    expected: float

    @property
    def dontknow(self) -> bool:
        return self.value is None

    @property
    def tag(self) -> str:
        return "DontKnow" if self.value is None else f"Value({self.value})"


def zero_error_evaluate(
    shape: TreeShape,
    oracle: BitOracle,
    rng: np.random.Generator,
    cutoff_multiplier: float = 2.0,
    restart_factor: float = 10.0,
    calibration: CalibrationInfo | None = None,
) -> ZeroErrorVerdict:
    """Never-wrong evaluation: the value with a verified certificate, or
    "don't know" once the combined run exceeds ``cutoff_multiplier`` times the
    calibrated expected cost."""
    if cutoff_multiplier < 1:
        raise ValueError("cutoff_multiplier must be >= 1")
    cal = calibration or calibrate(shape, restart_factor)
    cutoff = int(cutoff_multiplier * cal.expected)
    res = dovetail(shape, oracle, rng, restart_factor, cutoff)
    if res.certificate is not None and not verify_certificate(shape, oracle.fork(), res.certificate):
        raise AssertionError("finder returned a certificate that does not verify")
    oracle.bill(res.queries)
    return ZeroErrorVerdict(res.winner, res.certificate, res.queries, cutoff, cal.expected)
