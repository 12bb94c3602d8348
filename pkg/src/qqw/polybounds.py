"""Polynomial-method toolkit: Chebyshev evaluation, growth inequalities,
symmetrisation of acceptance tables, degree detection and the error lower
bound for small-error search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernels import popcount

__all__ = [
    "UnivariatePoly",
    "WeightProfile",
    "BoundParams",
    "chebyshev_eval",
    "chebyshev_log_abs",
    "paturi_check",
    "paturi_grid",
    "extremal_check",
    "random_bounded_interpolant",
    "sup_norm_unit",
    "symmetrize",
    "degree_via_differences",
    "theorem2_bound",
    "theoremA5_bound",
    "b_floor",
    "bound_curve",
    "BOUND_CSV_COLUMNS",
]

SEARCH_CONSTANT = 2.45
BOUND_CSV_COLUMNS = ("N", "t", "T_or_d", "bound_value", "a", "b")


@dataclass(frozen=True)
class UnivariatePoly:
    """Coefficients in ascending degree; trailing zeros are dropped."""

    coefficients: tuple

    def __init__(self, coefficients):
        c = [float(v) for v in coefficients]
        while len(c) > 1 and c[-1] == 0.0:
            c.pop()
        object.__setattr__(self, "coefficients", tuple(c) if c else (0.0,))

    @property
    def degree(self) -> int:
        if len(self.coefficients) == 1 and self.coefficients[0] == 0.0:
            return 0
        return len(self.coefficients) - 1

    def __call__(self, x):
        return np.polynomial.polynomial.polyval(x, self.coefficients)

    @classmethod
    def chebyshev(cls, d: int) -> "UnivariatePoly":
        return cls(np.polynomial.chebyshev.cheb2poly([0] * d + [1]))


@dataclass(frozen=True)
class WeightProfile:
    values: np.ndarray

    @property
    def N(self) -> int:
        return len(self.values) - 1


@dataclass(frozen=True)
class BoundParams:
    a: float = 1.0
    b: float = 1 / (4 * SEARCH_CONSTANT**2)

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError("bound constants a and b must be positive")


def b_floor() -> float:
    """Smallest exponent constant compatible with the 2.45 sqrt(N log(1/eps)) upper bound."""
    return 1 / (4 * SEARCH_CONSTANT**2)


# ---------------------------------------------------------------------------
# Chebyshev polynomials
# ---------------------------------------------------------------------------


def _cheb_recurrence(d: int, x):
    x = np.asarray(x, dtype=float)
    if d == 0:
        return np.ones_like(x)
    prev, cur = np.ones_like(x), x.copy()
    for _ in range(d - 1):
        prev, cur = cur, 2 * x * cur - prev
    return cur


def _cheb_closed(d: int, x):
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    r = np.sqrt(ax * ax - 1)
    val = 0.5 * ((ax + r) ** d + (ax - r) ** d)
    return np.where(x < 0, (-1) ** d * val, val)


def chebyshev_eval(d: int, x, method: str = "auto"):
    """``T_d(x)``.  ``auto`` uses the recurrence on ``[-1, 1]`` and the
    ``(x + sqrt(x^2-1))^d`` closed form outside."""
    if d < 0:
        raise ValueError("degree must be >= 0")
    if method == "recurrence":
        out = _cheb_recurrence(d, x)
    elif method == "closed":
        xa = np.asarray(x, dtype=float)
        if np.any(np.abs(xa) < 1):
            raise ValueError("closed form needs |x| >= 1")
        out = _cheb_closed(d, xa)
    elif method == "auto":
        xa = np.asarray(x, dtype=float)
        inside = np.abs(xa) <= 1
        out = np.where(inside, _cheb_recurrence(d, np.clip(xa, -1, 1)), _cheb_closed(d, np.where(inside, 1.0, xa)))
    else:
        raise ValueError(f"unknown method {method!r}")
    return float(out) if np.ndim(out) == 0 else out


def chebyshev_log_abs(d: int, x: float) -> float:
    """``log |T_d(x)|`` for ``|x| >= 1`` without overflow."""
    ax = abs(x)
    if ax < 1:
        raise ValueError("log form needs |x| >= 1")
    a = math.acosh(ax)
    # cosh(d a) = e^{da} (1 + e^{-2da}) / 2
    return d * a + math.log1p(math.exp(-2 * d * a)) - math.log(2)


def paturi_check(d: int, mu: float):
    """``T_d(1 + mu) <= exp(2 d sqrt(2 mu + mu^2))``, compared in log space.

    Returns ``(log_lhs, log_rhs, holds)``.
    """
    if mu < 0:
        raise ValueError("mu must be >= 0")
    lhs = chebyshev_log_abs(d, 1 + mu)
    rhs = 2 * d * math.sqrt(2 * mu + mu * mu)
    return lhs, rhs, lhs <= rhs + math.log1p(1e-12)


def paturi_grid(d_max: int = 200, mu_max: float = 3.0, mu_step: float = 0.01):
    """All grid points ``d in 1..d_max``, ``mu in [0, mu_max]``; returns the
    number of points and the list of failures."""
    mus = np.round(np.arange(0, round(mu_max / mu_step) + 1) * mu_step, 12)
    fails = []
    for d in range(1, d_max + 1):
        for mu in mus:
            _, _, ok = paturi_check(d, float(mu))
            if not ok:
                fails.append((d, float(mu)))
    return d_max * len(mus), fails


# ---------------------------------------------------------------------------
# growth of polynomials bounded on [-1, 1]
# ---------------------------------------------------------------------------


def sup_norm_unit(q: UnivariatePoly) -> float:
    """Exact ``max |q|`` on ``[-1, 1]``: endpoints plus real critical points."""
    c = np.asarray(q.coefficients)
    pts = [-1.0, 1.0]
    if len(c) > 2:
        roots = np.polynomial.polynomial.polyroots(np.polynomial.polynomial.polyder(c))
        pts += [r.real for r in roots if abs(r.imag) < 1e-9 and -1 <= r.real <= 1]
    return float(np.max(np.abs(q(np.array(pts)))))


def extremal_check(q: UnivariatePoly, xs, grid_points: int = 20001) -> bool:
    """``|q(x)| <= |T_d(x)|`` at every ``x`` in ``xs`` (all ``>= 1``), where
    ``d = deg q``.  Requires ``|q| <= 1`` on ``[-1, 1]``."""
    grid = np.linspace(-1, 1, grid_points)
    if np.max(np.abs(q(grid))) > 1 + 1e-9:
        raise ValueError("polynomial exceeds 1 in absolute value on [-1, 1]")
    xs = np.asarray(xs, dtype=float)
    if np.any(xs < 1):
        raise ValueError("sample points must be >= 1")
    bound = np.abs(chebyshev_eval(q.degree, xs))
    return bool(np.all(np.abs(q(xs)) <= bound + 1e-9))


def random_bounded_interpolant(d: int, rng: np.random.Generator) -> UnivariatePoly:
    """Interpolate uniform ``[-1, 1]`` values at the ``d+1`` extremal points
    ``cos(k pi / d)``, then rescale by the true sup norm on ``[-1, 1]`` so the
    result is bounded by 1 there (interpolants may overshoot between nodes)."""
    nodes = np.cos(np.pi * np.arange(d + 1) / d) if d else np.array([1.0])
    vals = rng.uniform(-1, 1, size=d + 1)
    coef = np.polynomial.polynomial.polyfit(nodes, vals, d)
    q = UnivariatePoly(coef)
    s = sup_norm_unit(q)
    if s > 1:
        q = UnivariatePoly(np.asarray(q.coefficients) / s)
    return q


# ---------------------------------------------------------------------------
# symmetrisation and degree detection
# ---------------------------------------------------------------------------


def symmetrize(table) -> WeightProfile:
    """Average an acceptance table (length ``2**N``) over inputs of equal weight."""
    table = np.asarray(table, dtype=float).ravel()
    size = table.shape[0]
    N = size.bit_length() - 1
    if size < 1 or (1 << N) != size:
        raise ValueError("acceptance table must have length 2**N")
    w = popcount(np.arange(size))
    sums = np.bincount(w, weights=table, minlength=N + 1)
    counts = np.bincount(w, minlength=N + 1)
    return WeightProfile(sums / counts)


def degree_via_differences(profile, rel_tol: float = 1e-7) -> int:
    """Smallest ``d`` such that every finite difference of order ``> d``
    vanishes within ``rel_tol * max |Q|``."""
    q = np.asarray(profile.values if isinstance(profile, WeightProfile) else profile, dtype=float)
    scale = float(np.max(np.abs(q))) if q.size else 0.0
    if scale == 0.0:
        return 0
    tol = rel_tol * scale
    diffs = [q]
    for _ in range(len(q) - 1):
        diffs.append(np.diff(diffs[-1]))
    for d in range(len(q)):
        if all(np.all(np.abs(diffs[o]) <= tol) for o in range(d + 1, len(q))):
            return d
    return len(q) - 1


# ---------------------------------------------------------------------------
# error lower bounds
# ---------------------------------------------------------------------------


def _bound_exponent(N, t, lin, quad, x, b):
    m = N - t
    return -quad * b * x * x / m - lin * x * math.sqrt(t * N / (m * m))


def theorem2_bound(N: int, t: int, T: float, params: BoundParams | None = None):
    """Lower bound on the one-sided error of any ``T``-query search that must
    find one of ``>= t`` marked items among ``N``.  ``None`` when ``T > N - t``."""
    p = params or BoundParams()
    if not 1 <= t < N:
        raise ValueError("need 1 <= t < N")
    if T < 0:
        raise ValueError("T must be >= 0")
    if T > N - t:
        return None
    v = math.exp(_bound_exponent(N, t, 8, 4, T, p.b)) / p.a
    return min(1.0, max(0.0, v))


def theoremA5_bound(N: int, t: int, d: float, params: BoundParams | None = None):
    """Same bound expressed through the degree ``d`` of the acceptance
    polynomial (``d = 2T`` for ``T`` queries)."""
    p = params or BoundParams()
    if not 1 <= t < N:
        raise ValueError("need 1 <= t < N")
    if d < 0:
        raise ValueError("d must be >= 0")
    if d > 2 * (N - t):
        return None
    v = math.exp(_bound_exponent(N, t, 4, 1, d, p.b)) / p.a
    return min(1.0, max(0.0, v))


def bound_curve(N: int, t: int, xs, params: BoundParams | None = None, by_degree: bool = False):
    """Rows ``(N, t, T_or_d, bound_value, a, b)``; vacuous points are skipped."""
    p = params or BoundParams()
    fn = theoremA5_bound if by_degree else theorem2_bound
    rows = []
    for x in xs:
        v = fn(N, t, x, p)
        if v is not None:
            rows.append((N, t, x, v, p.a, p.b))
    return rows
