"""Hot numeric kernels.

Every kernel exists twice: a numba-compiled loop (``*_nb``) and a vectorised
numpy version (``*_np``).  The public name is bound to one of them at import
time according to :data:`qqw._accel.USE_NUMBA`.  Both are always importable so
tests and the benchmark can compare them directly.

Truth tables are indexed by integers whose bit ``v`` is the value of variable
``v``; the kernels never care which variable is "first".
"""

import math

import numpy as np

from ._accel import USE_NUMBA, njit

__all__ = [
    "mobius_transform",
    "sensitivity_profile",
    "decision_tree_depth_table",
    "bbht_failure",
    "bbht_schedule",
    "popcount",
]


def popcount(a):
    """Vectorised popcount of a non-negative integer array."""
    a = np.asarray(a, dtype=np.uint64)
    out = np.zeros(a.shape, dtype=np.int64)
    while np.any(a):
        out += (a & np.uint64(1)).astype(np.int64)
        a = a >> np.uint64(1)
    return out


# ---------------------------------------------------------------------------
# Moebius transform over the integers
# ---------------------------------------------------------------------------


def mobius_np(values):
    a = np.array(values, dtype=np.int64, copy=True)
    size = a.shape[0]
    n = size.bit_length() - 1
    for i in range(n):
        view = a.reshape(-1, 2, 1 << i)
        view[:, 1, :] -= view[:, 0, :]
    return a


@njit
def mobius_nb(values):
    a = values.astype(np.int64)
    size = a.shape[0]
    step = 1
    while step < size:
        for base in range(0, size, 2 * step):
            for off in range(step):
                a[base + step + off] -= a[base + off]
        step *= 2
    return a


# ---------------------------------------------------------------------------
# Sensitivity: number of sensitive coordinates at every input
# ---------------------------------------------------------------------------


def sensitivity_np(values):
    f = np.asarray(values, dtype=np.int8)
    size = f.shape[0]
    n = size.bit_length() - 1
    idx = np.arange(size)
    counts = np.zeros(size, dtype=np.int64)
    for i in range(n):
        counts += f != f[idx ^ (1 << i)]
    return counts


@njit
def sensitivity_nb(values):
    size = values.shape[0]
    n = 0
    while (1 << n) < size:
        n += 1
    counts = np.zeros(size, dtype=np.int64)
    for x in range(size):
        c = 0
        for i in range(n):
            if values[x] != values[x ^ (1 << i)]:
                c += 1
        counts[x] = c
    return counts


# ---------------------------------------------------------------------------
# Deterministic decision-tree depth by dynamic programming over restrictions
# ---------------------------------------------------------------------------
# A restriction is a ternary word: digit v is 0 or 1 (variable fixed) or 2
# (free).  Children of a state with a free digit at v are s - 2*3^v (v := 0)
# and s - 3^v (v := 1); both are smaller, so one increasing sweep suffices.


@njit
def dt_depth_nb(values, n):
    size = 1
    for _ in range(n):
        size *= 3
    pow3 = np.ones(n, dtype=np.int64)
    for v in range(1, n):
        pow3[v] = pow3[v - 1] * 3
    lo = np.empty(size, dtype=np.int8)
    hi = np.empty(size, dtype=np.int8)
    depth = np.empty(size, dtype=np.int8)
    for s in range(size):
        rem = s
        idx = 0
        first_free = -1
        for v in range(n):
            d = rem % 3
            rem //= 3
            if d == 2:
                if first_free < 0:
                    first_free = v
            elif d == 1:
                idx |= 1 << v
        if first_free < 0:
            lo[s] = values[idx]
            hi[s] = values[idx]
            depth[s] = 0
            continue
        p = pow3[first_free]
        lo[s] = min(lo[s - 2 * p], lo[s - p])
        hi[s] = max(hi[s - 2 * p], hi[s - p])
        if lo[s] == hi[s]:
            depth[s] = 0
            continue
        best = 127
        rem = s
        for v in range(n):
            d = rem % 3
            rem //= 3
            if d == 2:
                q = pow3[v]
                a = max(depth[s - 2 * q], depth[s - q])
                if a < best:
                    best = a
        depth[s] = best + 1
    return depth[size - 1]


def dt_depth_np(values, n):
    values = np.asarray(values, dtype=np.int8)
    size = 3**n
    states = np.arange(size, dtype=np.int64)
    digits = []
    rem = states.copy()
    for _ in range(n):
        digits.append((rem % 3).astype(np.int8))
        rem //= 3
    n_free = np.zeros(size, dtype=np.int8)
    for d in digits:
        n_free += d == 2
    lo = np.empty(size, dtype=np.int8)
    hi = np.empty(size, dtype=np.int8)
    depth = np.zeros(size, dtype=np.int8)

    leaves = states[n_free == 0]
    idx = np.zeros(leaves.shape[0], dtype=np.int64)
    for v in range(n):
        idx |= digits[v][leaves].astype(np.int64) << v
    lo[leaves] = values[idx]
    hi[leaves] = values[idx]

    for c in range(1, n + 1):
        layer = states[n_free == c]
        done = np.zeros(layer.shape[0], dtype=bool)
        best = np.full(layer.shape[0], 127, dtype=np.int8)
        for v in range(n):
            free = digits[v][layer] == 2
            if not free.any():
                continue
            q = 3**v
            s = layer[free]
            first = free & ~done
            if first.any():
                sf = layer[first]
                lo[sf] = np.minimum(lo[sf - 2 * q], lo[sf - q])
                hi[sf] = np.maximum(hi[sf - 2 * q], hi[sf - q])
                done |= first
            cand = np.maximum(depth[s - 2 * q], depth[s - q])
            best[free] = np.minimum(best[free], cand)
        const = lo[layer] == hi[layer]
        depth[layer] = np.where(const, 0, best + 1).astype(np.int8)
    return depth[size - 1]


# ---------------------------------------------------------------------------
# Unknown-count search with a query cutoff: exact failure probabilities
# ---------------------------------------------------------------------------


def bbht_schedule(N, factor, rounds):
    """Iteration-range sizes ``ceil(m_r)`` for the growing schedule ``m_0 = 1``,
    ``m_{r+1} = min(factor * m_r, sqrt(N))``."""
    cap = math.sqrt(N)
    out = np.empty(rounds, dtype=np.int64)
    m = 1.0
    for r in range(rounds):
        out[r] = max(1, math.ceil(m - 1e-12))
        m = min(factor * m, cap)
    return out


@njit
def bbht_failure_nb(thetas, sizes, cutoff):
    n_theta = thetas.shape[0]
    fail = np.zeros(n_theta)
    mean_q = np.zeros(n_theta)
    for i in range(n_theta):
        th = thetas[i]
        mass = np.zeros(cutoff + 1)
        mass[0] = 1.0
        f_acc = 0.0
        q_acc = 0.0
        for r in range(sizes.shape[0]):
            M = sizes[r]
            p = np.empty(M)
            for k in range(M):
                sk = math.sin((2 * k + 1) * th)
                p[k] = sk * sk
            new = np.zeros(cutoff + 1)
            total = 0.0
            for u in range(cutoff + 1):
                w = mass[u]
                if w == 0.0:
                    continue
                w /= M
                n_ok = min(M, cutoff - u)
                for k in range(n_ok):
                    used = u + k + 1
                    q_acc += w * p[k] * used
                    new[used] += w * (1.0 - p[k])
                    total += w * (1.0 - p[k])
                # rounds that would pass the cutoff are not started
                f_acc += w * (M - n_ok)
                q_acc += w * (M - n_ok) * u
            mass = new
            if total < 1e-18:
                break
        for u in range(cutoff + 1):
            f_acc += mass[u]
            q_acc += mass[u] * u
        fail[i] = f_acc
        mean_q[i] = q_acc
    return fail, mean_q


def bbht_failure_np(thetas, sizes, cutoff):
    thetas = np.asarray(thetas, dtype=float)
    n_theta = thetas.shape[0]
    mass = np.zeros((n_theta, cutoff + 1))
    mass[:, 0] = 1.0
    fail = np.zeros(n_theta)
    mean_q = np.zeros(n_theta)
    u = np.arange(cutoff + 1, dtype=float)
    for M in sizes:
        M = int(M)
        new = np.zeros_like(mass)
        w = mass / M
        for k in range(M):
            p = np.sin((2 * k + 1) * thetas) ** 2
            shift = k + 1
            if shift <= cutoff:
                ok = w[:, : cutoff + 1 - shift]
                used = u[: cutoff + 1 - shift] + shift
                mean_q += p * (ok * used).sum(axis=1)
                new[:, shift:] += ok * (1.0 - p)[:, None]
                over = w[:, cutoff + 1 - shift :]
                over_u = u[cutoff + 1 - shift :]
            else:
                over = w
                over_u = u
            fail += over.sum(axis=1)
            mean_q += (over * over_u).sum(axis=1)
        mass = new
        if mass.sum() < 1e-18 * max(n_theta, 1):
            break
    fail += mass.sum(axis=1)
    mean_q += (mass * u).sum(axis=1)
    return fail, mean_q


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------

if USE_NUMBA:
    _mobius = mobius_nb
    _sensitivity = sensitivity_nb
    _dt_depth = dt_depth_nb
    _bbht = bbht_failure_nb
else:
    _mobius = mobius_np
    _sensitivity = sensitivity_np
    _dt_depth = dt_depth_np
    _bbht = bbht_failure_np


def mobius_transform(values):
    """Integer Moebius coefficients of a 0/1 table of length ``2**n``."""
    return _mobius(np.ascontiguousarray(values, dtype=np.int64))


def sensitivity_profile(values):
    """Per-input count of coordinates whose flip changes the value."""
    return _sensitivity(np.ascontiguousarray(values, dtype=np.int8))


def decision_tree_depth_table(values, n):
    return int(_dt_depth(np.ascontiguousarray(values, dtype=np.int8), n))


def bbht_failure(thetas, sizes, cutoff):
    """Failure probability and mean query count of the cutoff-limited
    unknown-count search, one entry per rotation angle in ``thetas``.

    ``sizes`` is the per-round iteration range (see :func:`bbht_schedule`);
    it must be long enough that every run stops by exhausting ``cutoff``.
    """
    return _bbht(
        np.ascontiguousarray(thetas, dtype=np.float64),
        np.ascontiguousarray(sizes, dtype=np.int64),
        int(cutoff),
    )
