"""The numba and numpy kernels must agree; each is also checked against a
direct definition."""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qqw import kernels as K
from qqw._accel import NUMBA_AVAILABLE


def tables(max_n=8):
    return st.integers(0, max_n).flatmap(
        lambda n: st.lists(st.integers(0, 1), min_size=1 << n, max_size=1 << n).map(lambda v: (n, np.array(v, dtype=np.int64)))
    )


def mobius_direct(values, n):
    out = np.zeros(1 << n, dtype=np.int64)
    for S in range(1 << n):
        out[S] = sum((-1) ** bin(S & ~T).count("1") * values[T] for T in range(1 << n) if T & ~S == 0)
    return out


def dt_depth_direct(values, n):
    from functools import lru_cache

    @lru_cache(maxsize=None)
    def depth(fixed):
        free = [v for v in range(n) if fixed[v] == 2]
        vals = set()
        for bits in itertools.product((0, 1), repeat=len(free)):
            idx = 0
            it = iter(bits)
            for v in range(n):
                b = fixed[v] if fixed[v] != 2 else next(it)
                idx |= b << v
            vals.add(values[idx])
        if len(vals) == 1:
            return 0
        best = n
        for v in free:
            f0 = fixed[:v] + (0,) + fixed[v + 1 :]
            f1 = fixed[:v] + (1,) + fixed[v + 1 :]
            best = min(best, 1 + max(depth(f0), depth(f1)))
        return best

    return depth((2,) * n)


class TestMobius:
    @given(tables())
    def test_paths_agree(self, nt):
        n, v = nt
        np.testing.assert_array_equal(K.mobius_np(v), K.mobius_nb(v))

    @given(tables(5))
    def test_matches_definition(self, nt):
        n, v = nt
        np.testing.assert_array_equal(K.mobius_transform(v), mobius_direct(v, n))

    def test_or(self):
        v = np.ones(8, dtype=np.int64)
        v[0] = 0
        c = K.mobius_transform(v)
        assert c[7] == 1 and c[0] == 0


class TestSensitivity:
    @given(tables())
    def test_paths_agree(self, nt):
        n, v = nt
        np.testing.assert_array_equal(K.sensitivity_np(v.astype(np.int8)), K.sensitivity_nb(v.astype(np.int8)))

    def test_or_at_zero(self):
        v = np.ones(16, dtype=np.int8)
        v[0] = 0
        assert K.sensitivity_profile(v)[0] == 4


class TestDecisionTreeDepth:
    @given(tables(4))
    def test_paths_agree_with_definition(self, nt):
        n, v = nt
        want = dt_depth_direct(tuple(v.tolist()), n)
        assert int(K.dt_depth_np(v.astype(np.int8), n)) == want
        assert int(K.dt_depth_nb(v.astype(np.int8), n)) == want

    def test_dictator(self):
        v = np.array([(i >> 2) & 1 for i in range(8)], dtype=np.int8)
        assert K.decision_tree_depth_table(v, 3) == 1

    def test_parity_is_evasive(self):
        v = np.array([bin(i).count("1") & 1 for i in range(1 << 6)], dtype=np.int8)
        assert K.decision_tree_depth_table(v, 6) == 6


class TestUnknownCountFailure:
    def direct(self, theta, sizes, cutoff):
        # exhaustive enumeration of the round-by-round choices
        fail, mean = 0.0, 0.0
        stack = [(0, 0, 1.0)]
        while stack:
            r, used, w = stack.pop()
            M = sizes[r]
            for k in range(M):
                p = w / M
                if used + k + 1 > cutoff:
                    fail += p
                    mean += p * used
                    continue
                s = math.sin((2 * k + 1) * theta) ** 2
                mean += p * s * (used + k + 1)
                if p * (1 - s) > 0:
                    stack.append((r + 1, used + k + 1, p * (1 - s)))
        return fail, mean

    @pytest.mark.parametrize("N,t,cutoff", [(16, 1, 9), (64, 1, 20), (64, 5, 15), (32, 0, 10)])
    def test_against_enumeration(self, N, t, cutoff):
        sizes = K.bbht_schedule(N, 1.2, cutoff + 2)
        th = np.array([math.asin(math.sqrt(t / N))])
        want = self.direct(th[0], sizes, cutoff)
        for fn in (K.bbht_failure_np, K.bbht_failure_nb):
            f, m = fn(th, sizes, cutoff)
            assert f[0] == pytest.approx(want[0], abs=1e-12)
            assert m[0] == pytest.approx(want[1], abs=1e-9)

    def test_paths_agree_on_a_sweep(self):
        N = 1024
        sizes = K.bbht_schedule(N, 1.2, 80)
        th = np.arcsin(np.sqrt(np.arange(0, 65) / N))
        a = K.bbht_failure_np(th, sizes, 78)
        b = K.bbht_failure_nb(th, sizes, 78)
        np.testing.assert_allclose(a[0], b[0], atol=1e-12)
        np.testing.assert_allclose(a[1], b[1], atol=1e-9)

    def test_no_solutions_always_fails(self):
        f, m = K.bbht_failure(np.array([0.0]), K.bbht_schedule(64, 1.2, 40), 30)
        assert f[0] == pytest.approx(1.0)
        assert m[0] <= 30

    def test_schedule(self):
        s = K.bbht_schedule(100, 1.2, 30)
        assert s[0] == 1
        assert np.all(np.diff(s) >= 0)
        assert s[-1] == 10


@pytest.mark.skipif(not NUMBA_AVAILABLE, reason="numba not installed")
def test_dispatch_follows_flag():
    from qqw._accel import USE_NUMBA

    assert (K._mobius is K.mobius_nb) == USE_NUMBA


def test_fallback_flag_in_subprocess():
    import subprocess
    import sys

    code = "from qqw import kernels as K, _accel; print(_accel.USE_NUMBA, K._mobius is K.mobius_np)"
    env = dict(__import__("os").environ, QQW_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout.split()
    assert out == ["False", "True"]
