import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qqw.amplitude import (
    SearchPlan,
    SearchSpace,
    default_cutoff,
    exact_plan,
    exact_search,
    exact_search_query_bound,
    fixed_iteration_search,
    fixed_point_plan,
    fixed_point_search,
    grover_success_prob,
    ordinary_plan,
    plan_success,
    rotation_state,
    unknown_t_failure,
    unknown_t_search,
)
from qqw.oracle import BitOracle, child_rng, planted_input
from qqw.statevector import grover_circuit, index_distribution


class TestRotation:
    def test_quarter_marked_one_iteration_is_certain(self):
        assert grover_success_prob(4, 1, 1) == pytest.approx(1.0, abs=1e-12)

    def test_zero_iterations_is_marked_fraction(self):
        assert grover_success_prob(16, 3, 0) == pytest.approx(3 / 16)

    def test_no_marked(self):
        assert grover_success_prob(16, 0, 5) == 0.0

    def test_bad_args(self):
        with pytest.raises(ValueError):
            grover_success_prob(4, 5, 1)
        with pytest.raises(ValueError):
            grover_success_prob(4, 1, -1)

    def test_state_fields(self):
        r = rotation_state(64, 1, 6)
        assert r.theta == pytest.approx(math.asin(1 / 8))
        assert r.success_prob == pytest.approx(math.sin(13 * r.theta) ** 2)

    @pytest.mark.parametrize("N", [2, 4, 8, 16])
    @pytest.mark.parametrize("k", [0, 1, 2, 3])
    def test_agrees_with_statevector(self, N, k):
        c = grover_circuit(N, k, final_query=False)
        for t in range(N + 1):
            bits = np.zeros(N)
            bits[:t] = 1
            dist = index_distribution(c, bits)
            p = plan_success(ordinary_plan(k), t / N)[0]
            want = np.where(bits == 1, p / max(t, 1), (1 - p) / max(N - t, 1))
            tv = 0.5 * np.abs(dist - want).sum()
            assert tv <= 1e-8


class TestPlans:
    def test_ordinary_plan_matches_formula(self):
        lam = np.linspace(0, 1, 41)
        got = plan_success(ordinary_plan(3), lam)
        np.testing.assert_allclose(got, np.sin(7 * np.arcsin(np.sqrt(lam))) ** 2, atol=1e-12)

    def test_query_accounting(self):
        assert SearchPlan(2, ((0.3, math.pi),)).queries == 3
        assert SearchPlan(2, ((0.3, 0.7),)).queries == 4

    @pytest.mark.parametrize("N", range(2, 65))
    def test_exact_plan_never_fails(self, N):
        for t in sorted({1, 2, max(1, N // 3), N}):
            plan = exact_plan(N, t)
            assert plan_success(plan, t / N)[0] >= 1 - 1e-12
            assert plan.queries <= exact_search_query_bound(N, t)

    def test_exact_plan_cost_close_to_optimal(self):
        for N in (16, 100, 1024):
            theta = math.asin(math.sqrt(1 / N))
            assert exact_plan(N, 1).queries + 1 <= math.ceil(math.pi / (4 * theta)) + 2

    def test_exact_search_finds(self, rng):
        for t in (1, 3, 10):
            o = planted_input(128, t, rng)
            out = exact_search(o, t, rng)
            assert out.found and o.simulator_view()[out.index] == 1

    def test_fixed_point_matches_closed_form(self):
        w, d2 = 1 / 64, 0.5
        plan = fixed_point_plan(w, d2)
        L = 2 * len(plan.phases) + 1
        gamma_inv = math.cosh(math.acosh(1 / math.sqrt(d2)) / L)
        lam = np.linspace(0, 1, 201)
        x = gamma_inv * np.sqrt(1 - lam)
        T = np.where(np.abs(x) <= 1, np.cos(L * np.arccos(np.clip(x, -1, 1))), np.cosh(L * np.arccosh(np.maximum(x, 1))))
        np.testing.assert_allclose(plan_success(plan, lam), 1 - d2 * T**2, atol=1e-10)

    @pytest.mark.parametrize("w", [1 / 8, 1 / 100, 2 / 4096])
    def test_fixed_point_guarantee(self, w):
        plan = fixed_point_plan(w, 0.5)
        lam = np.linspace(w, 1, 500)
        assert plan_success(plan, lam).min() >= 0.5 - 1e-9

    def test_fixed_point_no_overshoot(self):
        # unlike ordinary iterations, success never drops below the guarantee for larger fractions
        plan = fixed_point_plan(1 / 256, 0.25)
        assert plan_success(plan, np.linspace(1 / 256, 1, 1000)).min() >= 0.75 - 1e-9
        assert plan_success(ordinary_plan(12), np.linspace(1 / 256, 1, 1000)).min() < 0.1

    def test_fixed_point_search_runs(self, rng):
        o = planted_input(512, 4, rng)
        p = plan_success(fixed_point_plan(4 / 512, 0.5), 4 / 512)[0]
        assert p >= 0.5 - 1e-9
        hits = sum(fixed_point_search(o.fork(), 4 / 512, child_rng(1, i)).found for i in range(2000))
        assert abs(hits / 2000 - p) < 4 * math.sqrt(p * (1 - p) / 2000)


class TestSampling:
    def test_search_space_window(self, rng):
        o = BitOracle([1, 0, 0, 1, 0, 0, 0, 0])
        sp = SearchSpace(o, 2, 6)
        assert sp.n == 4 and sp.marked_fraction() == 0.25
        for _ in range(20):
            assert 2 <= sp.measure(0.5, rng) < 6

    def test_target_zero(self, rng):
        o = BitOracle([1, 1, 0, 1])
        out = exact_search(o, 1, rng, SearchSpace(o, target=0))
        assert out.index == 2

    def test_query_charge(self, rng):
        o = planted_input(64, 1, rng)
        fixed_iteration_search(o, 6, rng)
        assert o.stats.quantum_queries == 6
        assert o.stats.classical_verification_queries == 1

    def test_measured_frequency(self):
        N, t, k = 64, 2, 2
        p = grover_success_prob(N, t, k)
        hits = 0
        for i in range(3000):
            r = child_rng(9, i)
            hits += fixed_iteration_search(planted_input(N, t, r), k, r).found
        assert abs(hits / 3000 - p) < 4 * math.sqrt(p * (1 - p) / 3000)


class TestUnknownCount:
    def test_default_cutoff(self):
        c = default_cutoff(4096)
        f, _ = unknown_t_failure(4096, [1], c)
        assert f[0] <= 0.5
        f_less, _ = unknown_t_failure(4096, [1], c - 1)
        assert f_less[0] > 0.5

    def test_worst_case_cutoff_covers_all_counts(self):
        c = default_cutoff(256, 1, 0.5, worst_case=True)
        f, _ = unknown_t_failure(256, np.arange(1, 257), c)
        assert f.max() <= 0.5

    def test_no_false_positive(self, rng):
        o = BitOracle(np.zeros(256, dtype=np.uint8))
        out = unknown_t_search(o, rng, cutoff_queries=60)
        assert not out.found
        assert o.query_count <= 60

    def test_failure_rate_matches_exact_value(self):
        N, c = 256, 20
        want = unknown_t_failure(N, [1], c)[0][0]
        fails = 0
        for i in range(3000):
            r = child_rng(4, i)
            fails += not unknown_t_search(planted_input(N, 1, r), r, cutoff_queries=c).found
        assert abs(fails / 3000 - want) < 4 * math.sqrt(want * (1 - want) / 3000)

    def test_mean_queries_scale(self):
        for t in (1, 16):
            _, m = unknown_t_failure(4096, [t], 10**6)
            assert m[0] <= 2 * math.sqrt(4096 / t) + 10

    def test_bad_factor(self, rng):
        with pytest.raises(ValueError):
            unknown_t_search(planted_input(8, 1, rng), rng, schedule_factor=1.0)

    @given(st.integers(2, 200), st.integers(0, 3))
    def test_found_items_are_marked(self, N, t):
        t = min(t, N)
        r = child_rng(N, t)
        o = planted_input(N, t, r)
        out = unknown_t_search(o, r)
        if out.found:
            assert o.simulator_view()[out.index] == 1
        if t == 0:
            assert not out.found
