import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from densest_grover.baselines import (
    SA_COLUMNS, BlackBoxGrover, SaParams, brute_force_expected_cost, sa_cost, sa_required_runs,
    simulated_annealing_run,
)
from densest_grover.graph import Graph, edge_count, erdos_renyi, k_subsets, mask_from_vertices
from densest_grover.search import iteration_bound


def test_emulator_heads_returns_first_subset():
    g = erdos_renyi(6, 0.5, 0)
    ex = BlackBoxGrover()
    rng = np.random.default_rng(0)
    firsts = 0
    for _ in range(200):
        subset, t = ex(g, 3, 0, rng, t=2)
        assert t == 2 and bin(subset).count("1") == 3
        firsts += subset == 0b111
    # every subset qualifies at threshold 0, so each heads draw returns 0b111
    assert ex.heads > 0 and firsts >= ex.heads


def test_emulator_heads_rate():
    g = erdos_renyi(7, 0.5, 1)
    ex = BlackBoxGrover()
    rng = np.random.default_rng(1)
    for _ in range(10_000):
        ex(g, 3, 1, rng)
    assert ex.draws == 10_000
    assert abs(ex.heads / ex.draws - 0.25) <= 3 * math.sqrt(0.25 * 0.75 / 10_000)


def test_emulator_threshold_above_optimum_is_uniform():
    g = Graph.path(5)
    ex = BlackBoxGrover()
    rng = np.random.default_rng(2)
    draws = [ex(g, 2, 2, rng)[0] for _ in range(10_000)]
    masks = [mask_from_vertices(r) for r in k_subsets(5, 2)]
    freq = np.array([draws.count(m) for m in masks]) / len(draws)
    assert ex.heads == 0
    assert np.all(np.abs(freq - 0.1) <= 3 * math.sqrt(0.09 / 10_000) + 1e-3)


def test_emulator_charges_schedule_draw():
    g = erdos_renyi(9, 0.5, 3)
    T = iteration_bound(math.comb(9, 4))
    rng = np.random.default_rng(3)
    ts = {BlackBoxGrover()(g, 4, 3, rng)[1] for _ in range(2000)}
    assert ts == set(range(T))


def test_brute_force_expected_cost():
    assert brute_force_expected_cost(210) == pytest.approx(199.5)
    assert brute_force_expected_cost(1) == pytest.approx(0.95)
    with pytest.raises(ValueError):
        brute_force_expected_cost(0)


# --- annealing ---------------------------------------------------------------------

def test_sa_on_complete_graph_is_optimal_at_once():
    res = simulated_annealing_run(Graph.complete(5), 3, SaParams.defaults(5, 3),
                                  np.random.default_rng(0))
    assert res.best_by_call[0] == 3 and res.edges == 3 and res.calls == 150


def test_sa_single_step_and_degenerate_k():
    rng = np.random.default_rng(1)
    assert simulated_annealing_run(erdos_renyi(8, 0.5, 0), 3, SaParams(1), rng).calls == 1
    full = simulated_annealing_run(Graph.complete(4), 4, SaParams(50), rng)
    assert full.calls == 1 and full.edges == 6
    with pytest.raises(ValueError):
        simulated_annealing_run(Graph.complete(4), 5, SaParams(5), rng)
    with pytest.raises(ValueError):
        SaParams(0)


@given(st.integers(0, 5000), st.integers(1, 6))
def test_sa_trace_invariants(seed, k):
    g = erdos_renyi(8, 0.5, seed)
    params = SaParams(steps=60, tenure=k)
    res = simulated_annealing_run(g, k, params, np.random.default_rng(seed))
    assert res.calls == 60
    assert np.all(np.diff(res.best_by_call) >= 0)
    assert res.edges == res.best_by_call[-1] == edge_count(g, res.subset)
    assert bin(res.subset).count("1") == k
    assert all(tuple(r) == SA_COLUMNS for r in res.rows)
    assert max(r["current_edges"] for r in res.rows) == res.edges


def test_sa_zero_temperature_never_descends():
    g = erdos_renyi(10, 0.5, 5)
    res = simulated_annealing_run(g, 4, SaParams(steps=300, t0=0.0, tenure=0),
                                  np.random.default_rng(5))
    current = [r["current_edges"] for r in res.rows]
    assert np.all(np.diff(current) >= 0)


def test_sa_incremental_count_matches_recount():
    for seed in range(30):
        g = erdos_renyi(9, 0.5, seed)
        res = simulated_annealing_run(g, 4, SaParams.defaults(9, 4), np.random.default_rng(seed))
        assert edge_count(g, res.subset) == res.edges


def test_sa_success_probability_reproducible():
    g = erdos_renyi(8, 0.5, 2)
    best = max(edge_count(g, mask_from_vertices(r)) for r in k_subsets(8, 4))

    def success(seed0):
        return np.mean([simulated_annealing_run(g, 4, SaParams(20, tenure=4),
                                                np.random.default_rng([seed0, r])).edges == best
                        for r in range(200)])

    s = success(0)
    assert 0 < s <= 1 and s == success(0)


def test_sa_required_runs_examples():
    assert sa_required_runs(1.0) == 1
    assert sa_required_runs(0.25) == pytest.approx(math.log(0.05) / math.log(0.75))
    assert sa_required_runs(0.999) == 1
    assert sa_cost(0.25, 100) == 1042
    assert sa_cost(0.5, 100) == 433
    with pytest.raises(ValueError):
        sa_required_runs(0)


@given(st.floats(0.001, 0.99), st.floats(0.001, 0.99))
def test_sa_required_runs_monotone(a, b):
    lo, hi = sorted((a, b))
    assert sa_required_runs(lo) >= sa_required_runs(hi)
