"""Adaptive threshold search on a random graph, attempt by attempt.

Each attempt asks for a subset strictly denser than the current level.  An
improvement raises the level; eleven failures in a row stop the search.

Run:  python3 demos/02_adaptive_search.py
"""

from densest_grover import (QuantumExecutor, SearchConfig, adaptive_search, brute_force_densest,
                            erdos_renyi_unique_densest)
from densest_grover.graph import bitstring, vertices_of

n, k = 9, 4
g = erdos_renyi_unique_densest(n, 0.5, k, seed=12)
_, optimum, N = brute_force_densest(g, k)
print(f"G({n}, 0.5) with {g.num_edges} edges; C({n},{k}) = {N}; optimum {optimum} edges")

trace = adaptive_search(g, k, SearchConfig(seed=3), QuantumExecutor())
print(f"starting level {trace.initial_level}, R = {SearchConfig().R}")
for row in trace.rows():
    print("  attempt {attempt_idx:2d}: level {m}, t={t:2d}, measured {measured_edges} edges"
          " -> {outcome}".format(**row))
print(f"best subset {vertices_of(trace.best_subset)} ({bitstring(trace.best_subset, n)}),"
      f" {trace.best_edges} edges, {trace.total_calls} oracle calls")
