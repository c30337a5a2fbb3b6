"""Build the search-space state and the phase oracle, then watch one Grover step.

Run:  python3 demos/01_dicke_and_oracle.py
"""

import math

import numpy as np

from densest_grover import (Graph, dicke_preparation, edge_count, grover_circuit, oracle_circuit,
                            resource_report, run_circuit)
from densest_grover.circuits import search_layout

g = Graph(5, ((0, 1), (1, 2), (2, 0), (2, 3), (3, 4)))
n, k, m = g.n, 3, 3
print(f"graph: n={n}, edges={list(g.edges)}; looking for {k}-subsets with >= {m} edges")

# Equal superposition over the C(5, 3) = 10 subsets of size 3.
amps = run_circuit(dicke_preparation(n, k)).amplitudes
support = np.flatnonzero(np.abs(amps) > 1e-9)
print(f"Dicke state support: {len(support)} basis states, amplitude {abs(amps[support[0]]):.4f}"
      f" (1/sqrt(10) = {1 / math.sqrt(10):.4f})")

# The oracle is diagonal on weight-k inputs: -1 exactly where the subset is dense enough.
layout = search_layout(n, k)
print(f"qubits: {layout.num_qubits} ({n} vertex, {len(layout['q_edge'])} counter, 1 sign)")
print(resource_report(oracle_circuit(g, k, m, layout)))

# One Grover step concentrates the measurement on the marked triangle {0, 1, 2}.
for t in range(3):
    probs = run_circuit(grover_circuit(g, k, m, t)).probabilities("q_node")
    marked = sum(p for x, p in enumerate(probs) if bin(x).count("1") == k and edge_count(g, x) >= m)
    print(f"t={t}: P(marked) = {marked:.4f}")
