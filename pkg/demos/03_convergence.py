"""Best-so-far edge count against oracle calls for the four algorithms.

Writes convergence.csv next to the working directory and prints a coarse table.

Run:  python3 demos/03_convergence.py
"""

from densest_grover import brute_force_densest, convergence_experiment, erdos_renyi_unique_densest
from densest_grover.bench import CONVERGENCE_COLUMNS, write_table

n, k = 10, 4
g = erdos_renyi_unique_densest(n, 0.5, k, seed=5)
print(f"optimum: {brute_force_densest(g, k)[1]} edges over C({n},{k}) = 210 subsets")

series = convergence_experiment(g, k, runs=200, seed=1)
write_table("convergence.csv", [r for s in series.values() for r in s.rows()], CONVERGENCE_COLUMNS)

checkpoints = [1, 10, 25, 50, 100, 200]
print("calls  " + "  ".join(f"{name:>12}" for name in series))
for c in checkpoints:
    cells = []
    for s in series.values():
        i = min(c, len(s.mean)) - 1
        cells.append(f"{s.mean[i]:5.2f} [{s.lo[i]:.0f},{s.hi[i]:.0f}]")
    print(f"{c:5d}  " + "  ".join(f"{cell:>12}" for cell in cells))
