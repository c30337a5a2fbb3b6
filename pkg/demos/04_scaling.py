"""Oracle cost to termination against search-space size, with power-law fits.

Small instances run the gate-level simulator; larger ones switch to the
black-box emulator.  The fitted exponent should sit near 1/2, against 1 for
a random-order scan.

Run:  python3 demos/04_scaling.py        (about ten seconds)
"""

from densest_grover import power_law_fit, scaling_experiment
from densest_grover.bench import brute_force_points

pairs = [(6, 3), (9, 3), (12, 3), (20, 3), (30, 3), (45, 3), (65, 3), (90, 3)]
points = scaling_experiment(pairs, graphs=10, runs=10, seed=2, n_boot=500)
for p in points:
    print(f"n={p.n:3d} N={p.N:7d} {p.executor:8s} mean={p.mean:8.1f}"
          f" 99% CI [{p.lo:.1f}, {p.hi:.1f}] success={p.success_rate:.2f}")

grover = power_law_fit([(p.N, p.mean) for p in points])
scan = power_law_fit(brute_force_points([p.N for p in points]))
print(f"Grover fit: cost = {grover.a:.2f} N^{grover.b:.3f} (r^2 = {grover.r_squared:.4f})")
print(f"scan line:  cost = {scan.a:.2f} N^{scan.b:.3f}")
