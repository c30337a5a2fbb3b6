"""Benchmark drivers and statistics.

Every run draws from its own generator seeded by ``(seed, graph_id, run_id)``
(plus a stream tag), so results do not depend on scheduling or ``jobs``.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .baselines import (BlackBoxGrover, SaParams, brute_force_expected_cost, sa_cost,
                        simulated_annealing_run)
from .circuits import search_layout
from .graph import (Graph, brute_force_densest, erdos_renyi, erdos_renyi_unique_densest,
                    subset_table)
from .search import QuantumExecutor, SearchConfig, adaptive_search

ALGORITHMS = ("grover", "emulator", "brute_force", "sa")
QUANTUM_SWITCH = 20.0  # simulate while sqrt(N) <= this

# stream tags keep graph generation and runs of different kinds independent
_GRAPH, _RUN, _BOOT = 0, 1, 2


def stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), *map(int, key)])


class ConfigurationError(RuntimeError):
    pass


# --- convergence ----------------------------------------------------------

@dataclass(frozen=True)
class ConvergencePoint:
    call: int
    mean: float
    lo: float
    hi: float


@dataclass
class ConvergenceSeries:
    """Per-call mean best-so-far with a pointwise 5th-95th percentile band.

    The band is widened to contain the mean where the distribution is skewed
    enough for the mean to fall outside the percentiles.
    """

    algorithm: str
    mean: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    runs: int

    @classmethod
    def from_traces(cls, algorithm: str, traces: Sequence[np.ndarray]) -> "ConvergenceSeries":
        length = max(len(t) for t in traces)
        grid = np.empty((len(traces), length))
        for row, t in zip(grid, traces):
            row[:len(t)] = t
            row[len(t):] = t[-1]
        mean = grid.mean(axis=0)
        lo, hi = np.percentile(grid, [5, 95], axis=0)
        return cls(algorithm, mean, np.minimum(lo, mean), np.maximum(hi, mean), len(traces))

    @property
    def calls(self) -> np.ndarray:
        return np.arange(1, len(self.mean) + 1)

    def points(self) -> list[ConvergencePoint]:
        return [ConvergencePoint(int(c), float(m), float(l), float(h))
                for c, m, l, h in zip(self.calls, self.mean, self.lo, self.hi)]

    def rows(self) -> list[dict]:
        return [dict(algorithm=self.algorithm, call=p.call, mean=p.mean, lo=p.lo, hi=p.hi)
                for p in self.points()]


CONVERGENCE_COLUMNS = ("algorithm", "call", "mean", "lo", "hi")


def _brute_force_trace(g: Graph, k: int, rng: np.random.Generator) -> np.ndarray:
    _, counts = subset_table(g, k)
    return np.maximum.accumulate(counts[rng.permutation(len(counts))])


def convergence_experiment(g: Graph, k: int, algorithms: Sequence[str] = ALGORITHMS,
                           runs: int = 1000, seed: int = 0,
                           search: SearchConfig | None = None,
                           sa: SaParams | None = None) -> dict[str, ConvergenceSeries]:
    search = search or SearchConfig()
    sa = sa or SaParams.defaults(g.n, k)
    out = {}
    for a_id, name in enumerate(algorithms):
        if name not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {name!r}; choose from {ALGORITHMS}")
        executor = QuantumExecutor() if name == "grover" else BlackBoxGrover()
        traces = []
        for run in range(runs):
            rng = stream(seed, _RUN, a_id, run)
            if name in ("grover", "emulator"):
                traces.append(adaptive_search(g, k, search, executor, rng).best_by_call())
            elif name == "brute_force":
                traces.append(_brute_force_trace(g, k, rng))
            else:
                traces.append(simulated_annealing_run(g, k, sa, rng).best_by_call)
        out[name] = ConvergenceSeries.from_traces(name, traces)
    return out


# --- bootstrap and fits ---------------------------------------------------

def hierarchical_bootstrap(data: Sequence[Sequence[float]], n_boot: int = 2000,
                           ci: float = 0.99, rng=None) -> tuple[float, float, float]:
    """Two-level bootstrap of the mean over graphs of per-graph median cost.

    Each replicate resamples the runs of every graph and takes their median,
    then resamples graphs and averages those medians.  Returns the mean of
    the replicates and the central ``ci`` percentile interval.
    """
    if len(data) == 0 or any(len(runs) == 0 for runs in data):
        raise ValueError("need at least one graph with at least one run each")
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    medians = np.empty((n_boot, len(data)))
    for j, runs in enumerate(data):
        runs = np.asarray(runs, dtype=float)
        idx = rng.integers(0, len(runs), size=(n_boot, len(runs)))
        medians[:, j] = np.median(runs[idx], axis=1)
    picks = rng.integers(0, len(data), size=(n_boot, len(data)))
    replicates = np.take_along_axis(medians, picks, axis=1).mean(axis=1)
    tail = 100 * (1 - ci) / 2
    lo, hi = np.percentile(replicates, [tail, 100 - tail])
    mean = float(replicates.mean())
    # keep lo <= mean <= hi despite rounding on degenerate data
    return mean, float(min(lo, mean)), float(max(hi, mean))


@dataclass(frozen=True)
class FitResult:
    a: float
    b: float
    r_squared: float
    rms_log_residual: float
    points: int

    def __call__(self, N):
        return self.a * np.asarray(N, dtype=float) ** self.b


def power_law_fit(points: Sequence[tuple[float, float]]) -> FitResult:
    """Ordinary least squares of ``log y = log a + b log N``."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
        raise ValueError("need at least two (N, cost) points")
    if np.any(pts <= 0):
        raise ValueError("power-law fit needs strictly positive N and cost")
    x, y = np.log(pts[:, 0]), np.log(pts[:, 1])
    if np.ptp(x) == 0:
        raise ValueError("all points share the same N")
    b, log_a = np.polyfit(x, y, 1)
    resid = y - (log_a + b * x)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return FitResult(float(math.exp(log_a)), float(b), r2,
                     float(np.sqrt(np.mean(resid ** 2))), len(pts))


# --- scaling --------------------------------------------------------------

@dataclass
class ScalingPoint:
    n: int
    k: int
    N: int
    executor: str
    mean: float
    lo: float
    hi: float
    success_rate: float = float("nan")
    flagged: int = 0
    costs: list[list[float]] = field(default_factory=list, repr=False)

    def row(self) -> dict:
        return {c: getattr(self, c) for c in SCALING_COLUMNS}


SCALING_COLUMNS = ("n", "k", "N", "executor", "mean", "lo", "hi", "success_rate", "flagged")


def choose_executor(n: int, k: int, override: str = "auto") -> str:
    if override in ("quantum", "emulator"):
        return override
    if override != "auto":
        raise ValueError(f"executor must be auto, quantum or emulator, got {override!r}")
    return "quantum" if math.sqrt(math.comb(n, k)) <= QUANTUM_SWITCH else "emulator"


def _scaling_graph(task) -> tuple[list[int], list[bool]]:
    n, k, gid, runs, p_graph, seed, kind, cfg, max_qubits = task
    g = erdos_renyi(n, p_graph, stream(seed, _GRAPH, n, k, gid))
    executor = QuantumExecutor(max_qubits) if kind == "quantum" else BlackBoxGrover()
    _, optimum, _ = brute_force_densest(g, k)
    costs, hits = [], []
    for run in range(runs):
        trace = adaptive_search(g, k, cfg, executor, stream(seed, _RUN, n, k, gid, run))
        costs.append(trace.total_calls)
        hits.append(trace.best_edges == optimum)
    return costs, hits


def _map(fn, tasks, jobs: int):
    if jobs <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))


def scaling_experiment(pairs: Sequence[tuple[int, int]], graphs: int = 20, runs: int = 20,
                       p_graph: float = 0.5, seed: int = 0, executor: str = "auto",
                       search: SearchConfig | None = None, n_boot: int = 2000,
                       max_qubits: int = 22, jobs: int = 1) -> list[ScalingPoint]:
    """Total oracle calls to termination for each ``(n, k)``.

    ``pairs`` lists the ``(n, k)`` instances; see :func:`admissible_pairs`.
    """
    search = search or SearchConfig()
    points = []
    for n, k in pairs:
        kind = choose_executor(n, k, executor)
        if kind == "quantum":
            qubits = search_layout(n, k).num_qubits
            if qubits > max_qubits:
                raise ConfigurationError(
                    f"n={n}, k={k} needs {qubits} qubits on the simulator branch "
                    f"(limit {max_qubits})"
                )
        tasks = [(n, k, gid, runs, p_graph, seed, kind, search, max_qubits)
                 for gid in range(graphs)]
        results = _map(_scaling_graph, tasks, jobs)
        costs = [c for c, _ in results]
        hits = [h for _, hs in results for h in hs]
        mean, lo, hi = hierarchical_bootstrap(costs, n_boot, 0.99, stream(seed, _BOOT, n, k))
        points.append(ScalingPoint(n, k, math.comb(n, k), kind, mean, lo, hi,
                                   float(np.mean(hits)), 0, costs))
    return points


def admissible_pairs(k_list: Sequence[int], max_N: int, min_N: int = 2,
                     n_max: int = 200) -> list[tuple[int, int]]:
    """Every ``(n, k)`` with ``min_N <= C(n, k) <= max_N``, in k then n order."""
    pairs = []
    for k in k_list:
        for n in range(k + 1, n_max + 1):
            N = math.comb(n, k)
            if N > max_N:
                break
            if N >= min_N:
                pairs.append((n, k))
    return pairs


def brute_force_points(Ns: Sequence[int], p_target: float = 0.95) -> list[tuple[int, float]]:
    return [(int(N), brute_force_expected_cost(int(N), p_target)) for N in Ns]


def _sa_graph(task) -> tuple[int, bool]:
    n, k, gid, runs, seed, params, cap = task
    g = erdos_renyi_unique_densest(n, 0.5, k, stream(seed, _GRAPH, n, k, gid))
    _, optimum, _ = brute_force_densest(g, k)
    wins = sum(simulated_annealing_run(g, k, params, stream(seed, _RUN, n, k, gid, run)).edges
               == optimum for run in range(runs))
    if wins == 0:
        return cap, True
    return sa_cost(wins / runs, params.steps), False


def sa_scaling_experiment(pairs: Sequence[tuple[int, int]], graphs: int = 100,
                          runs_per_graph: int = 1000, seed: int = 0,
                          params: SaParams | None = None, cost_cap: int | None = None,
                          n_boot: int = 2000, jobs: int = 1) -> list[ScalingPoint]:
    """Annealing cost ``ceil(T d)`` per graph, averaged over graphs.

    A graph on which no run found the optimum is charged ``cost_cap``
    (default ``100 * N``) and counted in ``flagged``.
    """
    points = []
    for n, k in pairs:
        N = math.comb(n, k)
        p = params or SaParams.defaults(n, k)
        cap = cost_cap if cost_cap is not None else 100 * N
        results = _map(_sa_graph, [(n, k, gid, runs_per_graph, seed, p, cap)
                                   for gid in range(graphs)], jobs)
        costs = [[c] for c, _ in results]
        mean, lo, hi = hierarchical_bootstrap(costs, n_boot, 0.99, stream(seed, _BOOT, n, k))
        avg = float(np.mean(costs))
        points.append(ScalingPoint(n, k, N, "sa", avg, min(lo, avg), max(hi, avg),
                                   float("nan"), sum(f for _, f in results), costs))
    return points


# --- output ---------------------------------------------------------------

def write_table(path, rows: Sequence[dict], columns: Sequence[str]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(columns), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({c: _cell(row[c]) for c in columns})


def _cell(v):
    if isinstance(v, float):
        return repr(v)
    return v


def write_summary(path, summary: dict) -> None:
    Path(path).write_text(json.dumps(_jsonable(summary), indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "__dataclass_fields__"):
        return _jsonable(asdict(obj))
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return obj
