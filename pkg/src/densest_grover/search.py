"""Adaptive-threshold Grover search with Durr-Hoyer iteration sampling.

At level ``m`` (the best edge count certified so far) each attempt asks an
executor for a k-subset from the oracle that marks subsets with at least
``m + 1`` edges, i.e. strictly denser than the current level.  A measured
subset denser than ``m`` raises the level; anything else is a failure, and
``R`` consecutive failures end the search.

An executor is any callable ``(graph, k, threshold, rng) -> (subset, calls)``
returning a weight-k bitmask and the oracle calls it spent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .circuits import dicke_preparation, grover_iteration, search_layout
from .graph import Graph, edge_count, initial_threshold, max_edges
from .sim import CapacityError, run_circuit

Executor = Callable[[Graph, int, int, np.random.Generator], tuple[int, int]]


def required_failures(p: float, s: float) -> int:
    """Smallest R with ``(1 - s)**R <= 1 - p``."""
    if not (0 < p < 1 and 0 < s < 1):
        raise ValueError(f"confidence and success floor must lie in (0, 1), got p={p}, s={s}")
    r = max(1, math.ceil(math.log(1 - p) / math.log(1 - s)))
    # guard the ceil against log rounding on exact ratios
    while r > 1 and (1 - s) ** (r - 1) <= (1 - p) * (1 + 1e-12):
        r -= 1
    return r


def iteration_bound(N: int) -> int:
    """T = ceil(pi/4 * sqrt(N))."""
    if N < 1:
        raise ValueError(f"search space size must be positive, got {N}")
    return math.ceil(math.pi / 4 * math.sqrt(N))


def sample_iteration_count(N: int, rng: np.random.Generator) -> int:
    """Uniform draw from ``{0, ..., T-1}``."""
    return int(rng.integers(0, iteration_bound(N)))


def average_success_floor(M: int, N: int) -> float:
    """Success probability averaged over t in {0..T-1} with M of N marked."""
    if not 1 <= M <= N:
        raise ValueError(f"need 1 <= M <= N, got M={M}, N={N}")
    theta = math.asin(math.sqrt(M / N))
    t = np.arange(iteration_bound(N))
    return float(np.mean(np.sin((2 * t + 1) * theta) ** 2))


@dataclass(frozen=True)
class SearchConfig:
    confidence: float = 0.95
    success_floor: float = 0.25
    failures: int | None = None  # R; derived from confidence and floor when None
    seed: int | None = 0
    charge_verification: bool = False

    def __post_init__(self):
        if not 0 < self.confidence < 1 or not 0 < self.success_floor < 1:
            raise ValueError("confidence and success floor must lie in (0, 1)")
        if self.failures is not None and self.failures < 1:
            raise ValueError(f"R must be at least 1, got {self.failures}")

    @property
    def R(self) -> int:
        if self.failures is not None:
            return self.failures
        return required_failures(self.confidence, self.success_floor)


@dataclass(frozen=True)
class Attempt:
    level: int
    iterations: int
    subset: int
    edges: int
    calls: int

    @property
    def improved(self) -> bool:
        return self.edges > self.level

    @property
    def outcome(self) -> str:
        return "improvement" if self.improved else "failure"


@dataclass
class SearchTrace:
    n: int
    k: int
    initial_level: int
    attempts: list[Attempt] = field(default_factory=list)
    best_subset: int | None = None
    best_edges: int = -1

    @property
    def thresholds(self) -> list[int]:
        levels = [self.initial_level]
        levels += [a.edges for a in self.attempts if a.improved]
        return levels

    @property
    def levels_visited(self) -> int:
        return len(self.thresholds)

    @property
    def cumulative_calls(self) -> np.ndarray:
        return np.cumsum([a.calls for a in self.attempts], dtype=np.int64)

    @property
    def total_calls(self) -> int:
        return int(sum(a.calls for a in self.attempts))

    @property
    def best_so_far(self) -> np.ndarray:
        return np.maximum.accumulate([a.edges for a in self.attempts])

    def best_by_call(self, length: int | None = None) -> np.ndarray:
        """Best observed edge count after each oracle call (index 0 = call 1).

        A measurement becomes visible at the call that closes its attempt;
        before the first one the value is 0.  Padded with the final value.
        """
        total = max(self.total_calls, 1)
        length = total if length is None else max(length, total)
        out = np.zeros(length, dtype=np.int64)
        for calls, best in zip(self.cumulative_calls, self.best_so_far):
            out[max(calls, 1) - 1:] = best
        return out

    def rows(self, run_id: int = 0) -> list[dict]:
        cum = self.cumulative_calls
        best = self.best_so_far
        return [
            dict(run_id=run_id, attempt_idx=i, m=a.level, t=a.iterations,
                 charged_calls=a.calls, cumulative_calls=int(cum[i]),
                 measured_edges=a.edges, outcome=a.outcome, best_so_far=int(best[i]))
            for i, a in enumerate(self.attempts)
        ]


TRACE_COLUMNS = ("run_id", "attempt_idx", "m", "t", "charged_calls",
                 "cumulative_calls", "measured_edges", "outcome", "best_so_far")


def adaptive_search(g: Graph, k: int, cfg: SearchConfig, executor: Executor,
                    rng: np.random.Generator | None = None) -> SearchTrace:
    if not 1 <= k <= g.n:
        raise ValueError(f"k must lie in [1, {g.n}], got {k}")
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    R = cfg.R
    level = initial_threshold(g, k)
    trace = SearchTrace(g.n, k, level)
    failures = 0
    while failures < R:
        # both executors charge one call per oracle application, so the
        # charge is the iteration count
        subset, iterations = executor(g, k, level + 1, rng)
        edges = edge_count(g, subset)
        calls = iterations + (1 if cfg.charge_verification else 0)
        trace.attempts.append(Attempt(level, iterations, subset, edges, calls))
        if edges > trace.best_edges:
            trace.best_subset, trace.best_edges = subset, edges
        if edges > level:
            level, failures = edges, 0
        else:
            failures += 1
    return trace


class QuantumExecutor:
    """Runs the gate-level Grover circuit on the statevector simulator.

    Attempts at the same ``(graph, k, threshold)`` share one state sequence:
    the state after t iterations is computed once, by applying the iteration
    circuit to the state after t-1, and reused for later draws.
    """

    def __init__(self, max_qubits: int = 22):
        self.max_qubits = max_qubits
        self._cache: dict = {}

    def _marginals(self, g: Graph, k: int, m: int, t: int) -> np.ndarray:
        key = (g, k, m)
        entry = self._cache.get(key)
        if entry is None:
            layout = search_layout(g.n, k)
            if layout.num_qubits > self.max_qubits:
                raise CapacityError(
                    f"{layout.num_qubits} qubits needed, simulator limit is {self.max_qubits}"
                )
            state = run_circuit(dicke_preparation(g.n, k, layout))
            entry = {"step": grover_iteration(g, k, m, layout), "state": state,
                     "probs": [state.probabilities("q_node")]}
            self._cache[key] = entry
        probs = entry["probs"]
        while len(probs) <= t:
            entry["state"] = run_circuit(entry["step"], entry["state"])
            probs.append(entry["state"].probabilities("q_node"))
        return probs[t]

    def clear(self) -> None:
        self._cache.clear()

    def __call__(self, g: Graph, k: int, m: int, rng: np.random.Generator,
                 t: int | None = None) -> tuple[int, int]:
        if m > max_edges(k) + 1:
            raise ValueError(f"threshold {m} above k(k-1)/2 + 1")
        if t is None:
            t = sample_iteration_count(math.comb(g.n, k), rng)
        probs = self._marginals(g, k, m, t)
        subset = int(rng.choice(len(probs), p=probs / probs.sum()))
        return subset, t


def quantum_executor(g: Graph, k: int, m: int, rng: np.random.Generator,
                     t: int | None = None) -> tuple[int, int]:
    """One-shot convenience wrapper around a fresh :class:`QuantumExecutor`."""
    return QuantumExecutor()(g, k, m, rng, t)
