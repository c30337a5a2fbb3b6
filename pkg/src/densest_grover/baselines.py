"""Classical comparison procedures under the shared oracle-call accounting."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, row_mask, subset_table
from .search import sample_iteration_count

SUCCESS_TARGET = 0.95


class BlackBoxGrover:
    """Classical stand-in for one Grover attempt.

    Charges a Durr-Hoyer iteration count drawn exactly as the quantum
    executor does.  With probability 1/4, if some k-subset has at least
    ``threshold`` edges, returns the first one in bitmask order; otherwise a
    uniformly random k-subset.  The enumeration behind the first branch is
    free.  ``draws`` and ``heads`` count attempts and first-branch returns.
    """

    heads_probability = 0.25

    def __init__(self):
        self.draws = 0
        self.heads = 0

    def __call__(self, g: Graph, k: int, m: int, rng: np.random.Generator,
                 t: int | None = None) -> tuple[int, int]:
        combos, counts = subset_table(g, k)
        if t is None:
            t = sample_iteration_count(len(combos), rng)
        self.draws += 1
        if rng.random() < self.heads_probability:
            first = _first_at_least(g, k, m)
            if first is not None:
                self.heads += 1
                return row_mask(combos[first]), t
        return row_mask(combos[rng.integers(len(combos))]), t


def _first_at_least(g: Graph, k: int, m: int) -> int | None:
    _, counts = subset_table(g, k)
    hits = np.flatnonzero(counts >= m)
    return int(hits[0]) if len(hits) else None


def black_box_grover(g: Graph, k: int, m: int, rng: np.random.Generator,
                     t: int | None = None) -> tuple[int, int]:
    return BlackBoxGrover()(g, k, m, rng, t)


def brute_force_expected_cost(N: int, p_target: float = SUCCESS_TARGET) -> float:
    """Oracle calls for a random-order scan to hit the optimum with probability ``p_target``."""
    if N < 1:
        raise ValueError(f"search space size must be positive, got {N}")
    return p_target * N


# --- simulated annealing --------------------------------------------------

@dataclass(frozen=True)
class SaParams:
    """Annealing schedule.  ``steps`` is the oracle-call budget d of one run."""

    steps: int
    t0: float = 1.0
    alpha: float = 0.98
    tenure: int = 0

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError(f"steps must be at least 1, got {self.steps}")
        if not 0 < self.alpha < 1:
            raise ValueError(f"cooling factor must lie in (0, 1), got {self.alpha}")
        if self.tenure < 0 or self.t0 < 0:
            raise ValueError("tenure and initial temperature must be non-negative")

    @classmethod
    def defaults(cls, n: int, k: int) -> "SaParams":
        return cls(steps=30 * n, t0=1.0, alpha=0.98, tenure=k)


@dataclass
class SaResult:
    subset: int
    edges: int
    best_by_call: np.ndarray
    rows: list[dict] = field(default_factory=list)

    @property
    def calls(self) -> int:
        return len(self.best_by_call)


SA_COLUMNS = ("run_id", "call_idx", "current_edges", "best_so_far", "temperature", "accepted")


def simulated_annealing_run(g: Graph, k: int, params: SaParams,
                            rng: np.random.Generator, run_id: int = 0) -> SaResult:
    """One annealing run over k-subsets with single swaps and vertex tabu.

    Every evaluated subset costs one oracle call, the random start included.
    A proposal swaps a uniformly chosen non-tabu member with a uniformly
    chosen non-tabu outsider.  When one side has no non-tabu vertex the
    proposal draws from all of that side and is accepted only if it beats
    the best so far (aspiration).  Swapped vertices stay tabu for
    ``tenure`` steps.
    """
    n = g.n
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in [0, {n}], got {k}")
    adj = g.adjacency
    inside = np.zeros(n, dtype=bool)
    inside[rng.choice(n, size=k, replace=False)] = True
    current = int(adj[np.ix_(inside, inside)].sum() // 2)
    best, best_members = current, inside.copy()
    trace = [best]
    rows = [dict(run_id=run_id, call_idx=1, current_edges=current, best_so_far=best,
                 temperature=params.t0, accepted=True)]
    if k in (0, n):
        return SaResult(row_mask(np.flatnonzero(inside)), best, np.array(trace), rows)

    # neighbours of each vertex inside the current subset
    inner_degree = adj[:, inside].sum(axis=1)
    tabu_until = np.zeros(n, dtype=np.int64)
    for step in range(1, params.steps):
        temperature = params.t0 * params.alpha ** step
        free = tabu_until <= step
        members = np.flatnonzero(inside & free)
        outsiders = np.flatnonzero(~inside & free)
        tabu_move = len(members) == 0 or len(outsiders) == 0
        if len(members) == 0:
            members = np.flatnonzero(inside)
        if len(outsiders) == 0:
            outsiders = np.flatnonzero(~inside)
        u = int(members[rng.integers(len(members))])
        v = int(outsiders[rng.integers(len(outsiders))])
        candidate = current - inner_degree[u] + inner_degree[v] - adj[u, v]
        delta = candidate - current
        if tabu_move:
            accept = candidate > best
        elif delta >= 0:
            accept = True
        elif temperature > 0:
            accept = rng.random() < math.exp(delta / temperature)
        else:
            accept = False
        if accept:
            inside[u], inside[v] = False, True
            inner_degree += adj[:, v] - adj[:, u]
            current = int(candidate)
            tabu_until[[u, v]] = step + 1 + params.tenure
            if current > best:
                best, best_members = current, inside.copy()
        trace.append(best)
        rows.append(dict(run_id=run_id, call_idx=step + 1, current_edges=current,
                         best_so_far=best, temperature=temperature, accepted=bool(accept)))
    return SaResult(row_mask(np.flatnonzero(best_members)), best, np.array(trace), rows)


def sa_required_runs(s: float, target: float = SUCCESS_TARGET) -> float:
    """Independent runs needed for overall success ``target`` at per-run success ``s``."""
    if not 0 < s <= 1:
        raise ValueError(f"per-run success must lie in (0, 1], got {s}")
    if s == 1:
        return 1.0
    return max(1.0, math.log(1 - target) / math.log(1 - s))


def sa_cost(s: float, steps: int, target: float = SUCCESS_TARGET) -> int:
    return math.ceil(sa_required_runs(s, target) * steps)
