"""Graphs, k-subset bookkeeping, classical reference solvers and the QUBO form.

Vertex subsets are plain Python ``int`` bitmasks: bit ``i`` set means vertex
``i`` is in the subset.  Written as a bitstring the highest vertex comes
first, so lexicographic order on bitstrings is integer order on masks.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class GenerationError(RuntimeError):
    """Rejection sampling ran out of attempts."""


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices ``0..n-1``.

    Edges are normalised to ``(i, j)`` with ``i < j`` and stored sorted.
    """

    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"vertex count must be a positive integer, got {self.n!r}")
        normalised = set()
        for e in self.edges:
            i, j = (int(v) for v in e)
            if i == j:
                raise ValueError(f"self-loop on vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge {(i, j)} has an endpoint outside [0, {self.n})")
            pair = (min(i, j), max(i, j))
            if pair in normalised:
                raise ValueError(f"duplicate edge {pair}")
            normalised.add(pair)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "edges", tuple(sorted(normalised)))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @functools.cached_property
    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for i, j in self.edges:
            a[i, j] = a[j, i] = 1
        a.setflags(write=False)
        return a

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, tuple(itertools.combinations(range(n), 2)))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls(n, tuple((i, i + 1) for i in range(n - 1)))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, ())


# --- subsets --------------------------------------------------------------

def mask_from_vertices(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << int(v)
    return mask


def vertices_of(mask: int) -> list[int]:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def bitstring(mask: int, n: int) -> str:
    return format(mask, f"0{n}b")


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def edge_count(g: Graph, s: int) -> int:
    """Number of edges of ``g`` with both endpoints in subset ``s``."""
    if s < 0 or s >> g.n:
        raise ValueError(f"subset {s:b} addresses vertices outside [0, {g.n})")
    return sum(1 for i, j in g.edges if (s >> i) & 1 and (s >> j) & 1)


def max_edges(k: int) -> int:
    return k * (k - 1) // 2


def initial_threshold(g: Graph, k: int) -> int:
    """Expected induced edge count of a random k-subset, rounded down."""
    if not 1 <= k <= g.n:
        raise ValueError(f"k must lie in [1, {g.n}], got {k}")
    pairs = math.comb(g.n, 2)
    if pairs == 0:
        return 0
    # integer arithmetic: floor(|E| * C(k,2) / C(n,2))
    return g.num_edges * math.comb(k, 2) // pairs


# --- enumeration ----------------------------------------------------------

def k_subsets(n: int, k: int) -> np.ndarray:
    """All k-subsets of ``range(n)`` as rows, in increasing bitmask order.

    Lexicographic combinations of the mirrored vertex set, reversed, give
    colex order, which is increasing bitmask order.
    """
    count = math.comb(n, k)
    dtype = np.uint8 if n <= 256 else np.uint16
    if k == 0:
        return np.zeros((1, 0), dtype=dtype)
    flat = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(n), k)),
        dtype=dtype,
        count=count * k,
    )
    combos = (n - 1 - flat.reshape(count, k).astype(np.int64))[::-1]
    return np.ascontiguousarray(combos.astype(dtype))


def row_mask(row: Sequence[int]) -> int:
    return mask_from_vertices(int(v) for v in row)


@functools.lru_cache(maxsize=64)
def subset_table(g: Graph, k: int) -> tuple[np.ndarray, np.ndarray]:
    """``(combos, counts)`` for every k-subset of ``g`` in bitmask order.

    Cached per graph; the arrays are read-only.
    """
    if not 0 <= k <= g.n:
        raise ValueError(f"k must lie in [0, {g.n}], got {k}")
    combos = k_subsets(g.n, k)
    a = g.adjacency
    counts = np.zeros(len(combos), dtype=np.int64)
    idx = combos.astype(np.intp)
    for a_col, b_col in itertools.combinations(range(k), 2):
        counts += a[idx[:, a_col], idx[:, b_col]]
    combos.setflags(write=False)
    counts.setflags(write=False)
    return combos, counts


def brute_force_densest(g: Graph, k: int, budget: int = 5_000_000) -> tuple[int, int, int]:
    """Exhaustive search: ``(subset, edges, oracle_calls)``.

    Ties go to the smallest bitmask.  Every k-subset costs one call.
    """
    size = math.comb(g.n, k)
    if size > budget:
        raise ValueError(f"C({g.n},{k}) = {size} exceeds the enumeration budget {budget}")
    combos, counts = subset_table(g, k)
    best = int(np.argmax(counts))
    return row_mask(combos[best]), int(counts[best]), size


# --- random graphs --------------------------------------------------------

def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def erdos_renyi(n: int, p: float, seed=None) -> Graph:
    """G(n, p): every pair kept independently with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    rng = _as_rng(seed)
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(len(iu)) < p
    return Graph(n, tuple(zip(iu[keep].tolist(), ju[keep].tolist())))


def has_unique_densest(g: Graph, k: int) -> bool:
    _, counts = subset_table(g, k)
    return int(np.count_nonzero(counts == counts.max())) == 1


def erdos_renyi_unique_densest(n: int, p: float, k: int, seed=None,
                               max_attempts: int = 10_000) -> Graph:
    """Rejection-sample G(n, p) until exactly one k-subset is densest."""
    rng = _as_rng(seed)
    for _ in range(max_attempts):
        g = erdos_renyi(n, p, rng)
        if has_unique_densest(g, k):
            return g
    raise GenerationError(
        f"no G({n}, {p}) with a unique densest {k}-subset after {max_attempts} draws"
    )


# --- QUBO -----------------------------------------------------------------

@dataclass(frozen=True)
class QuboModel:
    """Penalty QUBO for densest k-subgraph.

    ``quadratic`` is strictly upper triangular.  ``offset`` is the dropped
    ``lam * k**2`` constant, kept so energies equal
    ``-edges(x) + lam * (sum(x) - k)**2`` exactly.
    """

    n: int
    k: int
    lam: float
    linear: np.ndarray
    quadratic: np.ndarray
    offset: float


def default_penalty(k: int) -> float:
    return max_edges(k) + 1.0


def qubo_build(g: Graph, k: int, lam: float | None = None) -> QuboModel:
    if lam is None:
        lam = default_penalty(k)
    if not lam > max_edges(k):
        raise ValueError(f"penalty must exceed k(k-1)/2 = {max_edges(k)}, got {lam}")
    linear = np.full(g.n, lam * (1 - 2 * k), dtype=float)
    quadratic = np.triu(2.0 * lam - g.adjacency, 1)
    linear.setflags(write=False)
    quadratic.setflags(write=False)
    return QuboModel(g.n, k, float(lam), linear, quadratic, float(lam * k * k))


def qubo_energy(q: QuboModel, x) -> float | np.ndarray:
    """Energy of bit vector ``x`` (``x[i]`` is vertex ``i``).

    A 2-D array is treated as a batch of rows.
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != q.n:
        raise ValueError(f"bit vector has length {x.shape[-1]}, model has {q.n} variables")
    quad = np.einsum("...i,ij,...j->...", x, q.quadratic, x)
    out = x @ q.linear + quad + q.offset
    return float(out) if out.ndim == 0 else out


# --- edge-list files ------------------------------------------------------

def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.num_edges}"]
    lines += [f"{i} {j}" for i, j in g.edges]
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Graph:
    lines = text.splitlines()
    if not lines:
        raise ValueError("empty edge list")
    try:
        n, m = (int(v) for v in lines[0].split())
        edges = []
        for line in lines[1:1 + m]:
            i, j = (int(v) for v in line.split())
            if not i < j:
                raise ValueError(f"edge line {line!r} must satisfy i < j")
            edges.append((i, j))
    except ValueError as exc:
        raise ValueError(f"malformed edge list: {exc}") from None
    if len(edges) != m or any(line.strip() for line in lines[1 + m:]):
        raise ValueError(f"header announces {m} edges, file holds {len(lines) - 1}")
    return Graph(n, tuple(edges))


def write_edge_list(g: Graph, path) -> None:
    Path(path).write_text(format_edge_list(g), encoding="utf-8")


def read_edge_list(path) -> Graph:
    return parse_edge_list(Path(path).read_text(encoding="utf-8"))
