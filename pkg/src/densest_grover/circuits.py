"""Gate-level builders for the densest-k-subgraph Grover search.

Register layout of the assembled circuit (low qubits first)::

    q_node  n qubits      vertex i -> qubit i
    q_edge  L qubits      counter bits 0..L-1
    q_res   1 qubit       counter bit L, the sign bit read by the comparator

The counter is kept in the Fourier basis between the opening Hadamards and
the closing inverse QFT.  With the convention used here, counter bit ``j``
carries the phase ``2*pi*v / 2**(j+1)`` for register value ``v``, so adding
``a`` is one phase rotation of ``2*pi*a / 2**(j+1)`` on every counter bit and
the inverse QFT needs no swaps.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .graph import Graph, max_edges
from .sim import QuantumCircuit, RegisterLayout

_ANGLE_ATOL = 1e-12


def node_layout(n: int) -> RegisterLayout:
    return RegisterLayout.from_sizes([("q_node", n)])


def search_layout(n: int, k: int) -> RegisterLayout:
    bits = CounterSpec.for_threshold(k, 0).count_bits
    return RegisterLayout.from_sizes([("q_node", n), ("q_edge", bits), ("q_res", 1)])


def counter_qubits(layout: RegisterLayout) -> list[int]:
    return [*layout["q_edge"], *layout["q_res"]]


@dataclass(frozen=True)
class CounterSpec:
    """Width and comparator constant of the edge counter for one threshold.

    ``count_bits = ceil(log2(max_edges + 1))`` holds every count; the extra
    sign bit makes ``(count - m) mod 2**(count_bits + 1)`` wraparound-free
    for ``0 <= count <= max_edges`` and ``0 <= m <= max_edges + 1``.
    """

    k: int
    threshold: int
    max_edges: int
    count_bits: int
    constant: int

    @classmethod
    def for_threshold(cls, k: int, m: int) -> "CounterSpec":
        e_max = max_edges(k)
        if not 0 <= m <= e_max + 1:
            raise ValueError(f"threshold {m} outside [0, {e_max + 1}] for k={k}")
        bits = e_max.bit_length()
        modulus = 2 ** (bits + 1)
        return cls(k, m, e_max, bits, (modulus - m) % modulus)

    @property
    def width(self) -> int:
        return self.count_bits + 1

    @property
    def modulus(self) -> int:
        return 2 ** self.width

    def sign_bit(self, count: int) -> int:
        """Classical model of the comparator: 1 iff ``count < threshold``."""
        return ((count + self.constant) % self.modulus) >> self.count_bits


# --- Dicke states ---------------------------------------------------------

def _split_cyclic_shift(circ: QuantumCircuit, n: int, k: int) -> None:
    # Acts on qubits n-k-1 .. n-1 of the first n.
    last = n - 1
    for l in range(1, k + 1):
        theta = 2 * math.acos(math.sqrt(l / n))
        split = n - l - 1
        circ.x(last, [split])
        if l == 1:
            circ.ry(theta, split, [last])
        else:
            circ.ry(theta, split, [last, n - l])
        circ.x(last, [split])


def dicke_preparation(n: int, k: int, layout: RegisterLayout | None = None) -> QuantumCircuit:
    """Circuit taking ``|0...0>`` on the first ``n`` qubits to ``|D^n_k>``.

    X gates load weight k onto the top k qubits; the split-and-cyclic-shift
    network (controlled-Ry blocks, O(kn) gates) then spreads it uniformly.
    """
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    circ = QuantumCircuit(layout or node_layout(n))
    for q in range(n - k, n):
        circ.x(q)
    if k == 0:
        return circ
    size = n
    while size > k:
        _split_cyclic_shift(circ, size, k)
        size -= 1
    while size > 1:
        _split_cyclic_shift(circ, size, size - 1)
        size -= 1
    return circ


# --- oracle ---------------------------------------------------------------

def _fourier_add(circ: QuantumCircuit, counter: list[int], value: int, controls=()) -> None:
    for bit, q in enumerate(counter):
        angle = math.remainder(2 * math.pi * value / 2 ** (bit + 1), 2 * math.pi)
        if abs(angle) > _ANGLE_ATOL:
            circ.p(angle, q, controls)


def _inverse_qft(circ: QuantumCircuit, counter: list[int]) -> None:
    for j, target in enumerate(counter):
        for i in range(j):
            circ.p(-2 * math.pi / 2 ** (j - i + 1), target, [counter[i]])
        circ.h(target)


def edge_counter_circuit(g: Graph, spec: CounterSpec,
                         layout: RegisterLayout | None = None) -> QuantumCircuit:
    """``|x>|0> -> |x>|(edges(x) + C) mod 2**(L+1)>`` in one Fourier pass."""
    layout = layout or search_layout(g.n, spec.k)
    counter = counter_qubits(layout)
    if len(counter) != spec.width:
        raise ValueError(f"layout counter has {len(counter)} qubits, spec needs {spec.width}")
    circ = QuantumCircuit(layout)
    for q in counter:
        circ.h(q)
    for i, j in g.edges:
        _fourier_add(circ, counter, 1, controls=(i, j))
    _fourier_add(circ, counter, spec.constant)
    _inverse_qft(circ, counter)
    return circ


def oracle_circuit(g: Graph, k: int, m: int,
                   layout: RegisterLayout | None = None) -> QuantumCircuit:
    """Phase oracle ``|x>|0> -> (-1)^[edges(x) >= m] |x>|0>``.

    Valid for inputs with at most k(k-1)/2 induced edges, which covers every
    weight-k input.  ``m = k(k-1)/2 + 1`` is accepted and marks nothing.
    """
    spec = CounterSpec.for_threshold(k, m)
    layout = layout or search_layout(g.n, k)
    count = edge_counter_circuit(g, spec, layout)
    res = layout["q_res"][0]
    circ = QuantumCircuit(layout).extend(count)
    # sign bit 0 <=> count >= m; flip that branch
    circ.x(res).z(res).x(res)
    return circ.extend(count.inverse())


def diffusion_circuit(n: int, k: int, layout: RegisterLayout | None = None) -> QuantumCircuit:
    """Reflection about ``|D^n_k>`` on the first n qubits.

    Built as ``P (I - 2|0><0|) P^dagger`` with P the Dicke preparation, i.e.
    ``2|D><D| - I`` times a global phase of -1.
    """
    layout = layout or node_layout(n)
    prep = dicke_preparation(n, k, layout)
    circ = QuantumCircuit(layout).extend(prep.inverse())
    for q in range(n):
        circ.x(q)
    circ.z(n - 1, range(n - 1))
    for q in range(n):
        circ.x(q)
    return circ.extend(prep)


def grover_iteration(g: Graph, k: int, m: int,
                     layout: RegisterLayout | None = None) -> QuantumCircuit:
    layout = layout or search_layout(g.n, k)
    return (QuantumCircuit(layout)
            .extend(oracle_circuit(g, k, m, layout))
            .extend(diffusion_circuit(g.n, k, layout)))


def grover_circuit(g: Graph, k: int, m: int, t: int) -> QuantumCircuit:
    """Dicke preparation followed by ``t`` oracle+diffusion rounds."""
    if t < 0:
        raise ValueError(f"iteration count must be non-negative, got {t}")
    layout = search_layout(g.n, k)
    circ = dicke_preparation(g.n, k, layout)
    step = grover_iteration(g, k, m, layout)
    for _ in range(t):
        circ.extend(step)
    return circ


# --- resources ------------------------------------------------------------

@dataclass(frozen=True)
class ResourceReport:
    """Gate counts under the decomposition accounting of :func:`two_qubit_cost`."""

    qubits: int
    gates: int
    two_qubit_gates: int
    doubly_controlled: int
    multi_controlled: int
    depth: int
    ancillas: int

    def as_record(self) -> dict:
        return asdict(self)


def two_qubit_cost(num_controls: int) -> int:
    """Two-qubit gates charged for one gate with this many controls.

    0 controls: 0.  1 control: 1 native controlled gate.  2 controls: 5
    (controlled-V, CX, controlled-V^dagger, CX, controlled-V).  c >= 3
    controls: a Toffoli ladder into c-2 ancillas, computed and uncomputed
    (2(c-2) Toffolis at 6 CX each) around one doubly-controlled gate.
    """
    if num_controls == 0:
        return 0
    if num_controls == 1:
        return 1
    if num_controls == 2:
        return 5
    return 12 * (num_controls - 2) + 5


def resource_report(c: QuantumCircuit) -> ResourceReport:
    last_layer = [0] * c.num_qubits
    depth = two_q = doubly = multi = ancillas = 0
    for g in c.gates:
        nc = len(g.controls)
        two_q += two_qubit_cost(nc)
        doubly += nc == 2
        multi += nc >= 3
        ancillas = max(ancillas, nc - 2)
        layer = 1 + max(last_layer[q] for q in g.qubits)
        for q in g.qubits:
            last_layer[q] = layer
        depth = max(depth, layer)
    return ResourceReport(c.num_qubits, len(c.gates), two_q, doubly, multi, depth, ancillas)
