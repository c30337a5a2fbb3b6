import itertools
import math

import numpy as np
import pytest

from densest_grover.circuits import (
    CounterSpec, counter_qubits, diffusion_circuit, dicke_preparation, edge_counter_circuit,
    grover_circuit, node_layout, oracle_circuit, resource_report, search_layout, two_qubit_cost,
)
from densest_grover.graph import Graph, edge_count, erdos_renyi
from densest_grover.sim import (
    QuantumCircuit, StateVector, circuit_unitary, run_batch, run_circuit,
)


def dicke_vector(n, k):
    v = np.zeros(2 ** n)
    idx = [i for i in range(2 ** n) if bin(i).count("1") == k]
    v[idx] = 1 / math.sqrt(len(idx))
    return v


def fidelity(a, b):
    return abs(np.vdot(a, b)) ** 2


# --- Dicke preparation -------------------------------------------------------

@pytest.mark.parametrize("n,k", [(2, 1), (3, 1), (4, 2), (3, 0), (3, 3)])
def test_dicke_examples(n, k):
    amps = run_circuit(dicke_preparation(n, k)).amplitudes
    assert 1 - fidelity(amps, dicke_vector(n, k)) <= 1e-10


def test_dicke_two_one_amplitudes():
    amps = run_circuit(dicke_preparation(2, 1)).amplitudes
    assert np.allclose(amps, [0, 1 / math.sqrt(2), 1 / math.sqrt(2), 0], atol=1e-12)


def test_dicke_gate_count_is_linear_in_nk():
    for n, k in [(6, 2), (8, 3), (10, 5)]:
        assert len(dicke_preparation(n, k)) <= 3 * n * k + n
    with pytest.raises(ValueError):
        dicke_preparation(3, 4)


def test_dicke_on_wider_layout_leaves_ancillas_alone():
    lay = search_layout(4, 2)
    probs = run_circuit(dicke_preparation(4, 2, lay)).probabilities("q_res")
    assert probs[0] == pytest.approx(1)


# --- counter -----------------------------------------------------------------

def test_counter_spec_widths():
    spec = CounterSpec.for_threshold(4, 3)
    assert (spec.max_edges, spec.count_bits, spec.width) == (6, 3, 4)
    assert spec.constant == 16 - 3
    assert CounterSpec.for_threshold(2, 2).count_bits == 1
    with pytest.raises(ValueError):
        CounterSpec.for_threshold(3, 5)


def test_comparator_sign_bit_exhaustive():
    for k in range(1, 11):
        e_max = k * (k - 1) // 2
        for m in range(e_max + 2):
            spec = CounterSpec.for_threshold(k, m)
            for count in range(e_max + 1):
                assert spec.sign_bit(count) == int(count < m)


def counter_readout(g, k, m, x):
    """Run the counter on |x>|0> and return (node value, counter value)."""
    spec = CounterSpec.for_threshold(k, m)
    lay = search_layout(g.n, k)
    sv = run_circuit(edge_counter_circuit(g, spec, lay), StateVector.basis(lay, x))
    (index,) = np.flatnonzero(np.abs(sv.amplitudes) > 1 - 1e-9)
    return index & ((1 << g.n) - 1), index >> g.n


def test_counter_examples():
    assert counter_readout(Graph.complete(3), 3, 0, 0b111) == (0b111, 3)
    path = Graph.path(4)
    assert counter_readout(path, 3, 0, 0b1101) == (0b1101, 1)
    # k=2 forces one count bit; threshold 2 gives (1 + 4 - 2) mod 4
    _, value = counter_readout(Graph.path(4), 2, 2, 0b0011)
    assert value == 3 and value >> 1 == 1


def test_counter_matches_classical_count_on_all_inputs():
    g = erdos_renyi(5, 0.6, 3)
    k = 3
    lay = search_layout(g.n, k)
    for m in (0, 2, 4):
        spec = CounterSpec.for_threshold(k, m)
        circ = edge_counter_circuit(g, spec, lay)
        for x in range(2 ** g.n):
            if edge_count(g, x) > spec.max_edges:
                continue
            out = run_circuit(circ, StateVector.basis(lay, x)).amplitudes
            expected = x | (((edge_count(g, x) + spec.constant) % spec.modulus) << g.n)
            assert abs(out[expected]) > 1 - 1e-9


def test_counter_layout_mismatch():
    with pytest.raises(ValueError):
        edge_counter_circuit(Graph.path(4), CounterSpec.for_threshold(4, 0), search_layout(4, 2))


# --- oracle --------------------------------------------------------------------

def oracle_diagonal(g, k, m):
    """Action of the oracle on every |x>|0>, as the counter=0 column block."""
    lay = search_layout(g.n, k)
    dim = 2 ** lay.num_qubits
    cols = np.zeros((2 ** g.n, dim), complex)
    cols[np.arange(2 ** g.n), np.arange(2 ** g.n)] = 1
    return run_batch(oracle_circuit(g, k, m, lay), cols)


def test_oracle_triangle():
    g = Graph.complete(3)
    out = oracle_diagonal(g, 2, 1)
    for x in range(8):
        if bin(x).count("1") != 2:
            continue
        assert np.allclose(out[x, x], -1, atol=1e-10)
    out = oracle_diagonal(g, 2, 2)
    for x in (0b011, 0b101, 0b110):
        assert np.allclose(out[x, x], 1, atol=1e-10)


@pytest.mark.parametrize("seed,k", [(0, 2), (1, 3), (2, 3), (5, 4)])
def test_oracle_is_phase_flip_returning_ancillas(seed, k):
    g = erdos_renyi(5, 0.5, seed)
    e_max = k * (k - 1) // 2
    for m in range(e_max + 2):
        out = oracle_diagonal(g, k, m)
        for x in range(2 ** g.n):
            if bin(x).count("1") != k:
                continue
            expected = np.zeros(out.shape[1])
            expected[x] = -1 if edge_count(g, x) >= m else 1
            assert np.allclose(out[x], expected, atol=1e-10)


def test_oracle_full_unitary_small():
    g = Graph.path(3)
    lay = search_layout(3, 2)
    u = circuit_unitary(oracle_circuit(g, 2, 1, lay))
    assert np.allclose(u.conj().T @ u, np.eye(len(u)), atol=1e-10)
    for x in range(8):
        if bin(x).count("1") == 2:
            assert u[x, x] == pytest.approx(-1 if edge_count(g, x) >= 1 else 1)


# --- diffusion -----------------------------------------------------------------

def test_diffusion_two_one_matrix():
    u = circuit_unitary(diffusion_circuit(2, 1))
    d = dicke_vector(2, 1)
    expected = -(2 * np.outer(d, d) - np.eye(4))
    assert np.allclose(u, expected, atol=1e-10)


@pytest.mark.parametrize("n,k", [(3, 1), (4, 2), (5, 2), (6, 3)])
def test_diffusion_is_reflection_about_dicke(n, k):
    u = circuit_unitary(diffusion_circuit(n, k))
    d = dicke_vector(n, k)
    reflection = 2 * np.outer(d, d) - np.eye(2 ** n)
    assert np.allclose(u, -reflection, atol=1e-10)
    assert np.allclose(-u @ d, d, atol=1e-10)
    other = np.zeros(2 ** n)
    other[(1 << k) - 1] = 1
    other -= np.vdot(d, other) * d
    assert np.allclose(-u @ other, -other, atol=1e-10)


# --- full iteration --------------------------------------------------------------

def test_zero_iterations_is_uniform():
    g = Graph.path(4)
    probs = run_circuit(grover_circuit(g, 2, 1, 0)).probabilities("q_node")
    assert np.allclose(probs, dicke_vector(4, 2) ** 2, atol=1e-12)


@pytest.mark.parametrize("edges,expected", [(((0, 1), (1, 2), (2, 3)), 0.5), (((0, 1),), None)])
def test_one_iteration_hit_probability(edges, expected):
    g = Graph(4, edges)
    probs = run_circuit(grover_circuit(g, 2, 1, 1)).probabilities("q_node")
    marked = [x for x in range(16) if bin(x).count("1") == 2 and edge_count(g, x) >= 1]
    M, N = len(marked), 6
    theta = math.asin(math.sqrt(M / N))
    assert probs[marked].sum() == pytest.approx(math.sin(3 * theta) ** 2, abs=1e-10)
    if expected is not None:
        assert probs[marked].sum() == pytest.approx(expected, abs=1e-10)


def test_single_marked_of_four_is_certain_after_one_step():
    g = Graph(4, ((0, 1), (1, 2)))  # only {0,1,2} reaches 2 edges
    probs = run_circuit(grover_circuit(g, 3, 2, 1)).probabilities("q_node")
    assert probs[0b0111] == pytest.approx(1, abs=1e-10)


def test_state_stays_in_weight_k_with_clean_ancillas():
    g = erdos_renyi(6, 0.5, 7)
    k = 3
    lay = search_layout(6, k)
    state = run_circuit(grover_circuit(g, k, 3, 0))
    step = grover_circuit(g, k, 3, 1)
    step.gates = step.gates[len(dicke_preparation(6, k, lay)):]
    weights = np.array([bin(x).count("1") for x in range(64)])
    for _ in range(4):
        state = run_circuit(step, state)
        assert state.probabilities("q_node")[weights != k].sum() < 1e-12
        assert state.probabilities("q_edge")[0] == pytest.approx(1, abs=1e-10)
        assert state.probabilities("q_res")[0] == pytest.approx(1, abs=1e-10)


def test_grover_circuit_rejects_negative_t():
    with pytest.raises(ValueError):
        grover_circuit(Graph.path(3), 2, 1, -1)


# --- resources --------------------------------------------------------------------

def test_two_qubit_cost_table():
    assert [two_qubit_cost(c) for c in range(5)] == [0, 1, 5, 17, 29]


def test_resource_report_basics():
    empty = resource_report(QuantumCircuit(node_layout(3)))
    assert (empty.gates, empty.depth, empty.two_qubit_gates) == (0, 0, 0)
    c = QuantumCircuit(node_layout(3)).h(0).h(1).x(2, [0, 1]).z(0)
    r = resource_report(c)
    assert (r.gates, r.depth, r.doubly_controlled, r.two_qubit_gates) == (4, 3, 1, 5)
    prep = dicke_preparation(5, 2)
    assert resource_report(prep).gates == len(prep)
    assert set(r.as_record()) >= {"qubits", "gates", "depth"}


def test_oracle_cost_is_affine_in_edges():
    n, k = 8, 4
    pairs = list(itertools.combinations(range(n), 2))
    lay = search_layout(n, k)
    width = len(counter_qubits(lay))
    sizes, totals, doubly = [], [], []
    for e in range(0, len(pairs) + 1, 4):
        g = Graph(n, tuple(pairs[:e]))
        r = resource_report(oracle_circuit(g, k, 3, lay))
        sizes.append(e)
        totals.append(r.gates)
        doubly.append(r.doubly_controlled)
    assert np.array_equal(np.diff(doubly), np.full(len(sizes) - 1, 4 * 2 * width))
    slope = np.polyfit(sizes, totals, 1)[0]
    assert slope == pytest.approx(2 * width)
