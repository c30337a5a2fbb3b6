"""Dense statevector simulator for the small gate set the search circuits use.

Bit order: qubit ``q`` is bit ``q`` of the flat amplitude index, so the
first register in a layout (``q_node`` for the search circuits) occupies the
low-order bits.  Multi-controlled gates act directly on the amplitudes with
no ancilla decomposition; gate costs are accounted for separately by
:func:`densest_grover.circuits.resource_report`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

STATE_ATOL = 1e-10
NORM_ATOL = 1e-9

KINDS = ("H", "X", "Z", "P", "RY")
_PARAMETRIC = ("P", "RY")
_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


class CapacityError(RuntimeError):
    """The requested state does not fit the simulator's qubit budget."""


@dataclass(frozen=True)
class RegisterLayout:
    """Named, contiguous qubit ranges, allocated from qubit 0 upward."""

    registers: tuple[tuple[str, int, int], ...]  # (name, start, size)

    @classmethod
    def from_sizes(cls, sizes) -> "RegisterLayout":
        regs, start = [], 0
        for name, size in sizes:
            if size < 0:
                raise ValueError(f"register {name!r} has negative size")
            regs.append((name, start, int(size)))
            start += int(size)
        names = [r[0] for r in regs]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate register names in {names}")
        return cls(tuple(regs))

    @property
    def num_qubits(self) -> int:
        return sum(size for _, _, size in self.registers)

    def __getitem__(self, name: str) -> range:
        for reg, start, size in self.registers:
            if reg == name:
                return range(start, start + size)
        raise KeyError(f"no register named {name!r}")

    def __contains__(self, name: str) -> bool:
        return any(reg == name for reg, _, _ in self.registers)


@dataclass(frozen=True)
class GateOp:
    kind: str
    target: int
    controls: tuple[int, ...] = ()
    theta: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if (self.theta is None) == (self.kind in _PARAMETRIC):
            raise ValueError(f"gate {self.kind} {'needs' if self.theta is None else 'takes no'} angle")
        controls = tuple(int(c) for c in self.controls)
        if self.target in controls or len(set(controls)) != len(controls):
            raise ValueError(f"controls {controls} must be distinct and exclude target {self.target}")
        object.__setattr__(self, "controls", controls)

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + (self.target,)

    def inverse(self) -> "GateOp":
        if self.theta is None:
            return self
        return GateOp(self.kind, self.target, self.controls, -self.theta)

    def matrix(self) -> np.ndarray:
        """The 2x2 block applied to the target when all controls are 1."""
        if self.kind == "H":
            return _H
        if self.kind == "X":
            return np.array([[0, 1], [1, 0]], dtype=complex)
        if self.kind == "Z":
            return np.diag([1, -1]).astype(complex)
        if self.kind == "P":
            return np.diag([1, np.exp(1j * self.theta)])
        c, s = math.cos(self.theta / 2), math.sin(self.theta / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)

    def dump(self) -> str:
        parts = [self.kind, str(self.target), *map(str, self.controls)]
        if self.theta is not None:
            parts.append(repr(float(self.theta)))
        return " ".join(parts)

    @classmethod
    def parse(cls, line: str) -> "GateOp":
        kind, *rest = line.split()
        theta = float(rest.pop()) if kind in _PARAMETRIC else None
        target, *controls = (int(v) for v in rest)
        return cls(kind, target, tuple(controls), theta)


@dataclass
class QuantumCircuit:
    """Ordered gate list over a register layout.

    Indices are checked as gates are added, so a circuit that exists can
    always run.
    """

    layout: RegisterLayout
    gates: list[GateOp] = field(default_factory=list)

    def __post_init__(self):
        gates, self.gates = list(self.gates), []
        for g in gates:
            self.append(g)

    @property
    def num_qubits(self) -> int:
        return self.layout.num_qubits

    def __len__(self) -> int:
        return len(self.gates)

    def append(self, gate: GateOp) -> "QuantumCircuit":
        for q in gate.qubits:
            if not 0 <= q < self.num_qubits:
                raise ValueError(f"{gate.kind} addresses qubit {q} of a {self.num_qubits}-qubit circuit")
        self.gates.append(gate)
        return self

    def h(self, target, controls=()):
        return self.append(GateOp("H", target, tuple(controls)))

    def x(self, target, controls=()):
        return self.append(GateOp("X", target, tuple(controls)))

    def z(self, target, controls=()):
        return self.append(GateOp("Z", target, tuple(controls)))

    def p(self, theta, target, controls=()):
        return self.append(GateOp("P", target, tuple(controls), float(theta)))

    def ry(self, theta, target, controls=()):
        return self.append(GateOp("RY", target, tuple(controls), float(theta)))

    def extend(self, other) -> "QuantumCircuit":
        for g in (other.gates if isinstance(other, QuantumCircuit) else other):
            self.append(g)
        return self

    def inverse(self) -> "QuantumCircuit":
        return QuantumCircuit(self.layout, [g.inverse() for g in reversed(self.gates)])

    def on(self, layout: RegisterLayout) -> "QuantumCircuit":
        """Same gates, hosted on a (wider) layout."""
        return QuantumCircuit(layout, self.gates)

    def dump(self) -> str:
        return "".join(g.dump() + "\n" for g in self.gates)

    @classmethod
    def parse(cls, layout: RegisterLayout, text: str) -> "QuantumCircuit":
        return cls(layout, [GateOp.parse(line) for line in text.splitlines() if line.strip()])


@dataclass
class StateVector:
    amplitudes: np.ndarray
    layout: RegisterLayout

    @classmethod
    def zero(cls, layout: RegisterLayout) -> "StateVector":
        return cls.basis(layout, 0)

    @classmethod
    def basis(cls, layout: RegisterLayout, index: int) -> "StateVector":
        amps = np.zeros(2 ** layout.num_qubits, dtype=complex)
        amps[index] = 1.0
        return cls(amps, layout)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self, register: str | None = None) -> np.ndarray:
        """Born-rule distribution of a register, indexed by its integer value."""
        probs = np.abs(self.amplitudes) ** 2
        if register is None:
            return probs
        reg = self.layout[register]
        low, width = reg.start, len(reg)
        high = self.layout.num_qubits - low - width
        return probs.reshape(2 ** high, 2 ** width, 2 ** low).sum(axis=(0, 2))


# --- execution ------------------------------------------------------------

def _compile(gate: GateOp, nq: int, batch: bool):
    """Index tuples selecting the target=0 / target=1 blocks under the controls."""
    lead = (slice(None),) if batch else ()
    sel = [slice(None)] * nq
    for c in gate.controls:
        sel[nq - 1 - c] = 1
    ax = nq - 1 - gate.target
    sel[ax] = 0
    i0 = lead + tuple(sel)
    sel[ax] = 1
    i1 = lead + tuple(sel)
    return i0, i1


def _apply(tensor: np.ndarray, gate: GateOp, i0, i1) -> None:
    kind = gate.kind
    if kind == "Z":
        tensor[i1] *= -1
    elif kind == "P":
        tensor[i1] *= np.exp(1j * gate.theta)
    elif kind == "X":
        tmp = tensor[i0].copy()
        tensor[i0] = tensor[i1]
        tensor[i1] = tmp
    else:
        m = gate.matrix()
        a = tensor[i0].copy()
        b = tensor[i1]
        tensor[i0] = m[0, 0] * a + m[0, 1] * b
        tensor[i1] = m[1, 0] * a + m[1, 1] * b


def _run_tensor(c: QuantumCircuit, tensor: np.ndarray, batch: bool) -> np.ndarray:
    nq = c.num_qubits
    for gate in c.gates:
        i0, i1 = _compile(gate, nq, batch)
        _apply(tensor, gate, i0, i1)
    return tensor


def run_circuit(c: QuantumCircuit, initial: StateVector | None = None) -> StateVector:
    """Apply ``c`` to ``initial`` (default ``|0...0>``) and return a new state."""
    if initial is None:
        initial = StateVector.zero(c.layout)
    if initial.amplitudes.shape != (2 ** c.num_qubits,):
        raise ValueError(
            f"state has {initial.amplitudes.size} amplitudes, circuit needs {2 ** c.num_qubits}"
        )
    nq = c.num_qubits
    amps = np.array(initial.amplitudes, dtype=complex)
    _run_tensor(c, amps.reshape((2,) * nq), batch=False)
    return StateVector(amps, c.layout)


def run_batch(c: QuantumCircuit, states: np.ndarray) -> np.ndarray:
    """Apply ``c`` to each row of ``states`` (shape ``(B, 2**Q)``)."""
    nq = c.num_qubits
    out = np.array(states, dtype=complex)
    if out.ndim != 2 or out.shape[1] != 2 ** nq:
        raise ValueError(f"expected shape (B, {2 ** nq}), got {out.shape}")
    _run_tensor(c, out.reshape((len(out),) + (2,) * nq), batch=True)
    return out


def circuit_unitary(c: QuantumCircuit, max_qubits: int = 12) -> np.ndarray:
    """Full ``2**Q x 2**Q`` unitary, column ``j`` being the image of ``|j>``."""
    if c.num_qubits > max_qubits:
        raise CapacityError(f"unitary of {c.num_qubits} qubits refused (limit {max_qubits})")
    dim = 2 ** c.num_qubits
    return run_batch(c, np.eye(dim, dtype=complex)).T


def sample_register(sv: StateVector, register: str, rng: np.random.Generator) -> str:
    """Measure ``register`` once; the outcome as a bitstring, high qubit first."""
    probs = sv.probabilities(register)
    value = int(rng.choice(len(probs), p=probs / probs.sum()))
    return format(value, f"0{len(sv.layout[register])}b")
