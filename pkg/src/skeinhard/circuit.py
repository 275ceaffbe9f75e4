"""A small quantum-circuit IR with two independent acceptance evaluators.

Qubit 0 is the most significant bit of a basis index, so a two-qubit gate
``U2(i, j)`` acts on the index ``2*b_i + b_j``.  Acceptance means returning
to ``|0...0>``: ``p = |<0^n| C |0^n>|**2``.

``simulate_accept`` runs a dense state vector.  ``pathsum_accept`` expands
the density matrix ``|0><0|`` gate by gate over pairs of basis states, where
Hadamards contribute ``(+-1)/2`` and permutation gates contribute ``1``; the
result is an exact dyadic rational.
"""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

MAX_QUBITS = 12
MAX_PATHSUM_HADAMARDS = 20

GATE_ARITY = {"H": 1, "X": 1, "U1": 1, "CNOT": 2, "U2": 2, "TOFFOLI": 3}
PERMUTATION_GATES = {"X", "CNOT", "TOFFOLI"}

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=complex)


class CircuitError(ValueError):
    pass


class UnsupportedGate(CircuitError):
    pass


class CircuitBudgetExceeded(CircuitError):
    pass


@dataclass(frozen=True)
class Gate:
    type: str
    qubits: tuple[int, ...]
    matrix: np.ndarray | None = field(default=None, compare=False)
    linear: bool = False

    def __post_init__(self):
        kind = self.type.upper()
        object.__setattr__(self, "type", kind)
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if kind not in GATE_ARITY:
            raise CircuitError(f"unknown gate type {self.type!r}")
        if len(self.qubits) != GATE_ARITY[kind]:
            raise CircuitError(f"{kind} acts on {GATE_ARITY[kind]} qubit(s), got {len(self.qubits)}")
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"repeated qubit in {kind}{self.qubits}")
        if kind in ("U1", "U2"):
            if self.matrix is None:
                raise CircuitError(f"{kind} needs a matrix")
            d = 2 ** len(self.qubits)
            m = np.asarray(self.matrix, dtype=complex)
            if m.shape != (d, d):
                raise CircuitError(f"{kind} matrix must be {d}x{d}, got {m.shape}")
            if not self.linear and not np.allclose(m @ m.conj().T, np.eye(d), atol=1e-9):
                raise CircuitError(f"{kind} matrix is not unitary (flag it linear to allow this)")
            object.__setattr__(self, "matrix", m)
        elif self.matrix is not None:
            raise CircuitError(f"{kind} takes no matrix")

    def unitary(self) -> np.ndarray:
        """Matrix on the gate's own qubits, first listed qubit most significant."""
        if self.matrix is not None:
            return self.matrix
        if self.type == "H":
            return _H
        if self.type == "X":
            return _X
        d = 2 ** len(self.qubits)
        m = np.eye(d, dtype=complex)
        m[[d - 2, d - 1]] = m[[d - 1, d - 2]]  # flip the target when all controls are set
        return m

    def to_dict(self) -> dict:
        d = {"type": self.type, "qubits": list(self.qubits)}
        if self.matrix is not None:
            d["matrix"] = [[[float(z.real), float(z.imag)] for z in row] for row in self.matrix]
        if self.linear:
            d["linear"] = True
        return d

    def __eq__(self, other):
        if not isinstance(other, Gate):
            return NotImplemented
        same_matrix = (self.matrix is None and other.matrix is None) or (
            self.matrix is not None and other.matrix is not None and np.array_equal(self.matrix, other.matrix)
        )
        return (self.type, self.qubits, self.linear) == (other.type, other.qubits, other.linear) and same_matrix

    def __hash__(self):
        return hash((self.type, self.qubits, self.linear))


def H(i):
    return Gate("H", (i,))


def X(i):
    return Gate("X", (i,))


def CNOT(c, t):
    return Gate("CNOT", (c, t))


def Toffoli(c1, c2, t):
    return Gate("TOFFOLI", (c1, c2, t))


def U1(i, matrix, linear=False):
    return Gate("U1", (i,), np.asarray(matrix, dtype=complex), linear)


def U2(i, j, matrix, linear=False):
    return Gate("U2", (i, j), np.asarray(matrix, dtype=complex), linear)


@dataclass(frozen=True)
class QuantumCircuit:
    n_qubits: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise CircuitError(f"n_qubits must be in 1..{MAX_QUBITS}, got {self.n_qubits}")
        gates = tuple(self.gates)
        for g in gates:
            if any(not 0 <= q < self.n_qubits for q in g.qubits):
                raise CircuitError(f"{g.type}{g.qubits} out of range for {self.n_qubits} qubits")
        object.__setattr__(self, "gates", gates)

    @property
    def hadamard_count(self) -> int:
        return sum(g.type == "H" for g in self.gates)

    def to_json(self) -> str:
        return json.dumps({"n_qubits": self.n_qubits, "gates": [g.to_dict() for g in self.gates]})

    @classmethod
    def from_json(cls, text: str | dict) -> "QuantumCircuit":
        data = json.loads(text) if isinstance(text, str) else text
        gates = []
        for g in data.get("gates", []):
            m = g.get("matrix")
            if m is not None:
                m = np.array([[complex(*z) if isinstance(z, (list, tuple)) else complex(z) for z in row] for row in m])
            gates.append(Gate(g["type"], tuple(g["qubits"]), m, bool(g.get("linear", False))))
        return cls(int(data["n_qubits"]), tuple(gates))


def apply_gate(state: np.ndarray, gate: Gate, n_qubits: int) -> np.ndarray:
    k = len(gate.qubits)
    psi = state.reshape((2,) * n_qubits)
    psi = np.moveaxis(psi, gate.qubits, range(k))
    shape = psi.shape
    psi = (gate.unitary() @ psi.reshape(2**k, -1)).reshape(shape)
    return np.moveaxis(psi, range(k), gate.qubits).reshape(-1)


def final_state(c: QuantumCircuit) -> np.ndarray:
    state = np.zeros(2**c.n_qubits, dtype=complex)
    state[0] = 1.0
    for g in c.gates:
        state = apply_gate(state, g, c.n_qubits)
        if not g.linear:
            norm = np.linalg.norm(state)
            if abs(norm - 1.0) > 1e-12:
                raise CircuitError(f"state norm drifted to {norm!r} after {g.type}{g.qubits}")
    return state


def circuit_unitary(c: QuantumCircuit) -> np.ndarray:
    d = 2**c.n_qubits
    cols = []
    for b in range(d):
        v = np.zeros(d, dtype=complex)
        v[b] = 1.0
        for g in c.gates:
            v = apply_gate(v, g, c.n_qubits)
        cols.append(v)
    return np.array(cols).T


def simulate_accept(c: QuantumCircuit) -> dict:
    amp = complex(final_state(c)[0])
    return {"amplitude": amp, "probability": abs(amp) ** 2}


@dataclass(frozen=True)
class PathSumResult:
    n_plus: int
    n_minus: int
    h: int

    @property
    def probability(self) -> Fraction:
        return Fraction(self.n_plus - self.n_minus, 2**self.h)


def _permute(x: int, gate: Gate, n: int) -> int:
    bits = [(x >> (n - 1 - q)) & 1 for q in gate.qubits]
    if all(bits[:-1]):
        x ^= 1 << (n - 1 - gate.qubits[-1])
    return x


def pathsum_accept(c: QuantumCircuit) -> PathSumResult:
    """Exact acceptance probability by summing signed density-matrix paths.

    A path is a sequence of index pairs ``(x, x')``; each Hadamard on qubit
    ``q`` branches both indices and contributes ``(-1)**(x_q b + x'_q b') / 2``.
    Paths ending at ``(0, 0)`` are tallied by sign.
    """
    for g in c.gates:
        if g.type not in PERMUTATION_GATES and g.type != "H":
            raise UnsupportedGate(f"path-sum supports H/X/CNOT/Toffoli only, got {g.type}")
    h = c.hadamard_count
    if h > MAX_PATHSUM_HADAMARDS:
        raise CircuitBudgetExceeded(f"{h} Hadamards exceed the path-sum budget of {MAX_PATHSUM_HADAMARDS}")
    n = c.n_qubits
    # (x, x') -> [paths with sign +1, paths with sign -1]
    layer = {(0, 0): (1, 0)}
    for g in c.gates:
        nxt = defaultdict(lambda: [0, 0])
        if g.type == "H":
            mask = 1 << (n - 1 - g.qubits[0])
            for (x, xp), (plus, minus) in layer.items():
                sx, sxp = bool(x & mask), bool(xp & mask)
                for b in (0, 1):
                    for bp in (0, 1):
                        neg = (sx and b) ^ (sxp and bp)
                        key = ((x & ~mask) | (mask * b), (xp & ~mask) | (mask * bp))
                        acc = nxt[key]
                        if neg:
                            acc[0] += minus
                            acc[1] += plus
                        else:
                            acc[0] += plus
                            acc[1] += minus
        else:
            for (x, xp), (plus, minus) in layer.items():
                acc = nxt[(_permute(x, g, n), _permute(xp, g, n))]
                acc[0] += plus
                acc[1] += minus
        layer = {k: tuple(v) for k, v in nxt.items() if v != [0, 0]}
    plus, minus = layer.get((0, 0), (0, 0))
    return PathSumResult(plus, minus, h)


def postselect_contract(g: np.ndarray, in_state: Sequence[complex], out_state: Sequence[complex]) -> np.ndarray:
    """Feed ``in_state`` to the left qubit of ``g`` and project its output on ``out_state``.

    Returns the 2x2 operator ``<out|_L g |in>_L`` on the right qubit.
    """
    G = np.asarray(g).reshape(2, 2, 2, 2)  # (left_out, right_out, left_in, right_in)
    vin = np.asarray(in_state)
    vout = np.conj(np.asarray(out_state))
    return np.einsum("a,abcd,c->bd", vout, G, vin)


#: The integer two-qubit gate whose postselected block is an irrational rotation.
INTEGER_GATE = np.array(
    [
        [4, -3, 1, 0],
        [3, 4, 0, 1],
        [1, 0, 0, 0],
        [0, 1, 0, 0],
    ]
)


def rotation_return_distances(R: np.ndarray, steps: int) -> np.ndarray:
    """Operator 2-norm distances ``||R^k - I||`` for ``k = 1..steps``."""
    out = np.empty(steps)
    P = np.eye(R.shape[0])
    for k in range(steps):
        P = P @ R
        out[k] = np.linalg.norm(P - np.eye(R.shape[0]), 2)
    return out
