"""Dense statevector simulation.

Convention: little-endian, qubit 0 is the least significant bit of the
basis index. Gates mutate amplitudes in place through reshaped views;
multi-controlled gates are applied as conditional amplitude updates, not
through their decomposed forms, so logical semantics stay independent of
the cost model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapabilityError, CircuitError, ConfigurationError
from .gates import Gate

MAX_QUBITS = 24
UNITARY_QUBIT_CAP = 12

_H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)
_SX = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=np.complex128)
_PHASE = {
    "S": 1j,
    "Sdg": -1j,
    "T": np.exp(0.25j * np.pi),
    "Tdg": np.exp(-0.25j * np.pi),
}


@dataclass
class Statevector:
    """Amplitudes of an num_qubits register, shape (2**num_qubits,)."""

    num_qubits: int
    amplitudes: np.ndarray

    def tensor(self) -> np.ndarray:
        """View with one axis per qubit; axis j addresses qubit
        num_qubits-1-j (little-endian, last axis fastest)."""
        return self.amplitudes.reshape((2,) * self.num_qubits)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def copy(self) -> "Statevector":
        return Statevector(self.num_qubits, self.amplitudes.copy())


@dataclass(frozen=True)
class ProjectorQuery:
    """Conjunction of (qubit, bit) constraints."""

    constraints: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "constraints", tuple((int(q), int(b)) for q, b in self.constraints))
        qs = [q for q, _ in self.constraints]
        if len(set(qs)) != len(qs):
            raise CircuitError("query constrains a qubit twice")
        if any(b not in (0, 1) for _, b in self.constraints):
            raise CircuitError("constraint bits must be 0 or 1")


def init_state(num_qubits: int) -> Statevector:
    """|0...0> on num_qubits wires. Bounds: 1..24 (dense amplitudes)."""
    if not isinstance(num_qubits, int) or not 1 <= num_qubits <= MAX_QUBITS:
        raise ConfigurationError(
            f"num_qubits must be an integer in [1, {MAX_QUBITS}], got {num_qubits}")
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return Statevector(num_qubits, amps)


def _ix(nq: int, pairs) -> tuple:
    """Index tuple fixing the given (qubit, bit) pairs; other leading axes
    and any trailing batch axes are left alone."""
    out = [slice(None)] * nq
    for q, b in pairs:
        out[nq - 1 - q] = b
    return tuple(out)


def _apply_1q_dense(t: np.ndarray, nq: int, q: int, m: np.ndarray) -> None:
    i0, i1 = _ix(nq, [(q, 0)]), _ix(nq, [(q, 1)])
    a0 = t[i0].copy()
    a1 = t[i1]
    t[i0] = m[0, 0] * a0 + m[0, 1] * a1
    t[i1] = m[1, 0] * a0 + m[1, 1] * a1


def _swap_sectors(t: np.ndarray, ia, ib) -> None:
    tmp = t[ia].copy()
    t[ia] = t[ib]
    t[ib] = tmp


def _apply(t: np.ndarray, nq: int, g: Gate) -> None:
    """Apply one gate to a tensor whose leading nq axes are qubits. Extra
    trailing axes (e.g. unitary columns) ride along unchanged."""
    k, qs = g.kind, g.qubits
    if k == "H":
        _apply_1q_dense(t, nq, qs[0], _H)
    elif k == "SX":
        _apply_1q_dense(t, nq, qs[0], _SX)
    elif k == "RZ":
        t[_ix(nq, [(qs[0], 0)])] *= np.exp(-0.5j * g.param)
        t[_ix(nq, [(qs[0], 1)])] *= np.exp(0.5j * g.param)
    elif k in _PHASE:
        t[_ix(nq, [(qs[0], 1)])] *= _PHASE[k]
    elif k == "X":
        _swap_sectors(t, _ix(nq, [(qs[0], 0)]), _ix(nq, [(qs[0], 1)]))
    elif k in ("CX", "CCX", "MCX"):
        *ctl, tg = qs
        on = [(c, 1) for c in ctl]
        _swap_sectors(t, _ix(nq, on + [(tg, 0)]), _ix(nq, on + [(tg, 1)]))
    elif k == "MCZ":
        t[_ix(nq, [(q, 1) for q in qs])] *= -1.0
    elif k == "PHASE_FLIP_ON":
        t[_ix(nq, [(q, (g.mask >> j) & 1) for j, q in enumerate(qs)])] *= -1.0
    elif k == "CSWAP":
        c, a, b = qs
        _swap_sectors(t, _ix(nq, [(c, 1), (a, 0), (b, 1)]),
                      _ix(nq, [(c, 1), (a, 1), (b, 0)]))
    elif k == "RCCX":
        c1, c2, tg = qs
        t[_ix(nq, [(c1, 1), (c2, 0), (tg, 1)])] *= -1.0
        i10 = _ix(nq, [(c1, 1), (c2, 1), (tg, 0)])
        i11 = _ix(nq, [(c1, 1), (c2, 1), (tg, 1)])
        tmp = t[i10].copy()
        t[i10] = -1j * t[i11]
        t[i11] = 1j * tmp
    else:
        raise CircuitError(f"engine cannot apply kind {k!r}")


def apply_gate(state: Statevector, gate: Gate) -> Statevector:
    """Apply gate in place and return the state."""
    if any(q >= state.num_qubits for q in gate.qubits):
        raise CircuitError(
            f"{gate.kind} on {gate.qubits} exceeds {state.num_qubits} qubits")
    _apply(state.tensor(), state.num_qubits, gate)
    return state


def probability(state: Statevector, query: ProjectorQuery) -> float:
    """Total probability mass of the basis states matching the query."""
    if any(q >= state.num_qubits for q, _ in query.constraints):
        raise CircuitError("query wire exceeds register width")
    sector = state.tensor()[_ix(state.num_qubits, query.constraints)]
    return float(np.sum(np.abs(sector) ** 2))


def to_unitary(circuit) -> np.ndarray:
    """Dense matrix of the ordered gate product. Test-scale only: refuses
    more than 12 qubits. Accepts anything with .num_qubits and .gates."""
    nq = circuit.num_qubits
    if nq > UNITARY_QUBIT_CAP:
        raise CapabilityError(
            f"dense unitary capped at {UNITARY_QUBIT_CAP} qubits, got {nq}")
    dim = 1 << nq
    mat = np.eye(dim, dtype=np.complex128)
    view = mat.reshape((2,) * nq + (dim,))
    for g in circuit.gates:
        if any(q >= nq for q in g.qubits):
            raise CircuitError(
                f"{g.kind} on {g.qubits} exceeds {nq} qubits")
        _apply(view, nq, g)
    return mat


def gates_to_unitary(gates, num_qubits: int) -> np.ndarray:
    """to_unitary for a bare gate sequence."""
    from types import SimpleNamespace

    return to_unitary(SimpleNamespace(num_qubits=num_qubits, gates=tuple(gates)))
