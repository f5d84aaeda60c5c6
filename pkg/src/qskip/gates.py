"""Gate records and the named sub-circuit constructors.

Circuits in this package are flat tuples of Gate records. Composite
operations (oracles, flag setters, diffusion, swap blocks) are built here
so every consumer agrees on wire conventions: control qubits precede
targets, and bit j of a mask refers to wires[j].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import CircuitError, ConfigurationError

_FIXED_ARITY = {
    "H": 1, "X": 1, "S": 1, "Sdg": 1, "T": 1, "Tdg": 1, "RZ": 1, "SX": 1,
    "CX": 2, "CCX": 3, "RCCX": 3, "CSWAP": 3,
}
# MCX: k >= 1 controls then one target. MCZ: any >= 1 wires, symmetric.
# PHASE_FLIP_ON: >= 1 wires plus a required bit pattern.
_VARIADIC = ("MCX", "MCZ", "PHASE_FLIP_ON")
KINDS = tuple(_FIXED_ARITY) + _VARIADIC

# kinds that may carry a declared clean-ancilla pool for lowering
_POOLED = ("MCX", "MCZ", "PHASE_FLIP_ON")


@dataclass(frozen=True)
class Gate:
    """One gate application.

    qubits lists controls first, then targets. param is the RZ angle in
    radians. mask is the bit pattern for PHASE_FLIP_ON. pool declares
    wires known to be |0> at this point in the circuit; the lowering pass
    may borrow them. tag is free-form metadata (identity-acting padding
    is tagged so downstream passes can coalesce it) and never affects
    semantics.
    """

    kind: str
    qubits: tuple[int, ...]
    param: float | None = None
    mask: int | None = None
    pool: tuple[int, ...] = ()
    tag: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))
        object.__setattr__(self, "pool", tuple(self.pool))
        if self.kind not in KINDS:
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        qs = self.qubits
        if len(set(qs)) != len(qs):
            raise CircuitError(f"{self.kind} wires must be distinct, got {qs}")
        if any(q < 0 for q in qs):
            raise CircuitError(f"negative wire index in {qs}")
        want = _FIXED_ARITY.get(self.kind)
        if want is not None and len(qs) != want:
            raise CircuitError(f"{self.kind} takes {want} wires, got {len(qs)}")
        if self.kind == "MCX" and len(qs) < 2:
            raise CircuitError("MCX needs at least one control and a target")
        if self.kind in ("MCZ", "PHASE_FLIP_ON") and len(qs) < 1:
            raise CircuitError(f"{self.kind} needs at least one wire")
        if self.kind == "RZ":
            if self.param is None:
                raise CircuitError("RZ requires an angle")
        elif self.param is not None:
            raise CircuitError(f"{self.kind} takes no parameter")
        if self.kind == "PHASE_FLIP_ON":
            if self.mask is None:
                raise CircuitError("PHASE_FLIP_ON requires a mask")
            if not 0 <= self.mask < (1 << len(qs)):
                raise CircuitError(f"mask {self.mask} out of range for {len(qs)} wires")
        elif self.mask is not None:
            raise CircuitError(f"{self.kind} takes no mask")
        if self.pool:
            if self.kind not in _POOLED:
                raise CircuitError(f"{self.kind} does not take an ancilla pool")
            if len(set(self.pool)) != len(self.pool) or set(self.pool) & set(qs):
                raise CircuitError("pool wires must be distinct from gate wires")

    @property
    def num_controls(self) -> int:
        if self.kind == "CX":
            return 1
        if self.kind in ("CCX", "CSWAP"):
            return 1 if self.kind == "CSWAP" else 2
        if self.kind == "MCX":
            return len(self.qubits) - 1
        return 0


@dataclass(frozen=True)
class OracleSpec:
    """Marked-bitstring oracle description. reps is a pure cost knob for
    the expensive variant and never changes the unitary."""

    num_qubits: int
    mask: int
    reps: int = 1

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ConfigurationError("oracle needs at least one qubit")
        if not 0 <= self.mask < (1 << self.num_qubits):
            raise ConfigurationError(
                f"mask {self.mask} out of range for {self.num_qubits} qubits")
        if self.reps < 1:
            raise ConfigurationError("reps must be >= 1")


def _resolve_wires(spec: OracleSpec, wires) -> tuple[int, ...]:
    out = tuple(wires) if wires is not None else tuple(range(spec.num_qubits))
    if len(out) != spec.num_qubits:
        raise CircuitError(
            f"oracle spans {spec.num_qubits} qubits, got {len(out)} wires")
    return out


def _x_conjugation(wires: Sequence[int], mask: int) -> tuple[Gate, ...]:
    return tuple(Gate("X", (w,)) for j, w in enumerate(wires) if not (mask >> j) & 1)


def phase_oracle(spec: OracleSpec, wires: Iterable[int] | None = None,
                 pool: Iterable[int] = ()) -> tuple[Gate, ...]:
    """Phase flip on the single marked basis state: X-conjugated MCZ over
    the zero bits of the mask."""
    ws = _resolve_wires(spec, wires)
    conj = _x_conjugation(ws, spec.mask)
    return conj + (Gate("MCZ", ws, pool=tuple(pool)),) + conj


def padding_block(wires: Sequence[int], block_index: int = 0) -> tuple[Gate, ...]:
    # one self-cancelling (T, Tdg) pair per wire; tagged per block so the
    # noise tape can treat each block as one identity span
    tag = f"pad{block_index}"
    out: list[Gate] = []
    for w in wires:
        out.append(Gate("T", (w,), tag=tag))
        out.append(Gate("Tdg", (w,), tag=tag))
    return tuple(out)


def expensive_oracle(spec: OracleSpec, wires: Iterable[int] | None = None,
                     pool: Iterable[int] = ()) -> tuple[Gate, ...]:
    """Same unitary as phase_oracle(spec); reps-1 identity padding blocks
    make its cost scale with reps."""
    ws = _resolve_wires(spec, wires)
    gates = phase_oracle(spec, ws, pool)
    for b in range(spec.reps - 1):
        gates += padding_block(ws, b)
    return gates


def expensive_oracle_gate_count(spec: OracleSpec) -> int:
    """Closed-form gate count of expensive_oracle(spec)."""
    zeros = spec.num_qubits - bin(spec.mask).count("1")
    return 2 * zeros + 1 + (spec.reps - 1) * 2 * spec.num_qubits


def set_flag(data: Iterable[int], flag: int, mask: int,
             pool: Iterable[int] = ()) -> tuple[Gate, ...]:
    """Toggle flag iff the data register equals mask (XOR semantics: a
    second application with the same data undoes the first)."""
    ws = tuple(data)
    if flag in ws:
        raise CircuitError("flag wire overlaps data register")
    if not 0 <= mask < (1 << len(ws)):
        raise CircuitError(f"mask {mask} out of range for {len(ws)} wires")
    conj = _x_conjugation(ws, mask)
    return conj + (Gate("MCX", ws + (flag,), pool=tuple(pool)),) + conj


def diffusion(wires: Iterable[int], pool: Iterable[int] = ()) -> tuple[Gate, ...]:
    """Reflection about the uniform superposition (global phase -1):
    H-wall, X-wall, MCZ, X-wall, H-wall."""
    ws = tuple(wires)
    if not ws:
        raise CircuitError("diffusion needs at least one wire")
    hs = tuple(Gate("H", (w,)) for w in ws)
    xs = tuple(Gate("X", (w,)) for w in ws)
    return hs + xs + (Gate("MCZ", ws, pool=tuple(pool)),) + xs + hs


def rccx(c1: int, c2: int, target: int) -> tuple[Gate, ...]:
    """Relative-phase Toffoli: 3 CX plus H/T/Tdg on the target.

    Same unitary as the native RCCX gate kind. Phases: identity on c1=0;
    (-1)^t on (c1=1, c2=0); i / -i on the (1,1) toggle branch. Exactly
    self-inverse, so compute/uncompute pairs cancel.
    """
    t = target
    return (
        Gate("H", (t,)), Gate("T", (t,)), Gate("CX", (c2, t)), Gate("Tdg", (t,)),
        Gate("CX", (c1, t)), Gate("T", (t,)), Gate("CX", (c2, t)), Gate("Tdg", (t,)),
        Gate("H", (t,)),
    )


def cswap_block(control: int, reg1: Iterable[int], reg2: Iterable[int]) -> tuple[Gate, ...]:
    """Controlled register exchange: one Fredkin gate per wire pair."""
    r1, r2 = tuple(reg1), tuple(reg2)
    if len(r1) != len(r2):
        raise CircuitError(f"register length mismatch: {len(r1)} vs {len(r2)}")
    return tuple(Gate("CSWAP", (control, a, b)) for a, b in zip(r1, r2))
