"""Ordered-gate circuit representation.

A Circuit is a flat gate tuple plus register names, non-collapsing probe
points, stream marks (used for per-section cost breakdowns), and final
measurement declarations. Probes record a projector probability mid-run
without disturbing the state; measurements are declarations only, the
actual readout happens in the sampling layer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from .engine import ProjectorQuery, Statevector, apply_gate, init_state, probability
from .errors import CircuitError, ConfigurationError
from .gates import Gate


@dataclass(frozen=True)
class RegisterLayout:
    """Named wire assignment. The skip-gate layout uses all fields; the
    fixed-order layout has no control, no ancilla and no dummy register
    but carries one idle spare wire."""

    n: int
    xA: tuple[int, ...]
    xB: tuple[int, ...]
    fA: int
    fB: int
    C: int | None = None
    anc: int | None = None
    dB: tuple[int, ...] = ()
    spare: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "xA", tuple(self.xA))
        object.__setattr__(self, "xB", tuple(self.xB))
        object.__setattr__(self, "dB", tuple(self.dB))
        wires = self.all_wires()
        if len(set(wires)) != len(wires):
            raise CircuitError("register layout assigns a wire twice")
        if len(self.xA) != self.n or len(self.xB) != self.n:
            raise CircuitError("data registers must have n wires each")
        if self.C is not None:
            # full skip-gate layout: 3n + 4 wires, no spare
            if len(self.dB) != self.n or self.anc is None or self.spare is not None:
                raise CircuitError("skip layout needs anc and an n-wire dummy register")
            if len(wires) != 3 * self.n + 4:
                raise CircuitError(f"skip layout must cover {3 * self.n + 4} wires")
        else:
            if self.anc is not None or self.dB or self.spare is None:
                raise CircuitError("fixed layout has only data, flags and a spare")
            if len(wires) != 2 * self.n + 3:
                raise CircuitError(f"fixed layout must cover {2 * self.n + 3} wires")

    def all_wires(self) -> tuple[int, ...]:
        out = list(self.xA) + list(self.xB) + [self.fA, self.fB]
        for w in (self.C, self.anc, self.spare):
            if w is not None:
                out.append(w)
        out.extend(self.dB)
        return tuple(out)


@dataclass(frozen=True)
class Probe:
    """Probability readout at a gate-stream offset: the query is evaluated
    after `position` gates have been applied."""

    position: int
    label: str
    query: ProjectorQuery


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...]
    probes: tuple[Probe, ...] = ()
    measurements: tuple[tuple[int, str], ...] = ()
    layout: RegisterLayout | None = None
    marks: tuple[tuple[int, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "probes", tuple(self.probes))
        object.__setattr__(self, "measurements", tuple(self.measurements))
        object.__setattr__(self, "marks", tuple(self.marks))
        for g in self.gates:
            if any(q >= self.num_qubits for q in g.qubits):
                raise CircuitError(
                    f"{g.kind} on {g.qubits} exceeds {self.num_qubits} qubits")
        for p in self.probes:
            if not 0 <= p.position <= len(self.gates):
                raise CircuitError(f"probe {p.label!r} at bad offset {p.position}")
            if any(q >= self.num_qubits for q, _ in p.query.constraints):
                raise CircuitError(f"probe {p.label!r} queries a missing wire")
        mq = [q for q, _ in self.measurements]
        if len(set(mq)) != len(mq):
            raise CircuitError("measurement wires must be distinct")
        if any(q >= self.num_qubits for q in mq):
            raise CircuitError("measurement wire exceeds register width")
        for pos, label in self.marks:
            if not 0 <= pos <= len(self.gates):
                raise CircuitError(f"mark {label!r} at bad offset {pos}")


def run(circuit: Circuit, state: Statevector | None = None):
    """Apply the gate stream in order, recording probe readings on the
    way. Returns (final state, {probe label: probability}). Measurements
    are not collapsed; callers read the final state or sample elsewhere."""
    if state is None:
        state = init_state(circuit.num_qubits)
    elif state.num_qubits != circuit.num_qubits:
        raise ConfigurationError(
            f"state has {state.num_qubits} qubits, circuit needs {circuit.num_qubits}")
    by_offset: dict[int, list[Probe]] = {}
    for p in circuit.probes:
        by_offset.setdefault(p.position, []).append(p)
    readings: dict[str, float] = {}
    for pos in range(len(circuit.gates) + 1):
        for p in by_offset.get(pos, ()):
            readings[p.label] = probability(state, p.query)
        if pos < len(circuit.gates):
            apply_gate(state, circuit.gates[pos])
    return state, readings


# --- JSON serialization (golden files, cross-module handoff) ---------------

def circuit_to_json(circuit: Circuit) -> str:
    def gate_rec(g: Gate):
        rec = {"kind": g.kind, "qubits": list(g.qubits)}
        if g.param is not None:
            rec["param"] = g.param
        if g.mask is not None:
            rec["mask"] = g.mask
        if g.pool:
            rec["pool"] = list(g.pool)
        if g.tag is not None:
            rec["tag"] = g.tag
        return rec

    doc = {
        "num_qubits": circuit.num_qubits,
        "gates": [gate_rec(g) for g in circuit.gates],
        "probes": [
            {"position": p.position, "label": p.label,
             "constraints": [list(c) for c in p.query.constraints]}
            for p in circuit.probes
        ],
        "measurements": [[q, label] for q, label in circuit.measurements],
        "marks": [[pos, label] for pos, label in circuit.marks],
    }
    if circuit.layout is not None:
        lay = circuit.layout
        doc["layout"] = {
            "n": lay.n, "xA": list(lay.xA), "xB": list(lay.xB),
            "fA": lay.fA, "fB": lay.fB, "C": lay.C, "anc": lay.anc,
            "dB": list(lay.dB), "spare": lay.spare,
        }
    return json.dumps(doc, indent=2, sort_keys=False)


def circuit_from_json(text: str) -> Circuit:
    doc = json.loads(text)
    gates = tuple(
        Gate(r["kind"], tuple(r["qubits"]), param=r.get("param"),
             mask=r.get("mask"), pool=tuple(r.get("pool", ())), tag=r.get("tag"))
        for r in doc["gates"]
    )
    probes = tuple(
        Probe(r["position"], r["label"],
              ProjectorQuery(tuple((q, b) for q, b in r["constraints"])))
        for r in doc.get("probes", ())
    )
    layout = None
    if "layout" in doc:
        lay = doc["layout"]
        layout = RegisterLayout(
            n=lay["n"], xA=tuple(lay["xA"]), xB=tuple(lay["xB"]),
            fA=lay["fA"], fB=lay["fB"], C=lay["C"], anc=lay["anc"],
            dB=tuple(lay["dB"]), spare=lay["spare"],
        )
    return Circuit(
        num_qubits=doc["num_qubits"],
        gates=gates,
        probes=probes,
        measurements=tuple((q, label) for q, label in doc.get("measurements", ())),
        layout=layout,
        marks=tuple((pos, label) for pos, label in doc.get("marks", ())),
    )
