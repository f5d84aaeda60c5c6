"""Lowering to the native basis {RZ, SX, X, CX} and cost accounting.

Rewrite rules: H becomes RZ(pi/2) SX RZ(pi/2); S/T/phases become RZ;
CCX becomes the standard 6-CX network; RCCX becomes its 3-CX sequence;
CSWAP becomes CX CCX CX; multi-controlled gates become either a chain of
relative-phase Toffolis over declared clean ancillas (exact because the
compute/uncompute pairs cancel around control-diagonal centers) or,
when the pool is too small, an exact ancilla-free gray-code phase
ladder. Under ancilla_policy="chain_strict" an insufficient pool raises
instead of falling back.

Every native gate belongs to exactly one Span; spans preserve enough
structure (kind, wires, source tag) for the sampling layer to replay
whole sub-circuits as single state passes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .circuit import Circuit, Probe
from .errors import CircuitError, LoweringError
from .gates import Gate

NATIVE_KINDS = ("RZ", "SX", "X", "CX")

_RZ_ANGLE = {"S": math.pi / 2, "Sdg": -math.pi / 2,
             "T": math.pi / 4, "Tdg": -math.pi / 4}


@dataclass(frozen=True)
class Span:
    """Half-open native-gate range [start, end) lowered from one logical
    structure. kind is one of: 1q, 2q, H, CCX, RCCX, CSWAP, MCZ_GRAY."""

    kind: str
    start: int
    end: int
    qubits: tuple[int, ...]
    tag: str | None = None


@dataclass(frozen=True)
class CostReport:
    depth: int
    twoq_count: int
    oneq_count: int
    per_iteration: tuple[dict, ...] = ()

    def as_dict(self) -> dict:
        return {
            "depth": self.depth,
            "twoq_count": self.twoq_count,
            "oneq_count": self.oneq_count,
            "per_iteration": list(self.per_iteration),
        }


@dataclass(frozen=True)
class LoweredCircuit:
    """Native-basis circuit plus its span structure. Probe and mark
    offsets in .circuit refer to the native stream."""

    circuit: Circuit
    spans: tuple[Span, ...]


class _Lowerer:
    def __init__(self, num_qubits: int, policy: str):
        if policy not in ("auto", "chain_strict"):
            raise CircuitError(f"unknown ancilla policy {policy!r}")
        self.nq = num_qubits
        self.policy = policy
        self.natives: list[Gate] = []
        self.spans: list[Span] = []

    # -- primitive emission --------------------------------------------

    def _nat(self, kind: str, qubits, param=None, tag=None):
        self.natives.append(Gate(kind, tuple(qubits), param=param, tag=tag))

    def _span(self, kind: str, start: int, qubits, tag):
        self.spans.append(Span(kind, start, len(self.natives), tuple(qubits), tag))

    def _h(self, q: int, tag):
        start = len(self.natives)
        self._nat("RZ", (q,), math.pi / 2, tag)
        self._nat("SX", (q,), None, tag)
        self._nat("RZ", (q,), math.pi / 2, tag)
        self._span("H", start, (q,), tag)

    def _ccx_natives(self, a: int, b: int, t: int, tag):
        # standard 6-CX Toffoli, exact including phase
        qp, qm = math.pi / 4, -math.pi / 4
        self._nat("RZ", (t,), math.pi / 2, tag)
        self._nat("SX", (t,), None, tag)
        self._nat("RZ", (t,), math.pi / 2, tag)
        self._nat("CX", (b, t), tag=tag)
        self._nat("RZ", (t,), qm, tag)
        self._nat("CX", (a, t), tag=tag)
        self._nat("RZ", (t,), qp, tag)
        self._nat("CX", (b, t), tag=tag)
        self._nat("RZ", (t,), qm, tag)
        self._nat("CX", (a, t), tag=tag)
        self._nat("RZ", (b,), qp, tag)
        self._nat("RZ", (t,), qp, tag)
        self._nat("RZ", (t,), math.pi / 2, tag)
        self._nat("SX", (t,), None, tag)
        self._nat("RZ", (t,), math.pi / 2, tag)
        self._nat("CX", (a, b), tag=tag)
        self._nat("RZ", (a,), qp, tag)
        self._nat("RZ", (b,), qm, tag)
        self._nat("CX", (a, b), tag=tag)

    def _ccx(self, a: int, b: int, t: int, tag):
        start = len(self.natives)
        self._ccx_natives(a, b, t, tag)
        self._span("CCX", start, (a, b, t), tag)

    def _rccx(self, c1: int, c2: int, t: int, tag):
        start = len(self.natives)
        qp, qm = math.pi / 4, -math.pi / 4
        self._nat("RZ", (t,), math.pi / 2, tag)
        self._nat("SX", (t,), None, tag)
        self._nat("RZ", (t,), math.pi / 2, tag)
        self._nat("RZ", (t,), qp, tag)
        self._nat("CX", (c2, t), tag=tag)
        self._nat("RZ", (t,), qm, tag)
        self._nat("CX", (c1, t), tag=tag)
        self._nat("RZ", (t,), qp, tag)
        self._nat("CX", (c2, t), tag=tag)
        self._nat("RZ", (t,), qm, tag)
        self._nat("RZ", (t,), math.pi / 2, tag)
        self._nat("SX", (t,), None, tag)
        self._nat("RZ", (t,), math.pi / 2, tag)
        self._span("RCCX", start, (c1, c2, t), tag)

    def _cswap(self, c: int, t1: int, t2: int, tag):
        start = len(self.natives)
        self._nat("CX", (t2, t1), tag=tag)
        self._ccx_natives(c, t1, t2, tag)
        self._nat("CX", (t2, t1), tag=tag)
        self._span("CSWAP", start, (c, t1, t2), tag)

    def _gray_mcz(self, wires: tuple[int, ...], tag):
        """Exact diagonal ladder for a phase flip on the all-ones pattern
        of `wires` (up to global phase): 2^m - 1 RZ and 2^m - 2 CX."""
        start = len(self.natives)
        theta = math.pi / (1 << (len(wires) - 1))
        ws = list(wires)
        while ws:
            target = ws[-1]
            ctrls = ws[:-1]
            self._nat("RZ", (target,), theta, tag)
            prev = 0
            for i in range(1, 1 << len(ctrls)):
                gray = i ^ (i >> 1)
                changed = (gray ^ prev).bit_length() - 1
                prev = gray
                self._nat("CX", (ctrls[changed], target), tag=tag)
                sign = -1.0 if bin(gray).count("1") % 2 else 1.0
                self._nat("RZ", (target,), sign * theta, tag)
            if ctrls:
                # return accumulated parity: last gray code is a single bit
                self._nat("CX", (ctrls[prev.bit_length() - 1], target), tag=tag)
            ws = ctrls
        self._span("MCZ_GRAY", start, wires, tag)

    def _chain_mcx(self, ctrls: tuple[int, ...], target: int,
                   pool: tuple[int, ...], tag):
        anc = pool[: len(ctrls) - 2]
        compute = [(ctrls[0], ctrls[1], anc[0])]
        for i in range(len(ctrls) - 3):
            compute.append((ctrls[i + 2], anc[i], anc[i + 1]))
        for c1, c2, a in compute:
            self._rccx(c1, c2, a, tag)
        self._ccx(ctrls[-1], anc[-1], target, tag)
        for c1, c2, a in reversed(compute):
            self._rccx(c1, c2, a, tag)

    def _pick_mode(self, g: Gate, n_ctrls: int) -> str:
        need = n_ctrls - 2
        if len(g.pool) >= need:
            return "chain"
        if self.policy == "chain_strict":
            raise LoweringError(
                f"insufficient ancilla pool lowering {g.kind} on qubits "
                f"{g.qubits}: need {need} clean wires, declared {len(g.pool)}")
        return "gray"

    # -- dispatch -------------------------------------------------------

    def lower_gate(self, g: Gate):
        if any(q >= self.nq for q in g.pool):
            raise CircuitError(f"pool wire out of range on {g.kind} {g.qubits}")
        k, qs, tag = g.kind, g.qubits, g.tag
        if k == "H":
            self._h(qs[0], tag)
        elif k in _RZ_ANGLE:
            start = len(self.natives)
            self._nat("RZ", qs, _RZ_ANGLE[k], tag)
            self._span("1q", start, qs, tag)
        elif k in ("RZ", "SX", "X"):
            start = len(self.natives)
            self._nat(k, qs, g.param, tag)
            self._span("1q", start, qs, tag)
        elif k == "CX":
            start = len(self.natives)
            self._nat("CX", qs, tag=tag)
            self._span("2q", start, qs, tag)
        elif k == "CCX":
            self._ccx(*qs, tag)
        elif k == "RCCX":
            self._rccx(*qs, tag)
        elif k == "CSWAP":
            self._cswap(*qs, tag)
        elif k == "MCX":
            *ctrls, t = qs
            if len(ctrls) == 1:
                start = len(self.natives)
                self._nat("CX", qs, tag=tag)
                self._span("2q", start, qs, tag)
            elif len(ctrls) == 2:
                self._ccx(*qs, tag)
            elif self._pick_mode(g, len(ctrls)) == "chain":
                self._chain_mcx(tuple(ctrls), t, g.pool, tag)
            else:
                self._h(t, tag)
                self._gray_mcz(qs, tag)
                self._h(t, tag)
        elif k == "MCZ":
            if len(qs) == 1:
                start = len(self.natives)
                self._nat("RZ", qs, math.pi, tag)
                self._span("1q", start, qs, tag)
            elif len(qs) == 2:
                self._gray_mcz(qs, tag)
            elif len(qs) == 3:
                t = qs[-1]
                self._h(t, tag)
                self._ccx(qs[0], qs[1], t, tag)
                self._h(t, tag)
            elif self._pick_mode(g, len(qs) - 1) == "chain":
                t = qs[-1]
                self._h(t, tag)
                self._chain_mcx(qs[:-1], t, g.pool, tag)
                self._h(t, tag)
            else:
                self._gray_mcz(qs, tag)
        elif k == "PHASE_FLIP_ON":
            for j, q in enumerate(qs):
                if not (g.mask >> j) & 1:
                    start = len(self.natives)
                    self._nat("X", (q,), tag=tag)
                    self._span("1q", start, (q,), tag)
            self.lower_gate(Gate("MCZ", qs, pool=g.pool, tag=tag))
            for j, q in enumerate(qs):
                if not (g.mask >> j) & 1:
                    start = len(self.natives)
                    self._nat("X", (q,), tag=tag)
                    self._span("1q", start, (q,), tag)
        else:
            raise CircuitError(f"no lowering rule for kind {k!r}")


def lower(circuit: Circuit, ancilla_policy: str = "auto") -> LoweredCircuit:
    """Rewrite a circuit into the native basis, remapping probe and mark
    offsets onto the native stream."""
    lw = _Lowerer(circuit.num_qubits, ancilla_policy)
    offset_map = {}
    for i, g in enumerate(circuit.gates):
        offset_map[i] = len(lw.natives)
        lw.lower_gate(g)
    offset_map[len(circuit.gates)] = len(lw.natives)
    lowered = Circuit(
        num_qubits=circuit.num_qubits,
        gates=tuple(lw.natives),
        probes=tuple(Probe(offset_map[p.position], p.label, p.query)
                     for p in circuit.probes),
        measurements=circuit.measurements,
        layout=circuit.layout,
        marks=tuple((offset_map[pos], label) for pos, label in circuit.marks),
    )
    return LoweredCircuit(circuit=lowered, spans=tuple(lw.spans))


def cost(lowered) -> CostReport:
    """Greedy ASAP layering: each gate enters the earliest layer where all
    its wires are free. Accepts a LoweredCircuit or a native Circuit."""
    circuit = lowered.circuit if isinstance(lowered, LoweredCircuit) else lowered
    busy = [0] * circuit.num_qubits
    twoq = oneq = 0
    for g in circuit.gates:
        if g.kind not in NATIVE_KINDS:
            raise CircuitError(
                f"cost expects a lowered circuit, found {g.kind}")
        layer = 1 + max(busy[q] for q in g.qubits)
        for q in g.qubits:
            busy[q] = layer
        if g.kind == "CX":
            twoq += 1
        else:
            oneq += 1
    depth = max(busy) if busy else 0

    sections = []
    if circuit.marks:
        bounds = list(circuit.marks) + [(len(circuit.gates), None)]
        for (pos, label), (nxt, _) in zip(bounds, bounds[1:]):
            seg = circuit.gates[pos:nxt]
            sections.append({
                "label": label,
                "gates": len(seg),
                "twoq": sum(1 for g in seg if g.kind == "CX"),
                "oneq": sum(1 for g in seg if g.kind != "CX"),
            })
    return CostReport(depth=depth, twoq_count=twoq, oneq_count=oneq,
                      per_iteration=tuple(sections))
