"""Lowering to the native basis and cost accounting.

Counts are implementation artifacts, so they are pinned in
tests/golden/cost_table.json rather than asserted from formulas; the
relational claims (linearity in R, slope orderings) are asserted
directly.
"""

import json

import numpy as np
import pytest

import oracle
from qskip.builders import ExperimentConfig, build_circuit, build_qsg
from qskip.circuit import Circuit, run
from qskip.engine import gates_to_unitary, init_state, to_unitary
from qskip.errors import CircuitError, LoweringError
from qskip.gates import Gate, OracleSpec, phase_oracle, set_flag
from qskip.transpile import NATIVE_KINDS, cost, lower

FULL = ExperimentConfig()


def equal_up_to_phase(a, b, tol=1e-9):
    i = np.argmax(np.abs(b))
    phase = a.flat[i] / b.flat[i]
    return abs(abs(phase) - 1.0) < tol and np.max(np.abs(a - phase * b)) < tol


# --- rewrite rules ----------------------------------------------------------

def test_h_lowers_to_three_natives():
    low = lower(Circuit(num_qubits=1, gates=(Gate("H", (0,)),)))
    assert [g.kind for g in low.circuit.gates] == ["RZ", "SX", "RZ"]
    assert cost(low).depth == 3


def test_cx_passes_through():
    low = lower(Circuit(num_qubits=2, gates=(Gate("CX", (0, 1)),)))
    assert [g.kind for g in low.circuit.gates] == ["CX"]
    assert cost(low).depth == 1


def test_only_native_kinds_survive():
    circ = build_qsg(ExperimentConfig(n=2, k=2, r=3, oa_mask=1, ob_mask=2))
    low = lower(circ)
    assert set(g.kind for g in low.circuit.gates) <= set(NATIVE_KINDS)


@pytest.mark.parametrize("gate,nq", [
    (Gate("H", (0,)), 1),
    (Gate("S", (0,)), 1),
    (Gate("Sdg", (0,)), 1),
    (Gate("T", (0,)), 1),
    (Gate("Tdg", (0,)), 1),
    (Gate("CCX", (0, 1, 2)), 3),
    (Gate("RCCX", (2, 0, 1)), 3),
    (Gate("CSWAP", (0, 1, 2)), 3),
    (Gate("MCZ", (0, 1)), 2),
    (Gate("MCZ", (0, 1, 2)), 3),
    (Gate("MCZ", (0, 1, 2, 3)), 4),
    (Gate("MCX", (0, 1)), 2),
    (Gate("MCX", (0, 1, 2)), 3),
    (Gate("MCX", (0, 1, 2, 3)), 4),
    (Gate("PHASE_FLIP_ON", (0, 1, 2), mask=0b010), 3),
])
def test_lowered_gate_preserves_unitary(gate, nq):
    # gates without a declared ancilla pool must lower exactly on the
    # full space (up to global phase)
    want = oracle.gate_unitary(gate.kind, gate.qubits, nq, mask=gate.mask)
    low = lower(Circuit(num_qubits=nq, gates=(gate,)))
    got = gates_to_unitary(low.circuit.gates, nq)
    assert equal_up_to_phase(got, want)


def test_ccx_uses_six_cx():
    low = lower(Circuit(num_qubits=3, gates=(Gate("CCX", (0, 1, 2)),)))
    assert cost(low).twoq_count == 6


def test_rccx_uses_three_cx():
    low = lower(Circuit(num_qubits=3, gates=(Gate("RCCX", (0, 1, 2)),)))
    assert cost(low).twoq_count == 3


def test_chain_lowering_exact_on_clean_pool_sector():
    # 4-control flip with two declared clean wires: compare columns whose
    # pool bits are zero, and demand zero leakage out of that sector
    nq = 7
    gate = Gate("MCX", (0, 1, 2, 3, 4), pool=(5, 6))
    low = lower(Circuit(num_qubits=nq, gates=(gate,)))
    got = gates_to_unitary(low.circuit.gates, nq)
    want = oracle.gate_unitary("MCX", gate.qubits, nq)
    cols = [i for i in range(1 << nq) if not (i >> 5) & 0b11]
    sel = np.ix_(cols, cols)
    assert equal_up_to_phase(got[sel], want[sel], tol=1e-9)
    outside = [i for i in range(1 << nq) if (i >> 5) & 0b11]
    assert np.max(np.abs(got[np.ix_(outside, cols)])) < 1e-9


def test_strict_policy_rejects_insufficient_pool():
    gate = Gate("MCX", (0, 1, 2, 3, 4), pool=(5,))
    circ = Circuit(num_qubits=6, gates=(gate,))
    with pytest.raises(LoweringError, match="MCX"):
        lower(circ, ancilla_policy="chain_strict")
    lower(circ)  # default policy falls back to an exact ancilla-free form


def test_lowering_preserves_builder_unitaries():
    for variant in ("FIXED", "QSG_SWAPOUT", "QSG_CONTROLLED"):
        cfg = ExperimentConfig(n=1, k=1, r=2, oa_mask=1, ob_mask=1,
                               variant=variant)
        circ = build_circuit(cfg)
        got = gates_to_unitary(lower(circ).circuit.gates, circ.num_qubits)
        want = to_unitary(circ)
        assert equal_up_to_phase(got, want), variant


def test_lowered_probes_read_identically():
    cfg = ExperimentConfig(n=2, k=2, r=2, oa_mask=0b10, ob_mask=0b01)
    circ = build_qsg(cfg, boundary_probes=True)
    _, logical = run(circ)
    _, lowered = run(lower(circ).circuit)
    assert set(logical) == set(lowered)
    for label, want in logical.items():
        assert lowered[label] == pytest.approx(want, abs=1e-9)


# --- span tiling ------------------------------------------------------------

def test_spans_tile_the_native_stream():
    circ = build_qsg(ExperimentConfig(n=2, k=1, r=3, oa_mask=1, ob_mask=2))
    low = lower(circ)
    pos = 0
    for span in low.spans:
        assert span.start == pos
        assert span.end > span.start
        pos = span.end
    assert pos == len(low.circuit.gates)


def test_probes_sit_on_span_starts():
    circ = build_qsg(ExperimentConfig(n=2, k=2, r=2, oa_mask=1, ob_mask=2),
                     boundary_probes=True)
    low = lower(circ)
    starts = {s.start for s in low.spans} | {len(low.circuit.gates)}
    for p in low.circuit.probes:
        assert p.position in starts


def test_padding_tags_survive_lowering():
    circ = build_qsg(ExperimentConfig(n=2, k=1, r=3, oa_mask=1, ob_mask=2))
    tags = {g.tag for g in lower(circ).circuit.gates if g.tag}
    assert {"pad0", "pad1"} <= tags


# --- cost schedule ----------------------------------------------------------

def test_disjoint_cx_share_a_layer():
    low = lower(Circuit(num_qubits=4, gates=(
        Gate("CX", (0, 1)), Gate("CX", (2, 3)))))
    assert cost(low).depth == 1


def test_overlapping_cx_serialize():
    low = lower(Circuit(num_qubits=3, gates=(
        Gate("CX", (0, 1)), Gate("CX", (1, 2)))))
    assert cost(low).depth == 2


def test_cost_rejects_unlowered_circuits():
    with pytest.raises(CircuitError):
        cost(Circuit(num_qubits=3, gates=(Gate("CCX", (0, 1, 2)),)))


def test_cost_counts_are_consistent():
    rep = cost(lower(build_circuit(FULL)))
    assert rep.twoq_count >= 0 and rep.oneq_count >= 0
    assert rep.depth <= rep.twoq_count + rep.oneq_count
    assert len(rep.per_iteration) == FULL.k


def test_cost_report_serializes():
    rep = cost(lower(build_circuit(FULL)))
    d = rep.as_dict()
    assert d["depth"] == rep.depth and d["twoq_count"] == rep.twoq_count


# --- pinned counts and scaling relations -------------------------------------

def full_table():
    table = {}
    for variant in ("FIXED", "QSG_SWAPOUT", "QSG_CONTROLLED"):
        for r in (10, 25, 30, 35):
            rep = cost(lower(build_circuit(ExperimentConfig(r=r, variant=variant))))
            table[f"{variant}/R{r}"] = {
                "depth": rep.depth, "twoq": rep.twoq_count,
                "oneq": rep.oneq_count}
    return table


def test_costs_match_golden_table(golden_dir):
    want = json.loads((golden_dir / "cost_table.json").read_text())
    assert full_table() == want


def test_depth_is_exactly_affine_in_r():
    for variant in ("FIXED", "QSG_SWAPOUT", "QSG_CONTROLLED"):
        d = {r: cost(lower(build_circuit(
            ExperimentConfig(r=r, variant=variant)))).depth
            for r in (25, 30, 35)}
        assert d[35] - d[25] == 2 * (d[30] - d[25]), variant


def test_swapout_and_fixed_share_the_depth_slope():
    slope = {}
    for variant in ("FIXED", "QSG_SWAPOUT"):
        d = {r: cost(lower(build_circuit(
            ExperimentConfig(r=r, variant=variant)))).depth for r in (25, 35)}
        slope[variant] = (d[35] - d[25]) / 10.0
    assert slope["QSG_SWAPOUT"] == slope["FIXED"]


def test_controlled_slope_at_least_twice_swapout():
    d = {}
    for variant in ("QSG_SWAPOUT", "QSG_CONTROLLED"):
        d[variant] = {r: cost(lower(build_circuit(
            ExperimentConfig(r=r, variant=variant)))).depth for r in (25, 35)}
    s_swap = d["QSG_SWAPOUT"][35] - d["QSG_SWAPOUT"][25]
    s_ctrl = d["QSG_CONTROLLED"][35] - d["QSG_CONTROLLED"][25]
    assert s_ctrl >= 2 * s_swap


def test_swapout_vs_fixed_gap_is_r_independent():
    gaps = set()
    for r in (10, 25, 30, 35):
        ds = cost(lower(build_circuit(
            ExperimentConfig(r=r, variant="QSG_SWAPOUT")))).depth
        df = cost(lower(build_circuit(
            ExperimentConfig(r=r, variant="FIXED")))).depth
        gaps.add(ds - df)
    assert len(gaps) == 1


def test_controlled_deeper_than_fixed_in_the_studied_regime():
    for r in (20, 25, 30, 35):
        dc = cost(lower(build_circuit(
            ExperimentConfig(r=r, variant="QSG_CONTROLLED")))).depth
        df = cost(lower(build_circuit(
            ExperimentConfig(r=r, variant="FIXED")))).depth
        assert dc > df, f"R={r}: controlled {dc} <= fixed {df}"


def test_controlled_deeper_than_fixed_at_shallow_r():
    # Known divergence, kept red on purpose. The cost contract asks for
    # controlled depth > fixed depth down to R=10, but pool-aware chain
    # lowering gives the skip layouts five clean wires while the rigid
    # 2n+3 layout has one spare, so its four-control flag setters fall
    # back to gray-code ladders (~30 CX + 31 serial phase pulses each).
    # That fixes the rigid baseline's intercept near 1880 layers while
    # the controlled variant starts near 850 and only overtakes at
    # R ~ 13. Equalizing the two would mean ignoring declared ancilla
    # pools during lowering, which the lowering contract forbids.
    dc = cost(lower(build_circuit(
        ExperimentConfig(r=10, variant="QSG_CONTROLLED")))).depth
    df = cost(lower(build_circuit(
        ExperimentConfig(r=10, variant="FIXED")))).depth
    assert dc > df, (
        f"controlled depth {dc} does not exceed fixed depth {df} at R=10; "
        "the depth crossover of this cost model sits near R=13 (see the "
        "comment in this test)")


def test_lowering_is_deterministic():
    cfg = ExperimentConfig(r=30, variant="QSG_CONTROLLED")
    a = lower(build_circuit(cfg))
    b = lower(build_circuit(cfg))
    assert a.circuit == b.circuit
    assert a.spans == b.spans


# --- components the lowering relies on ---------------------------------------

def test_flag_set_lowering_exact_with_clean_pool():
    # the QSG flag setter: 4 controls, chain over declared clean wires
    nq = 8
    gates = set_flag((0, 1, 2, 3), 4, 0b1011, pool=(5, 6, 7))
    low = lower(Circuit(num_qubits=nq, gates=tuple(gates)))
    got = gates_to_unitary(low.circuit.gates, nq)
    want = oracle.unitary_of(gates, nq)
    cols = [i for i in range(1 << nq) if not (i >> 5) & 0b111]
    sel = np.ix_(cols, cols)
    assert equal_up_to_phase(got[sel], want[sel])


def test_phase_oracle_lowering_exact():
    gates = phase_oracle(OracleSpec(3, 0b101))
    low = lower(Circuit(num_qubits=3, gates=tuple(gates)))
    got = gates_to_unitary(low.circuit.gates, 3)
    want = oracle.phase_oracle_matrix(3, 0b101)
    assert equal_up_to_phase(got, want)
