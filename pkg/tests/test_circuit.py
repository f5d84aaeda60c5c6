"""Circuit IR: layout validation, probe evaluation, JSON round-trip."""

import json

import numpy as np
import pytest

from qskip.circuit import (
    Circuit,
    Probe,
    RegisterLayout,
    circuit_from_json,
    circuit_to_json,
    run,
)
from qskip.engine import ProjectorQuery, init_state
from qskip.errors import CircuitError, ConfigurationError
from qskip.gates import Gate


def qsg_layout(n: int) -> RegisterLayout:
    return RegisterLayout(
        n=n, C=0, xA=tuple(range(1, n + 1)), xB=tuple(range(n + 1, 2 * n + 1)),
        fA=2 * n + 1, fB=2 * n + 2, anc=2 * n + 3,
        dB=tuple(range(2 * n + 4, 3 * n + 4)))


def test_layout_wire_counts():
    lay = qsg_layout(4)
    assert len(lay.all_wires()) == 16
    fixed = RegisterLayout(n=4, xA=tuple(range(4)), xB=tuple(range(4, 8)),
                           fA=8, fB=9, spare=10)
    assert len(fixed.all_wires()) == 11


def test_layout_rejects_duplicate_wires():
    with pytest.raises(CircuitError):
        RegisterLayout(n=1, xA=(0,), xB=(0,), fA=1, fB=2, spare=3)


def test_layout_rejects_wrong_register_sizes():
    with pytest.raises(CircuitError):
        RegisterLayout(n=2, xA=(0,), xB=(1, 2), fA=3, fB=4, spare=5)


def test_circuit_validates_gate_wires():
    with pytest.raises(CircuitError):
        Circuit(num_qubits=2, gates=(Gate("X", (5,)),))


def test_circuit_validates_probe_offsets():
    probe = Probe(position=3, label="late", query=ProjectorQuery(((0, 1),)))
    with pytest.raises(CircuitError):
        Circuit(num_qubits=1, gates=(Gate("X", (0,)),), probes=(probe,))


def test_circuit_validates_measurement_wires():
    with pytest.raises(CircuitError):
        Circuit(num_qubits=2, gates=(), measurements=((0, "a"), (0, "b")))
    with pytest.raises(CircuitError):
        Circuit(num_qubits=2, gates=(), measurements=((7, "a"),))


def test_run_empty_circuit():
    state, readings = run(Circuit(num_qubits=2, gates=()))
    assert abs(state.amplitudes[0] - 1.0) < 1e-12
    assert readings == {}


def test_run_rejects_width_mismatch():
    with pytest.raises(ConfigurationError):
        run(Circuit(num_qubits=2, gates=()), init_state(3))


def test_probe_after_h_reads_half():
    probe = Probe(position=1, label="p1", query=ProjectorQuery(((0, 1),)))
    circ = Circuit(num_qubits=1, gates=(Gate("H", (0,)),), probes=(probe,))
    _, readings = run(circ)
    assert readings["p1"] == pytest.approx(0.5)


def test_probe_positions_are_pre_gate():
    # reading at offset k sees the state before gate k fires
    probes = (
        Probe(0, "before", ProjectorQuery(((0, 1),))),
        Probe(1, "after", ProjectorQuery(((0, 1),))),
    )
    circ = Circuit(num_qubits=1, gates=(Gate("X", (0,)),), probes=probes)
    _, readings = run(circ)
    assert readings["before"] == pytest.approx(0.0)
    assert readings["after"] == pytest.approx(1.0)


def test_probes_are_side_effect_free():
    gates = (Gate("H", (0,)), Gate("CX", (0, 1)), Gate("T", (1,)),
             Gate("H", (1,)))
    probes = tuple(
        Probe(i, f"p{i}", ProjectorQuery(((0, 1), (1, 0))))
        for i in range(len(gates) + 1))
    bare, _ = run(Circuit(num_qubits=2, gates=gates))
    probed, readings = run(Circuit(num_qubits=2, gates=gates, probes=probes))
    assert np.array_equal(bare.amplitudes, probed.amplitudes)
    assert len(readings) == len(gates) + 1


def test_json_round_trip_preserves_everything():
    lay = qsg_layout(1)
    gates = (
        Gate("H", (0,)),
        Gate("RZ", (1,), param=0.375),
        Gate("PHASE_FLIP_ON", (1, 2), mask=0b10),
        Gate("MCX", (0, 1, 2, 3), pool=(4, 5)),
        Gate("RCCX", (0, 4, 6), tag="pad0"),
    )
    circ = Circuit(
        num_qubits=7, gates=gates,
        probes=(Probe(2, "mid", ProjectorQuery(((6, 1), (0, 1)))),),
        measurements=((3, "fA"), (4, "fB")),
        layout=lay, marks=((0, "iter 1"), (5, "iter 2")))
    back = circuit_from_json(circuit_to_json(circ))
    assert back == circ


def test_json_is_plain_data():
    circ = Circuit(num_qubits=2, gates=(Gate("CX", (0, 1)),))
    doc = json.loads(circuit_to_json(circ))
    assert doc["num_qubits"] == 2
    assert doc["gates"][0]["kind"] == "CX"
    assert doc["gates"][0]["qubits"] == [0, 1]


def test_json_golden_file_stays_parseable(golden_dir):
    # frozen document from an earlier build; loading it must keep working
    # so serialized circuits stay exchangeable across versions
    path = golden_dir / "circuit_roundtrip.json"
    circ = circuit_from_json(path.read_text())
    assert circ.num_qubits == 7
    assert [g.kind for g in circ.gates[:3]] == ["H", "RZ", "PHASE_FLIP_ON"]
    assert circ.probes[0].label == "mid"
    assert circuit_from_json(circuit_to_json(circ)) == circ
