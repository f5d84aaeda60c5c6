"""Benchmark circuit builders, validated against the register-tensor
reference in tests/oracle.py and its pinned constants."""

import numpy as np
import pytest

import oracle
from qskip.builders import (
    ExperimentConfig,
    SuccessRule,
    Variant,
    build_circuit,
    build_fixed,
    build_qsg,
    skip_block,
    variant_equivalence_check,
)
from qskip.circuit import run
from qskip.engine import ProjectorQuery, probability
from qskip.errors import CapabilityError, ConfigurationError


def final_flag_distribution(circ):
    state, readings = run(circ)
    lay = circ.layout
    flags = {}
    for fb in (0, 1):
        for fa in (0, 1):
            q = ProjectorQuery(((lay.fA, fa), (lay.fB, fb)))
            flags[f"{fb}{fa}"] = probability(state, q)
    return state, readings, flags


# --- configuration ----------------------------------------------------------

def test_config_defaults():
    cfg = ExperimentConfig()
    assert (cfg.n, cfg.k, cfg.r) == (4, 3, 25)
    assert cfg.oa_mask == cfg.ob_mask == 0b1011
    assert cfg.variant is Variant.QSG_SWAPOUT
    assert cfg.success_rule is SuccessRule.BOTH_FLAGS


def test_config_accepts_plain_strings():
    cfg = ExperimentConfig(variant="FIXED", success_rule="FB_ONLY")
    assert cfg.variant is Variant.FIXED
    assert cfg.success_rule is SuccessRule.FB_ONLY


def test_config_validation():
    with pytest.raises(ConfigurationError):
        ExperimentConfig(n=0)
    with pytest.raises(ConfigurationError):
        ExperimentConfig(k=-1)
    with pytest.raises(ConfigurationError):
        ExperimentConfig(r=0)
    with pytest.raises(ConfigurationError):
        ExperimentConfig(oa_mask=16)  # n=4 allows masks below 16


def test_swapout_requires_nonzero_expensive_mask():
    with pytest.raises(ConfigurationError):
        ExperimentConfig(ob_mask=0, variant=Variant.QSG_SWAPOUT)
    ExperimentConfig(ob_mask=0, variant=Variant.QSG_CONTROLLED)


# --- structural fidelity ----------------------------------------------------

def test_qsg_qubit_count_is_3n_plus_4():
    assert build_qsg(ExperimentConfig(n=4)).num_qubits == 16
    assert build_qsg(ExperimentConfig(n=1, oa_mask=1, ob_mask=1)).num_qubits == 7


def test_fixed_qubit_count_is_2n_plus_3():
    assert build_fixed(ExperimentConfig(n=4)).num_qubits == 11
    assert build_fixed(ExperimentConfig(n=2, oa_mask=1, ob_mask=2)).num_qubits == 7


def test_fixed_k0_is_just_the_h_wall():
    circ = build_fixed(ExperimentConfig(k=0))
    assert all(g.kind == "H" for g in circ.gates)
    assert len(circ.gates) == 8
    state, _, flags = final_flag_distribution(circ)
    assert flags["10"] + flags["11"] < 1e-12  # fB never touched


def test_builders_are_deterministic():
    cfg = ExperimentConfig(n=2, k=2, r=3, oa_mask=1, ob_mask=2)
    assert build_qsg(cfg) == build_qsg(cfg)
    assert build_fixed(cfg) == build_fixed(cfg)


def test_build_circuit_dispatches_on_variant():
    assert build_circuit(ExperimentConfig(variant="FIXED")).layout.C is None
    assert build_circuit(ExperimentConfig()).layout.C == 0


def test_fixed_variant_has_no_skip_circuit():
    with pytest.raises(ConfigurationError):
        build_qsg(ExperimentConfig(variant="FIXED"))
    with pytest.raises(ConfigurationError):
        skip_block(ExperimentConfig(variant="FIXED"))


def test_probe_labels_one_per_iteration():
    circ = build_qsg(ExperimentConfig(n=2, k=3, oa_mask=1, ob_mask=1))
    assert [p.label for p in circ.probes] == [
        "a=1@iter 1", "a=1@iter 2", "a=1@iter 3"]


def test_measurements_fa_then_fb():
    for circ in (build_qsg(ExperimentConfig()), build_fixed(ExperimentConfig())):
        labels = [name for _, name in circ.measurements]
        assert labels == ["fA", "fB"]


# --- dynamics against the register-tensor reference -------------------------

def test_fixed_flag_distribution_small_case():
    circ = build_fixed(ExperimentConfig(n=2, k=1, r=1, oa_mask=3, ob_mask=3))
    _, _, flags = final_flag_distribution(circ)
    for key, want in oracle.REF_FIXED_FLAGS_N2K1.items():
        assert flags[key] == pytest.approx(want, abs=1e-10)


def test_fixed_flag_distribution_matches_reference_n4():
    circ = build_fixed(ExperimentConfig())
    _, _, flags = final_flag_distribution(circ)
    for key, want in oracle.REF_FIXED_FLAGS_N4K3.items():
        assert flags[key] == pytest.approx(want, abs=1e-9)


@pytest.mark.parametrize("variant,ref_name", [
    (Variant.QSG_SWAPOUT, "swapout"),
    (Variant.QSG_CONTROLLED, "controlled"),
])
def test_qsg_dynamics_match_reference_n2(variant, ref_name):
    cfg = ExperimentConfig(n=2, k=2, r=3, oa_mask=0b10, ob_mask=0b01,
                           variant=variant)
    ref = oracle.run_qsg_reference(2, 2, 0b10, 0b01, ref_name)
    circ = build_qsg(cfg, boundary_probes=True)
    _, readings, flags = final_flag_distribution(circ)
    for t, want in enumerate(ref["probes"], start=1):
        assert readings[f"a=1@iter {t}"] == pytest.approx(want, abs=1e-10)
    for key, want in ref["flags"].items():
        assert flags[key] == pytest.approx(want, abs=1e-10)


def test_qsg_probes_and_flags_match_pinned_values_n4():
    circ = build_qsg(ExperimentConfig())
    _, readings, flags = final_flag_distribution(circ)
    for t, want in enumerate(oracle.REF_PROBES_N4K3, start=1):
        assert readings[f"a=1@iter {t}"] == pytest.approx(want, abs=1e-9)
    for key, want in oracle.REF_QSG_FLAGS_N4K3.items():
        assert flags[key] == pytest.approx(want, abs=1e-9)


def test_probe_readings_never_exceed_control_weight():
    # the skip wire can only fire on the live-control branch
    ref = oracle.run_qsg_reference(2, 3, 0b01, 0b11, "swapout")
    circ = build_qsg(ExperimentConfig(n=2, k=3, oa_mask=0b01, ob_mask=0b11))
    _, readings = run(circ)
    for t in range(1, 4):
        val = readings[f"a=1@iter {t}"]
        assert 0.0 <= val <= 0.5 + 1e-12
        assert val == pytest.approx(ref["probes"][t - 1], abs=1e-10)


@pytest.mark.parametrize("variant", [Variant.QSG_SWAPOUT, Variant.QSG_CONTROLLED])
def test_ancilla_and_dummy_clean_at_iteration_boundaries(variant):
    cfg = ExperimentConfig(n=2, k=3, r=2, oa_mask=0b10, ob_mask=0b01,
                           variant=variant)
    circ = build_qsg(cfg, boundary_probes=True)
    _, readings = run(circ)
    for t in range(1, 4):
        assert readings[f"anc=1@end {t}"] < 1e-10
        assert readings[f"dB=0@end {t}"] > 1.0 - 1e-10


def test_control_low_branch_reproduces_fixed_dynamics():
    # projecting the final skip-gate state onto a low control and tracing
    # the helper wires must give the fixed-order state on (xA, xB, fA, fB)
    n, k = 2, 2
    cfg = ExperimentConfig(n=n, k=k, r=1, oa_mask=0b10, ob_mask=0b01)
    qsg_state, _ = run(build_qsg(cfg))
    fixed_state, _ = run(build_fixed(ExperimentConfig(
        n=n, k=k, r=1, oa_mask=0b10, ob_mask=0b01, variant="FIXED")))

    qlay = build_qsg(cfg).layout
    flay = build_fixed(ExperimentConfig(
        n=n, k=k, r=1, oa_mask=0b10, ob_mask=0b01, variant="FIXED")).layout

    tq = qsg_state.tensor()
    # axis j addresses qubit (num_qubits - 1 - j); pick C=0, anc=0, dB=0
    def take(tensor, nq, fixed_bits):
        idx = [slice(None)] * nq
        for wire, bit in fixed_bits:
            idx[nq - 1 - wire] = bit
        return tensor[tuple(idx)]

    sector = take(tq, 3 * n + 4,
                  [(qlay.C, 0), (qlay.anc, 0)] + [(d, 0) for d in qlay.dB])
    # remaining axes: descending wire order of xA+xB+fA+fB
    qsg_vec = sector.reshape(-1) * np.sqrt(2.0)  # undo the C weight

    tf = fixed_state.tensor()
    fixed_sector = take(tf, 2 * n + 3, [(flay.spare, 0)])
    fixed_vec = fixed_sector.reshape(-1)

    # both reshape to (fB, fA, xB bits, xA bits) in descending wire order
    assert np.max(np.abs(qsg_vec - fixed_vec)) < 1e-9


@pytest.mark.parametrize("variant", ["FIXED", "QSG_SWAPOUT", "QSG_CONTROLLED"])
def test_final_norm_at_full_scale(variant):
    cfg = ExperimentConfig(r=35, variant=variant)
    state, _ = run(build_circuit(cfg))
    assert abs(1.0 - state.norm()) < 1e-8


# --- variant equivalence ----------------------------------------------------

def test_variant_equivalence_small_cases():
    assert variant_equivalence_check(
        ExperimentConfig(n=1, k=1, r=1, oa_mask=1, ob_mask=1)).passed
    res = variant_equivalence_check(
        ExperimentConfig(n=2, k=1, r=3, oa_mask=2, ob_mask=3))
    assert res.passed and res.max_dev < 1e-9


def test_variant_equivalence_skipped_for_zero_mask():
    res = variant_equivalence_check(
        ExperimentConfig(n=2, oa_mask=1, ob_mask=0, variant="QSG_CONTROLLED"))
    assert res.status == "unsupported"
    assert not res.passed


def test_variant_equivalence_rejects_large_n():
    with pytest.raises(CapabilityError):
        variant_equivalence_check(ExperimentConfig(n=4))
