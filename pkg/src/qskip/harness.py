"""Benchmark sweep harness and self-check suites.

A sweep config is a JSON object; every knob lives in the file so a run
is a pure function of (config, seed). Row order is variants outer, R
values inner, regardless of execution order. Each row derives its own
sampling seed from the master seed and its row index through a fixed
64-bit mix, so rows are decorrelated while the file stays reproducible.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .builders import (ExperimentConfig, SuccessRule, Variant, build_circuit,
                       build_qsg, skip_block, variant_equivalence_check)
from .circuit import Circuit, run
from .engine import gates_to_unitary
from .errors import ConfigurationError
from .gates import Gate
from .metrics import efficiency, expected_ub, p_succ
from .noise import NoiseConfig, sample_shots
from .transpile import cost, lower

_MIX = 0x9E3779B97F4A7C15
_M64 = 0xFFFFFFFFFFFFFFFF

CSV_COLUMNS = ("variant", "R", "n", "k", "shots", "seed", "depth", "twoq",
               "p_succ", "stderr", "expected_ub", "efficiency")


@dataclass(frozen=True)
class SweepConfig:
    n: int
    k: int
    r_values: tuple[int, ...]
    oa_mask: int
    ob_mask: int
    variants: tuple[Variant, ...]
    success_rule: SuccessRule
    p1: float
    p2: float
    p_ro: float
    shots: int
    seed: int
    threads: int = 1
    output: str | None = None
    fmt: str = "csv"


@dataclass(frozen=True)
class SweepRow:
    variant: str
    r: int
    n: int
    k: int
    shots: int
    seed: int
    row_seed: int
    depth: int
    twoq: int
    p_succ: float
    stderr: float
    expected_ub: float
    efficiency: float | None
    histogram: dict
    probes_noisy: dict
    probes_noiseless: dict
    error_shots: int


def _want(d: dict, key: str, types, where: str, default=None, required=False):
    if key not in d:
        if required:
            raise ConfigurationError(f"{where}: missing required field {key!r}")
        return default
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, types):
        raise ConfigurationError(f"{where}: field {key!r} has the wrong type")
    return v


def config_from_dict(d: dict, where: str = "config") -> SweepConfig:
    if not isinstance(d, dict):
        raise ConfigurationError(f"{where}: expected a JSON object")
    allowed = {"n", "k", "R", "oa_mask", "ob_mask", "variants",
               "success_rule", "noise", "shots", "seed", "threads",
               "output", "format"}
    for key in d:
        if key not in allowed:
            raise ConfigurationError(f"{where}: unknown field {key!r}")

    n = _want(d, "n", int, where, default=4)
    k = _want(d, "k", int, where, default=3)
    rv = _want(d, "R", list, where, default=[25])
    if not rv or not all(isinstance(r, int) and not isinstance(r, bool) for r in rv):
        raise ConfigurationError(f"{where}: field 'R' must be a non-empty list of integers")
    oa = _want(d, "oa_mask", int, where, default=min(0b1011, (1 << n) - 1))
    ob = _want(d, "ob_mask", int, where, default=min(0b1011, (1 << n) - 1))

    raw_variants = _want(d, "variants", list, where,
                         default=[v.value for v in Variant])
    variants = []
    for name in raw_variants:
        try:
            variants.append(Variant(name))
        except ValueError:
            raise ConfigurationError(
                f"{where}: field 'variants' names unknown variant {name!r} "
                f"(choose from {[v.value for v in Variant]})") from None

    rule_name = _want(d, "success_rule", str, where,
                      default=SuccessRule.BOTH_FLAGS.value)
    try:
        rule = SuccessRule(rule_name)
    except ValueError:
        raise ConfigurationError(
            f"{where}: field 'success_rule' must be one of "
            f"{[r.value for r in SuccessRule]}, got {rule_name!r}") from None

    noise = _want(d, "noise", dict, where, default={})
    for key in noise:
        if key not in ("p1", "p2", "p_ro"):
            raise ConfigurationError(f"{where}: unknown field 'noise.{key}'")
    p1 = _want(noise, "p1", (int, float), f"{where}.noise", default=2e-4)
    p2 = _want(noise, "p2", (int, float), f"{where}.noise", default=2e-3)
    p_ro = _want(noise, "p_ro", (int, float), f"{where}.noise", default=1e-2)

    shots = _want(d, "shots", int, where, default=4000)
    seed = _want(d, "seed", int, where, required=True)
    threads = _want(d, "threads", int, where, default=1)
    output = _want(d, "output", str, where, default=None)
    fmt = _want(d, "format", str, where, default="csv")
    if fmt not in ("csv", "json"):
        raise ConfigurationError(
            f"{where}: field 'format' must be 'csv' or 'json', got {fmt!r}")

    return SweepConfig(n=n, k=k, r_values=tuple(rv), oa_mask=oa, ob_mask=ob,
                       variants=tuple(variants), success_rule=rule,
                       p1=float(p1), p2=float(p2), p_ro=float(p_ro),
                       shots=shots, seed=seed, threads=threads,
                       output=output, fmt=fmt)


def load_config(path: str) -> SweepConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as e:
        raise ConfigurationError(f"cannot read config {path!r}: {e}") from None
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"config {path!r} is not valid JSON: {e}") from None
    return config_from_dict(data, where=path)


def row_seed_for(master: int, row_index: int) -> int:
    return (master ^ ((_MIX * (row_index + 1)) & _M64)) & _M64


def run_sweep(cfg: SweepConfig, progress=None) -> list[SweepRow]:
    rows = []
    total = len(cfg.variants) * len(cfg.r_values)
    index = 0
    for variant in cfg.variants:
        for r in cfg.r_values:
            ec = ExperimentConfig(n=cfg.n, k=cfg.k, r=r,
                                  oa_mask=cfg.oa_mask, ob_mask=cfg.ob_mask,
                                  variant=variant,
                                  success_rule=cfg.success_rule)
            circuit = build_circuit(ec)
            lowered = lower(circuit)
            report = cost(lowered)
            _, probes0 = run(circuit)
            rseed = row_seed_for(cfg.seed, index)
            sample = sample_shots(
                lowered,
                NoiseConfig(p1=cfg.p1, p2=cfg.p2, p_ro=cfg.p_ro,
                            shots=cfg.shots, seed=rseed),
                threads=cfg.threads)
            p, se = p_succ(sample.histogram, cfg.success_rule)
            ub = expected_ub(sample.probe_means, cfg.k, variant)
            row = SweepRow(
                variant=variant.value, r=r, n=cfg.n, k=cfg.k,
                shots=cfg.shots, seed=cfg.seed, row_seed=rseed,
                depth=report.depth, twoq=report.twoq_count,
                p_succ=p, stderr=se, expected_ub=ub,
                efficiency=efficiency(p, ub),
                histogram=sample.histogram,
                probes_noisy=dict(sample.probe_means),
                probes_noiseless=dict(probes0),
                error_shots=sample.error_shots)
            rows.append(row)
            index += 1
            if progress is not None:
                progress(index, total, row)
    return rows


def _fmt_float(x) -> str:
    return "" if x is None else "%.10g" % x


def rows_to_csv(rows) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        lines.append(",".join((
            row.variant, str(row.r), str(row.n), str(row.k),
            str(row.shots), str(row.seed), str(row.depth), str(row.twoq),
            _fmt_float(row.p_succ), _fmt_float(row.stderr),
            _fmt_float(row.expected_ub), _fmt_float(row.efficiency))))
    return "\n".join(lines) + "\n"


def rows_to_json(cfg: SweepConfig, rows) -> str:
    doc = {
        "config": {
            "n": cfg.n, "k": cfg.k, "R": list(cfg.r_values),
            "oa_mask": cfg.oa_mask, "ob_mask": cfg.ob_mask,
            "variants": [v.value for v in cfg.variants],
            "success_rule": cfg.success_rule.value,
            "noise": {"p1": cfg.p1, "p2": cfg.p2, "p_ro": cfg.p_ro},
            "shots": cfg.shots, "seed": cfg.seed, "threads": cfg.threads,
        },
        "rows": [{
            "variant": row.variant, "R": row.r, "n": row.n, "k": row.k,
            "shots": row.shots, "seed": row.seed, "row_seed": row.row_seed,
            "depth": row.depth, "twoq": row.twoq,
            "p_succ": row.p_succ, "stderr": row.stderr,
            "expected_ub": row.expected_ub, "efficiency": row.efficiency,
            "error_shots": row.error_shots,
            "histogram": row.histogram,
            "probes_noisy": row.probes_noisy,
            "probes_noiseless": row.probes_noiseless,
        } for row in rows],
    }
    return json.dumps(doc, indent=2) + "\n"


# ----------------------------------------------------------- verify suites

def _suite_unitarity() -> tuple[bool, list[str]]:
    """Random logical circuits and their lowerings stay unitary."""
    rng = np.random.default_rng(20240811)
    nq = 4
    kinds_1q = ("H", "S", "Sdg", "T", "Tdg", "X", "SX")
    lines, ok = [], True
    for trial in range(3):
        gates = []
        for _ in range(25):
            roll = rng.integers(0, 5)
            if roll == 0:
                gates.append(Gate(str(rng.choice(kinds_1q)),
                                  (int(rng.integers(0, nq)),)))
            elif roll == 1:
                gates.append(Gate("RZ", (int(rng.integers(0, nq)),),
                                  param=float(rng.uniform(-math.pi, math.pi))))
            elif roll == 2:
                a, b = (int(x) for x in rng.choice(nq, 2, replace=False))
                gates.append(Gate("CX", (a, b)))
            elif roll == 3:
                a, b, c = (int(x) for x in rng.choice(nq, 3, replace=False))
                gates.append(Gate(str(rng.choice(("CCX", "RCCX", "CSWAP"))),
                                  (a, b, c)))
            else:
                m = int(rng.integers(2, 5))
                qs = tuple(int(x) for x in rng.choice(nq, m, replace=False))
                gates.append(Gate(str(rng.choice(("MCZ", "MCX"))), qs))
        lowered = lower(Circuit(num_qubits=nq, gates=tuple(gates)))
        for label, gl in (("logical", gates),
                          ("lowered", lowered.circuit.gates)):
            u = gates_to_unitary(gl, nq)
            dev = float(np.max(np.abs(u.conj().T @ u - np.eye(1 << nq))))
            good = dev <= 1e-9
            ok &= good
            lines.append(f"unitarity: random circuit {trial + 1} ({label}) "
                         f"max|U+U - I| = {dev:.3e} <= 1e-9 "
                         f"{'pass' if good else 'FAIL'}")
    return ok, lines


def _suite_swap_equivalence() -> tuple[bool, list[str]]:
    """The two skip realizations agree as operators on the live sector."""
    lines, ok = [], True
    for n in (1, 2, 3):
        ec = ExperimentConfig(n=n, k=1, r=1, oa_mask=(1 << n) - 1,
                              ob_mask=(1 << n) - 1,
                              variant=Variant.QSG_SWAPOUT)
        res = variant_equivalence_check(ec, tol=1e-9)
        good = bool(res)
        ok &= good
        lines.append(f"swap-equivalence: n={n} status={res.status} "
                     f"max dev = {res.max_dev:.3e} <= 1e-9 "
                     f"{'pass' if good else 'FAIL'}")
    return ok, lines


def _suite_ancilla() -> tuple[bool, list[str]]:
    """Skip control and dummy register return to |0> at every boundary."""
    ec = ExperimentConfig(n=2, k=2, r=2, oa_mask=0b11, ob_mask=0b01,
                          variant=Variant.QSG_SWAPOUT)
    circuit = build_qsg(ec, boundary_probes=True)
    _, probes = run(circuit)
    lines, ok = [], True
    for label, value in probes.items():
        if label.startswith("anc=1@end"):
            good = value <= 1e-9
            lines.append(f"ancilla: P({label}) = {value:.3e} <= 1e-9 "
                         f"{'pass' if good else 'FAIL'}")
        elif label.startswith("dB=0@end"):
            good = abs(1.0 - value) <= 1e-9
            lines.append(f"ancilla: P({label}) = {value:.12f} ~ 1 "
                         f"{'pass' if good else 'FAIL'}")
        else:
            continue
        ok &= good
    return ok, lines


def _suite_block_structure() -> tuple[bool, list[str]]:
    """The sandwich acts blockwise: expensive body on the live branch,
    identity on the flagged branch, control sector untouched."""
    from .engine import to_unitary

    lines, ok = [], True
    for variant in (Variant.QSG_SWAPOUT, Variant.QSG_CONTROLLED):
        ec = ExperimentConfig(n=1, k=1, r=1, oa_mask=1, ob_mask=1,
                              variant=variant)
        block = skip_block(ec)
        u = to_unitary(block)
        nq = block.num_qubits  # layout: C=0 fA=1 anc=2 xB=3.. dB=..
        u_b = gates_to_unitary(
            [Gate("PHASE_FLIP_ON", (0,), mask=ec.ob_mask)], ec.n)
        dim_b = 1 << ec.n
        worst = 0.0
        for c in (0, 1):
            for fa in (0, 1):
                rows_cols = [c | fa << 1 | xb << 3 for xb in range(dim_b)]
                blk = u[np.ix_(rows_cols, rows_cols)]
                want = np.eye(dim_b) if (c == 1 and fa == 1) else u_b
                worst = max(worst, float(np.max(np.abs(blk - want))))
                others = [r for r in range(1 << nq) if r not in rows_cols]
                worst = max(worst, float(np.max(np.abs(
                    u[np.ix_(others, rows_cols)]))))
        good = worst <= 1e-9
        ok &= good
        lines.append(f"block-structure: {variant.value} worst sector dev = "
                     f"{worst:.3e} <= 1e-9 {'pass' if good else 'FAIL'}")
    return ok, lines


def _suite_metrics() -> tuple[bool, list[str]]:
    """Numeric anchors for the summary formulas."""
    lines, ok = [], True

    p, se = p_succ({"11": 3026, "00": 974}, SuccessRule.BOTH_FLAGS)
    good = abs(p - 0.7565) < 1e-12 and round(se, 4) == 0.0068
    ok &= good
    lines.append(f"metrics: 3026/4000 -> {p:.4f} +/- {se:.4f} "
                 f"(want 0.7565 +/- 0.0068) {'pass' if good else 'FAIL'}")

    ub = expected_ub({f"a=1@iter {t}": 0.25 for t in (1, 2, 3)}, 3,
                     Variant.QSG_SWAPOUT)
    good = abs(ub - 3.0) < 1e-12
    ok &= good
    lines.append(f"metrics: fully mixed skip probes (0.25 raw) -> "
                 f"<#calls> = {ub:.3f} (want 3.000) {'pass' if good else 'FAIL'}")

    ub = expected_ub({f"a=1@iter {t}": 0.125 for t in (1, 2, 3)}, 3,
                     Variant.QSG_SWAPOUT)
    good = abs(ub - 4.5) < 1e-12
    ok &= good
    lines.append(f"metrics: 25% conditional skip rate -> <#calls> = {ub:.3f} "
                 f"of a 6-call budget (want 4.500) {'pass' if good else 'FAIL'}")

    good = abs(expected_ub({}, 3, Variant.FIXED) - 6.0) < 1e-12
    ok &= good
    lines.append(f"metrics: rigid baseline k=3 -> 6.000 {'pass' if good else 'FAIL'}")

    for ps, ub_v, want in ((0.751, 4.53, 0.166), (0.763, 4.49, 0.170)):
        e = efficiency(ps, ub_v)
        good = round(e, 3) == want
        ok &= good
        lines.append(f"metrics: efficiency({ps}, {ub_v}) = {e:.4f} -> "
                     f"round {want} {'pass' if good else 'FAIL'}")

    good = efficiency(0.5, 0.0) is None
    ok &= good
    lines.append(f"metrics: zero-call efficiency undefined "
                 f"{'pass' if good else 'FAIL'}")
    return ok, lines


VERIFY_SUITES = {
    "unitarity": _suite_unitarity,
    "swap-equivalence": _suite_swap_equivalence,
    "ancilla": _suite_ancilla,
    "block-structure": _suite_block_structure,
    "metrics": _suite_metrics,
}


def verify_suite(name: str) -> tuple[bool, list[str]]:
    if name not in VERIFY_SUITES:
        raise ConfigurationError(
            f"unknown verify suite {name!r} (choose from "
            f"{sorted(VERIFY_SUITES)})")
    return VERIFY_SUITES[name]()
