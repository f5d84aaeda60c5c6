"""Benchmark circuit constructors.

Three variants are built from one experiment description:

- FIXED: plain Grover layers, both oracles run every iteration.
- QSG_SWAPOUT: the expensive oracle is sandwiched between controlled
  register exchanges with a dummy register, so on the skip branch it
  burns its cost on |0...0> and acts as the identity.
- QSG_CONTROLLED: every gate of the expensive oracle carries the skip
  ancilla as an extra control (with an X conjugation so the oracle runs
  on the anc=0 branch).

The skip condition anc = C and fA is computed and uncomputed each
iteration with a relative-phase Toffoli; diffusion always acts jointly
on both data registers; flags use toggle semantics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .circuit import Circuit, Probe, RegisterLayout
from .engine import ProjectorQuery, to_unitary
from .errors import CapabilityError, CircuitError, ConfigurationError
from .gates import (
    Gate,
    OracleSpec,
    cswap_block,
    diffusion,
    expensive_oracle,
    phase_oracle,
    set_flag,
)


class Variant(str, Enum):
    FIXED = "FIXED"
    QSG_CONTROLLED = "QSG_CONTROLLED"
    QSG_SWAPOUT = "QSG_SWAPOUT"


class SuccessRule(str, Enum):
    BOTH_FLAGS = "BOTH_FLAGS"
    FB_ONLY = "FB_ONLY"


@dataclass(frozen=True)
class ExperimentConfig:
    """One benchmark point. Defaults match the n=4, k=3 study setup."""

    n: int = 4
    k: int = 3
    r: int = 25
    oa_mask: int = 0b1011
    ob_mask: int = 0b1011
    variant: Variant = Variant.QSG_SWAPOUT
    success_rule: SuccessRule = SuccessRule.BOTH_FLAGS

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        object.__setattr__(self, "success_rule", SuccessRule(self.success_rule))
        if self.n < 1:
            raise ConfigurationError(f"n must be >= 1, got {self.n}")
        if self.k < 0:
            raise ConfigurationError(f"k must be >= 0, got {self.k}")
        if self.r < 1:
            raise ConfigurationError(f"R must be >= 1, got {self.r}")
        for name, mask in (("oa_mask", self.oa_mask), ("ob_mask", self.ob_mask)):
            if not 0 <= mask < (1 << self.n):
                raise ConfigurationError(
                    f"{name} {mask:#b} out of range for n={self.n}")
        if self.variant is Variant.QSG_SWAPOUT and self.ob_mask == 0:
            # the dummy register is |0...0>; a zero mask would mark it
            raise ConfigurationError(
                "ob_mask must be nonzero for QSG_SWAPOUT")


def _fixed_layout(n: int) -> RegisterLayout:
    return RegisterLayout(
        n=n, xA=tuple(range(n)), xB=tuple(range(n, 2 * n)),
        fA=2 * n, fB=2 * n + 1, spare=2 * n + 2)


def _qsg_layout(n: int) -> RegisterLayout:
    return RegisterLayout(
        n=n, C=0, xA=tuple(range(1, n + 1)), xB=tuple(range(n + 1, 2 * n + 1)),
        fA=2 * n + 1, fB=2 * n + 2, anc=2 * n + 3,
        dB=tuple(range(2 * n + 4, 3 * n + 4)))


def build_fixed(config: ExperimentConfig) -> Circuit:
    """Fixed-order Grover on 2n+3 wires (one wire idles as a spare clean
    ancilla for lowering). k=0 leaves only the initial H wall."""
    n, lay = config.n, _fixed_layout(config.n)
    spec_a = OracleSpec(n, config.oa_mask)
    spec_b = OracleSpec(n, config.ob_mask, config.r)
    pool = (lay.spare,)
    gates: list[Gate] = [Gate("H", (w,)) for w in lay.xA + lay.xB]
    marks: list[tuple[int, str]] = []
    for t in range(1, config.k + 1):
        marks.append((len(gates), f"iter {t}"))
        gates += phase_oracle(spec_a, lay.xA, pool)
        gates += set_flag(lay.xA, lay.fA, config.oa_mask, pool)
        gates += expensive_oracle(spec_b, lay.xB, pool)
        gates += set_flag(lay.xB, lay.fB, config.ob_mask, pool)
        gates += diffusion(lay.xA + lay.xB, pool)
    return Circuit(
        num_qubits=2 * n + 3, gates=tuple(gates), layout=lay,
        measurements=((lay.fA, "fA"), (lay.fB, "fB")), marks=tuple(marks))


def _promote_onto(gates, ctrl: int, pool) -> tuple[Gate, ...]:
    """Attach ctrl as an extra control to every gate of an oracle body.

    X becomes CX; the pattern phase becomes a wider pattern phase; the
    T/Tdg padding becomes controlled-phase pairs realized in the RZ/CX
    basis (each pair still cancels exactly, but now every gate leans on
    the control wire).
    """
    out: list[Gate] = []
    pool = tuple(pool)
    for g in gates:
        if g.kind == "X":
            out.append(Gate("CX", (ctrl,) + g.qubits, tag=g.tag))
        elif g.kind == "MCZ":
            out.append(Gate("MCZ", (ctrl,) + g.qubits, pool=pool, tag=g.tag))
        elif g.kind in ("T", "Tdg"):
            half = (math.pi / 8) if g.kind == "T" else (-math.pi / 8)
            q = g.qubits[0]
            out += [
                Gate("RZ", (ctrl,), param=half, tag=g.tag),
                Gate("RZ", (q,), param=half, tag=g.tag),
                Gate("CX", (ctrl, q), tag=g.tag),
                Gate("RZ", (q,), param=-half, tag=g.tag),
                Gate("CX", (ctrl, q), tag=g.tag),
            ]
        else:
            raise CircuitError(f"cannot promote gate kind {g.kind!r}")
    return tuple(out)


def _skip_realization(config: ExperimentConfig, anc: int, xb, db) -> tuple[Gate, ...]:
    spec_b = OracleSpec(config.n, config.ob_mask, config.r)
    if config.variant is Variant.QSG_SWAPOUT:
        swap = cswap_block(anc, xb, db)
        # nothing is clean inside the sandwich: dB holds swapped data
        return swap + expensive_oracle(spec_b, xb, pool=()) + swap
    if config.variant is Variant.QSG_CONTROLLED:
        # dB is never touched on this path, so it backs the promoted gates
        body = _promote_onto(expensive_oracle(spec_b, xb, pool=()), anc, pool=db)
        return (Gate("X", (anc,)),) + body + (Gate("X", (anc,)),)
    raise ConfigurationError(f"{config.variant.value} has no skip realization")


def build_qsg(config: ExperimentConfig, boundary_probes: bool = False) -> Circuit:
    """Skip-gate Grover on 3n+4 wires.

    Per iteration: cheap oracle, flag toggle, compute anc = C and fA,
    skip realization, flag toggle on the expensive register, uncompute
    anc, joint diffusion. A probe "a=1@iter t" sits right after each
    compute step; boundary_probes adds end-of-iteration leakage probes
    for anc and the dummy register.
    """
    if config.variant is Variant.FIXED:
        raise ConfigurationError("FIXED variant has no skip-gate circuit")
    n, lay = config.n, _qsg_layout(config.n)
    spec_a = OracleSpec(n, config.oa_mask)
    pool = (lay.anc,) + lay.dB
    gates: list[Gate] = [Gate("H", (w,)) for w in lay.xA + lay.xB + (lay.C,)]
    probes: list[Probe] = []
    marks: list[tuple[int, str]] = []
    for t in range(1, config.k + 1):
        marks.append((len(gates), f"iter {t}"))
        gates += phase_oracle(spec_a, lay.xA, pool)
        gates += set_flag(lay.xA, lay.fA, config.oa_mask, pool)
        gates.append(Gate("RCCX", (lay.C, lay.fA, lay.anc)))
        probes.append(Probe(len(gates), f"a=1@iter {t}",
                            ProjectorQuery(((lay.anc, 1),))))
        gates += _skip_realization(config, lay.anc, lay.xB, lay.dB)
        gates += set_flag(lay.xB, lay.fB, config.ob_mask, pool=lay.dB)
        gates.append(Gate("RCCX", (lay.C, lay.fA, lay.anc)))
        gates += diffusion(lay.xA + lay.xB, pool)
        if boundary_probes:
            probes.append(Probe(len(gates), f"anc=1@end {t}",
                                ProjectorQuery(((lay.anc, 1),))))
            probes.append(Probe(len(gates), f"dB=0@end {t}",
                                ProjectorQuery(tuple((d, 0) for d in lay.dB))))
    return Circuit(
        num_qubits=3 * n + 4, gates=tuple(gates), probes=tuple(probes),
        layout=lay, measurements=((lay.fA, "fA"), (lay.fB, "fB")),
        marks=tuple(marks))


def build_circuit(config: ExperimentConfig, boundary_probes: bool = False) -> Circuit:
    if config.variant is Variant.FIXED:
        return build_fixed(config)
    return build_qsg(config, boundary_probes=boundary_probes)


def skip_block(config: ExperimentConfig) -> Circuit:
    """The part where the variants differ, on a compact 2n+3 wire layout:
    compute-RCCX, skip realization, uncompute-RCCX. Wires: C=0, fA=1,
    anc=2, then xB, then dB."""
    if config.variant is Variant.FIXED:
        raise ConfigurationError("FIXED variant has no skip block")
    n = config.n
    c, fa, anc = 0, 1, 2
    xb = tuple(range(3, 3 + n))
    db = tuple(range(3 + n, 3 + 2 * n))
    body = _skip_realization(config, anc, xb, db)
    gates = (Gate("RCCX", (c, fa, anc)),) + body + (Gate("RCCX", (c, fa, anc)),)
    return Circuit(num_qubits=3 + 2 * n, gates=gates)


@dataclass(frozen=True)
class EquivalenceResult:
    """Outcome of the swap-out vs controlled matrix comparison."""

    status: str            # "ok" or "unsupported"
    passed: bool
    max_dev: float | None
    detail: str

    def __bool__(self) -> bool:
        return self.passed


def variant_equivalence_check(config: ExperimentConfig,
                              tol: float = 1e-9) -> EquivalenceResult:
    """Compare the two skip realizations as matrices on the dB=|0...0>
    sector, sandwiched between the same compute/uncompute pair so the
    relative phases of the ancilla computation cancel identically."""
    if config.n > 3:
        raise CapabilityError("matrix comparison supported for n <= 3")
    if config.ob_mask == 0:
        return EquivalenceResult(
            status="unsupported", passed=False, max_dev=None,
            detail="swap-out requires a nonzero expensive-oracle mask")
    u = {}
    for variant in (Variant.QSG_SWAPOUT, Variant.QSG_CONTROLLED):
        cfg = ExperimentConfig(
            n=config.n, k=max(config.k, 1), r=config.r,
            oa_mask=config.oa_mask, ob_mask=config.ob_mask,
            variant=variant, success_rule=config.success_rule)
        u[variant] = to_unitary(skip_block(cfg))
    nq = 3 + 2 * config.n
    db_lo = 3 + config.n
    idx = np.array([i for i in range(1 << nq)
                    if (i >> db_lo) & ((1 << config.n) - 1) == 0])
    block_sw = u[Variant.QSG_SWAPOUT][np.ix_(idx, idx)]
    block_ct = u[Variant.QSG_CONTROLLED][np.ix_(idx, idx)]
    # swap-out must also return all dB=0 inputs to dB=0 outputs exactly
    leak = u[Variant.QSG_SWAPOUT][np.ix_(
        np.setdiff1d(np.arange(1 << nq), idx), idx)]
    dev = float(max(np.max(np.abs(block_sw - block_ct)), np.max(np.abs(leak))))
    return EquivalenceResult(
        status="ok", passed=dev < tol, max_dev=dev,
        detail=f"max deviation {dev:.3e} on the dB=0 sector (tol {tol:g})")
