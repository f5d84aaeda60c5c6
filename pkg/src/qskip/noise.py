"""Trajectory sampling under a parametric Pauli noise model.

Model: after every native gate an error fires independently (probability
p1 for one-qubit natives including frame rotations, p2 for CX); a firing
draws a uniform non-identity Pauli (X/Y/Z on one qubit, one of the 15
non-identity pairs on two). Measured bits are flipped independently with
probability p_ro. Each trajectory t gets its own counter-based stream,
Philox keyed by seed XOR t, so trajectories are reproducible in isolation.

Per-trajectory draw order is part of the contract (the pure-NumPy
reference runner below consumes the identical stream):

  1. u = rng.random(n_native); error sites are u[i] < p(i)
  2. one rng.integers(1, 4) or rng.integers(1, 16) per site, ascending
     site order (bounds by gate arity)
  3. um = rng.random() picks the measurement outcome
  4. rng.random(n_meas) decides per-bit readout flips

Sampling replays whole lowered spans as single state passes (Toffoli
variants as sector permutations, phase ladders as pattern flips, padding
blocks as verified identities); only spans that contain an error site
are replayed gate by gate with the Pauli insertions. Macro passes agree
with the gate-by-gate product up to a global phase, which no recorded
quantity can see. Error trajectories restart from the latest snapshot
of the noiseless state taken at or before their first affected span.

Accumulation order is fixed (trajectory chunks of 256, reduced in chunk
order), so results are invariant under the thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numba import njit

from .circuit import Circuit
from .errors import CircuitError, ConfigurationError
from .transpile import LoweredCircuit, NATIVE_KINDS, Span

_CHUNK = 256
_SNAPSHOT_TARGET = 24

_K_RZ, _K_SX, _K_X, _K_CX = 0, 1, 2, 3
_S_RAW, _S_H, _S_RCCX, _S_CCX, _S_CSWAP, _S_PATTERN, _S_IDENT = range(7)
_SPAN_CODE = {"1q": _S_RAW, "2q": _S_RAW, "H": _S_H, "RCCX": _S_RCCX,
              "CCX": _S_CCX, "CSWAP": _S_CSWAP, "MCZ_GRAY": _S_PATTERN}


@dataclass(frozen=True)
class NoiseConfig:
    """Error rates, shot count and master seed for one sampling run."""

    p1: float = 2e-4
    p2: float = 2e-3
    p_ro: float = 1e-2
    shots: int = 4096
    seed: int | None = None

    def __post_init__(self):
        for name in ("p1", "p2", "p_ro"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not 0.0 <= float(v) <= 1.0:
                raise ConfigurationError(f"{name} must be in [0, 1], got {v!r}")
        if not isinstance(self.shots, int) or isinstance(self.shots, bool):
            raise ConfigurationError(f"shots must be an integer, got {self.shots!r}")
        if self.shots < 1:
            raise ConfigurationError(f"shots must be positive, got {self.shots}")
        if self.seed is not None and not isinstance(self.seed, int):
            raise ConfigurationError(f"seed must be an integer, got {self.seed!r}")


@dataclass(frozen=True)
class SampleResult:
    histogram: dict
    probe_means: dict
    shots: int
    error_shots: int


# ---------------------------------------------------------------- kernels

@njit(cache=True, nogil=True)
def _k_pauli(state, q, code):
    bit = 1 << q
    if code == 1:  # X
        for i in range(state.shape[0]):
            if not i & bit:
                j = i | bit
                state[i], state[j] = state[j], state[i]
    elif code == 2:  # Y
        for i in range(state.shape[0]):
            if not i & bit:
                j = i | bit
                x0 = state[i]
                x1 = state[j]
                state[i] = -1j * x1
                state[j] = 1j * x0
    else:  # Z
        for i in range(state.shape[0]):
            if i & bit:
                state[i] = -state[i]


@njit(cache=True, nogil=True)
def _k_native(state, kind, q0, q1, ang):
    if kind == _K_RZ:
        c0 = complex(math.cos(ang / 2), -math.sin(ang / 2))
        c1 = complex(math.cos(ang / 2), math.sin(ang / 2))
        bit = 1 << q0
        for i in range(state.shape[0]):
            state[i] *= c1 if i & bit else c0
    elif kind == _K_SX:
        bit = 1 << q0
        a = 0.5 + 0.5j
        b = 0.5 - 0.5j
        for i in range(state.shape[0]):
            if not i & bit:
                j = i | bit
                x0 = state[i]
                x1 = state[j]
                state[i] = a * x0 + b * x1
                state[j] = b * x0 + a * x1
    elif kind == _K_X:
        bit = 1 << q0
        for i in range(state.shape[0]):
            if not i & bit:
                j = i | bit
                state[i], state[j] = state[j], state[i]
    else:
        cbit = 1 << q0
        tbit = 1 << q1
        for i in range(state.shape[0]):
            if (i & cbit) and not (i & tbit):
                j = i | tbit
                state[i], state[j] = state[j], state[i]


@njit(cache=True, nogil=True)
def _k_h(state, q):
    bit = 1 << q
    r = 1.0 / math.sqrt(2.0)
    for i in range(state.shape[0]):
        if not i & bit:
            j = i | bit
            x0 = state[i]
            x1 = state[j]
            state[i] = (x0 + x1) * r
            state[j] = (x0 - x1) * r


@njit(cache=True, nogil=True)
def _k_rccx(state, c1, c2, t):
    b1 = 1 << c1
    b2 = 1 << c2
    bt = 1 << t
    for i in range(state.shape[0]):
        if i & b1:
            if i & b2:
                if not i & bt:
                    j = i | bt
                    x0 = state[i]
                    x1 = state[j]
                    state[j] = 1j * x0
                    state[i] = -1j * x1
            elif i & bt:
                state[i] = -state[i]


@njit(cache=True, nogil=True)
def _k_ccx(state, c1, c2, t):
    b1 = 1 << c1
    b2 = 1 << c2
    bt = 1 << t
    for i in range(state.shape[0]):
        if (i & b1) and (i & b2) and not (i & bt):
            j = i | bt
            state[i], state[j] = state[j], state[i]


@njit(cache=True, nogil=True)
def _k_cswap(state, c, a, b):
    bc = 1 << c
    ba = 1 << a
    bb = 1 << b
    for i in range(state.shape[0]):
        if (i & bc) and (i & ba) and not (i & bb):
            j = i ^ ba ^ bb
            state[i], state[j] = state[j], state[i]


@njit(cache=True, nogil=True)
def _k_pattern_flip(state, mask):
    for i in range(state.shape[0]):
        if i & mask == mask:
            state[i] = -state[i]


@njit(cache=True, nogil=True)
def _k_prob(state, mask, want):
    total = 0.0
    for i in range(state.shape[0]):
        if i & mask == want:
            x = state[i]
            total += x.real * x.real + x.imag * x.imag
    return total


@njit(cache=True, nogil=True)
def _k_marginal(state, wires, out):
    out[:] = 0.0
    for i in range(state.shape[0]):
        idx = 0
        for j in range(wires.shape[0]):
            idx |= ((i >> wires[j]) & 1) << j
        x = state[i]
        out[idx] += x.real * x.real + x.imag * x.imag


@njit(cache=True, nogil=True)
def _walk(state, sp_kind, sp_start, sp_end, sp_q0, sp_q1, sp_q2, sp_mask,
          nk, ng0, ng1, nang, n2q, sites, codes,
          probe_pos, probe_mask, probe_want, probe_val,
          start_span, end_span, n_native):
    """Advance `state` through spans [start_span, end_span), inserting the
    Pauli list and recording probe values encountered along the way."""
    esi = 0
    lo = sp_start[start_span] if start_span < sp_kind.shape[0] else n_native
    while esi < sites.shape[0] and sites[esi] < lo:
        esi += 1
    ppi = 0
    while ppi < probe_pos.shape[0] and probe_pos[ppi] < lo:
        ppi += 1

    for s in range(start_span, end_span):
        st = sp_start[s]
        en = sp_end[s]
        while ppi < probe_pos.shape[0] and probe_pos[ppi] == st:
            probe_val[ppi] = _k_prob(state, probe_mask[ppi], probe_want[ppi])
            ppi += 1
        if esi < sites.shape[0] and sites[esi] < en:
            for i in range(st, en):
                _k_native(state, nk[i], ng0[i], ng1[i], nang[i])
                while esi < sites.shape[0] and sites[esi] == i:
                    c = codes[esi]
                    if n2q[i]:
                        pa = c & 3
                        pb = c >> 2
                        if pa:
                            _k_pauli(state, ng0[i], pa)
                        if pb:
                            _k_pauli(state, ng1[i], pb)
                    else:
                        _k_pauli(state, ng0[i], c)
                    esi += 1
        else:
            k = sp_kind[s]
            if k == _S_RAW:
                for i in range(st, en):
                    _k_native(state, nk[i], ng0[i], ng1[i], nang[i])
            elif k == _S_H:
                _k_h(state, sp_q0[s])
            elif k == _S_RCCX:
                _k_rccx(state, sp_q0[s], sp_q1[s], sp_q2[s])
            elif k == _S_CCX:
                _k_ccx(state, sp_q0[s], sp_q1[s], sp_q2[s])
            elif k == _S_CSWAP:
                _k_cswap(state, sp_q0[s], sp_q1[s], sp_q2[s])
            elif k == _S_PATTERN:
                _k_pattern_flip(state, sp_mask[s])
            # _S_IDENT: verified no-op

    if end_span == sp_kind.shape[0]:
        while ppi < probe_pos.shape[0]:
            if probe_pos[ppi] == n_native:
                probe_val[ppi] = _k_prob(state, probe_mask[ppi], probe_want[ppi])
            ppi += 1


# ------------------------------------------------------------ tape build

_SX_MAT = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]])


def _run_is_identity(gates, tol=1e-9):
    """Dense check that a native run multiplies to a global phase."""
    wires = sorted({q for g in gates for q in g.qubits})
    pos = {w: j for j, w in enumerate(wires)}
    dim = 1 << len(wires)
    u = np.eye(dim, dtype=complex)
    for g in gates:
        a = np.zeros((dim, dim), dtype=complex)
        if g.kind == "CX":
            cb, tb = 1 << pos[g.qubits[0]], 1 << pos[g.qubits[1]]
            for i in range(dim):
                a[i ^ tb if i & cb else i, i] = 1.0
        else:
            if g.kind == "RZ":
                m = np.diag([np.exp(-0.5j * g.param), np.exp(0.5j * g.param)])
            elif g.kind == "SX":
                m = _SX_MAT
            else:
                m = np.array([[0, 1], [1, 0]], dtype=complex)
            b = 1 << pos[g.qubits[0]]
            for i in range(dim):
                bit = 1 if i & b else 0
                a[i, i] = m[bit, bit]
                a[i ^ b, i] = m[1 - bit, bit]
        u = a @ u
    return np.max(np.abs(u - u[0, 0] * np.eye(dim))) < tol


class _Tape:
    def __init__(self, circuit: Circuit, spans, p1: float, p2: float):
        gates = circuit.gates
        self.nq = circuit.num_qubits
        self.n_native = len(gates)
        self.nk = np.empty(self.n_native, np.int64)
        self.ng0 = np.zeros(self.n_native, np.int64)
        self.ng1 = np.zeros(self.n_native, np.int64)
        self.nang = np.zeros(self.n_native, np.float64)
        self.n2q = np.zeros(self.n_native, np.bool_)
        kind_code = {"RZ": _K_RZ, "SX": _K_SX, "X": _K_X, "CX": _K_CX}
        for i, g in enumerate(gates):
            if g.kind not in NATIVE_KINDS:
                raise CircuitError(
                    f"noise sampling needs a lowered circuit; found {g.kind} "
                    f"on qubits {g.qubits}")
            self.nk[i] = kind_code[g.kind]
            self.ng0[i] = g.qubits[0]
            if g.kind == "CX":
                self.ng1[i] = g.qubits[1]
                self.n2q[i] = True
            if g.kind == "RZ":
                self.nang[i] = g.param
        self.perr = np.where(self.n2q, p2, p1)

        probe_positions = {p.position for p in circuit.probes}
        merged = self._coalesce(spans, gates, probe_positions)
        ns = len(merged)
        self.sp_kind = np.empty(ns, np.int64)
        self.sp_start = np.empty(ns, np.int64)
        self.sp_end = np.empty(ns, np.int64)
        self.sp_q0 = np.zeros(ns, np.int64)
        self.sp_q1 = np.zeros(ns, np.int64)
        self.sp_q2 = np.zeros(ns, np.int64)
        self.sp_mask = np.zeros(ns, np.int64)
        for j, (code, start, end, qs) in enumerate(merged):
            self.sp_kind[j] = code
            self.sp_start[j] = start
            self.sp_end[j] = end
            for slot, q in enumerate(qs[:3]):
                (self.sp_q0, self.sp_q1, self.sp_q2)[slot][j] = q
            if code == _S_PATTERN:
                self.sp_mask[j] = sum(1 << q for q in qs)

        probes = sorted(circuit.probes, key=lambda p: p.position)
        starts = set(self.sp_start.tolist())
        for p in probes:
            if p.position != self.n_native and p.position not in starts:
                raise CircuitError(
                    f"probe {p.label!r} at offset {p.position} does not sit "
                    "on a span boundary")
        self.probe_pos = np.array([p.position for p in probes], np.int64)
        self.probe_mask = np.array(
            [sum(1 << w for w, _ in p.query.constraints) for p in probes],
            np.int64)
        self.probe_want = np.array(
            [sum(v << w for w, v in p.query.constraints) for p in probes],
            np.int64)
        self.probe_labels = [p.label for p in probes]

        if not circuit.measurements:
            raise ConfigurationError("circuit declares no measurements to sample")
        self.meas_wires = np.array([w for w, _ in circuit.measurements], np.int64)
        self.n_meas = len(circuit.measurements)

    @staticmethod
    def _coalesce(spans, gates, probe_positions):
        """Translate spans to opcodes, merging contiguous same-tag padding
        runs into verified identity blocks."""
        out = []
        i = 0
        while i < len(spans):
            s = spans[i]
            if s.tag is not None and s.tag.startswith("pad"):
                j = i + 1
                while (j < len(spans) and spans[j].tag == s.tag
                       and spans[j].start == spans[j - 1].end
                       and spans[j].start not in probe_positions):
                    j += 1
                run = gates[s.start:spans[j - 1].end]
                if not _run_is_identity(run):
                    raise CircuitError(
                        f"padding run tagged {s.tag!r} is not an identity")
                out.append((_S_IDENT, s.start, spans[j - 1].end, ()))
                i = j
            else:
                out.append((_SPAN_CODE[s.kind], s.start, s.end, s.qubits))
                i += 1
        return out


class _Prepared:
    """Noiseless pass artifacts: snapshots, cached probe values, and the
    measurement marginal used by error-free trajectories."""

    def __init__(self, tape: _Tape):
        self.tape = tape
        ns = tape.sp_kind.shape[0]
        stride = max(1, ns // _SNAPSHOT_TARGET)
        no_sites = np.empty(0, np.int64)
        state = np.zeros(1 << tape.nq, np.complex128)
        state[0] = 1.0
        self.probe_cache = np.zeros(len(tape.probe_labels), np.float64)
        self.snap_spans = []
        self.snap_states = []
        s = 0
        while s < ns:
            self.snap_spans.append(s)
            self.snap_states.append(state.copy())
            nxt = min(ns, s + stride)
            _walk(state, tape.sp_kind, tape.sp_start, tape.sp_end,
                  tape.sp_q0, tape.sp_q1, tape.sp_q2, tape.sp_mask,
                  tape.nk, tape.ng0, tape.ng1, tape.nang, tape.n2q,
                  no_sites, no_sites,
                  tape.probe_pos, tape.probe_mask, tape.probe_want,
                  self.probe_cache, s, nxt, tape.n_native)
            s = nxt
        if ns == 0:
            # still record end-of-stream probes on the initial state
            _walk(state, tape.sp_kind, tape.sp_start, tape.sp_end,
                  tape.sp_q0, tape.sp_q1, tape.sp_q2, tape.sp_mask,
                  tape.nk, tape.ng0, tape.ng1, tape.nang, tape.n2q,
                  no_sites, no_sites,
                  tape.probe_pos, tape.probe_mask, tape.probe_want,
                  self.probe_cache, 0, 0, tape.n_native)
        self.marg0 = np.zeros(1 << tape.n_meas, np.float64)
        _k_marginal(state, tape.meas_wires, self.marg0)
        self.cum0 = np.cumsum(self.marg0)


# ------------------------------------------------------- trajectory draws

def _traj_rng(seed: int, t: int) -> np.random.Generator:
    # Counter-based split: trajectory t owns the stream keyed seed XOR t.
    # Consequence: two master seeds that differ only inside the range of
    # trajectory indices share a stream family, so order-insensitive
    # aggregates can coincide. Callers that need unrelated runs should
    # pick seeds differing in high bits (the sweep harness mixes row
    # seeds through a 64-bit multiply for exactly this reason).
    return np.random.Generator(np.random.Philox(key=(seed & 0xFFFFFFFFFFFFFFFF) ^ t))


def _draw_errors(rng, perr, n2q):
    u = rng.random(perr.shape[0])
    sites = np.nonzero(u < perr)[0]
    codes = np.empty(sites.shape[0], np.int64)
    for j, s in enumerate(sites):
        codes[j] = rng.integers(1, 16) if n2q[s] else rng.integers(1, 4)
    return sites, codes


def _pick_outcome(cum, um: float) -> int:
    return min(int(np.searchsorted(cum, um, side="right")), cum.shape[0] - 1)


# ------------------------------------------------------------- sampling

def _as_tape_parts(circuit):
    if isinstance(circuit, LoweredCircuit):
        return circuit.circuit, circuit.spans
    if isinstance(circuit, Circuit):
        spans = []
        for i, g in enumerate(circuit.gates):
            kind = "2q" if g.kind == "CX" else "1q"
            spans.append(Span(kind, i, i + 1, g.qubits, g.tag))
        return circuit, tuple(spans)
    raise ConfigurationError(
        f"expected a Circuit or LoweredCircuit, got {type(circuit).__name__}")


def _run_chunk(prep: _Prepared, noise: NoiseConfig, t0: int, t1: int):
    tape = prep.tape
    ns = tape.sp_kind.shape[0]
    hist = np.zeros(1 << tape.n_meas, np.int64)
    probe_sum = np.zeros(len(tape.probe_labels), np.float64)
    probe_val = np.empty_like(probe_sum)
    state = np.empty(1 << tape.nq, np.complex128)
    marg = np.empty(1 << tape.n_meas, np.float64)
    error_shots = 0
    for t in range(t0, t1):
        rng = _traj_rng(noise.seed, t)
        sites, codes = _draw_errors(rng, tape.perr, tape.n2q)
        um = rng.random()
        ro = rng.random(tape.n_meas)
        if sites.shape[0] == 0:
            out = _pick_outcome(prep.cum0, um)
            probe_sum += prep.probe_cache
        else:
            error_shots += 1
            first_span = int(np.searchsorted(
                tape.sp_start, sites[0], side="right")) - 1
            si = 0
            while (si + 1 < len(prep.snap_spans)
                   and prep.snap_spans[si + 1] <= first_span):
                si += 1
            np.copyto(state, prep.snap_states[si])
            np.copyto(probe_val, prep.probe_cache)
            _walk(state, tape.sp_kind, tape.sp_start, tape.sp_end,
                  tape.sp_q0, tape.sp_q1, tape.sp_q2, tape.sp_mask,
                  tape.nk, tape.ng0, tape.ng1, tape.nang, tape.n2q,
                  sites, codes,
                  tape.probe_pos, tape.probe_mask, tape.probe_want,
                  probe_val, prep.snap_spans[si], ns, tape.n_native)
            _k_marginal(state, tape.meas_wires, marg)
            out = _pick_outcome(np.cumsum(marg), um)
            probe_sum += probe_val
        for j in range(tape.n_meas):
            if ro[j] < noise.p_ro:
                out ^= 1 << j
        hist[out] += 1
    return hist, probe_sum, error_shots


def sample_shots(circuit, noise: NoiseConfig, threads: int = 1) -> SampleResult:
    """Sample measurement shots and trajectory-averaged probe values."""
    if noise.seed is None:
        raise ConfigurationError("noise sampling requires an explicit seed")
    if noise.shots == 0:
        raise ConfigurationError("shots must be positive")
    if threads < 1:
        raise ConfigurationError(f"threads must be >= 1, got {threads}")
    circ, spans = _as_tape_parts(circuit)
    tape = _Tape(circ, spans, noise.p1, noise.p2)
    prep = _Prepared(tape)

    bounds = [(t0, min(t0 + _CHUNK, noise.shots))
              for t0 in range(0, noise.shots, _CHUNK)]
    if threads == 1:
        parts = [_run_chunk(prep, noise, t0, t1) for t0, t1 in bounds]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(
                lambda b: _run_chunk(prep, noise, b[0], b[1]), bounds))

    hist = np.zeros(1 << tape.n_meas, np.int64)
    probe_sum = np.zeros(len(tape.probe_labels), np.float64)
    error_shots = 0
    for h, p, e in parts:
        hist += h
        probe_sum += p
        error_shots += e

    histogram = {format(idx, f"0{tape.n_meas}b"): int(hist[idx])
                 for idx in range(1 << tape.n_meas)}
    probe_means = {lbl: float(probe_sum[j] / noise.shots)
                   for j, lbl in enumerate(tape.probe_labels)}
    return SampleResult(histogram=histogram, probe_means=probe_means,
                        shots=noise.shots, error_shots=error_shots)


# ---------------------------------------------------- reference sampling

def reference_sample(circuit, noise: NoiseConfig) -> SampleResult:
    """Gate-by-gate NumPy mirror of sample_shots. Same streams, same draw
    order, no span machinery; used to cross-check the fast path."""
    from .engine import apply_gate, init_state, probability
    from .gates import Gate

    if noise.seed is None:
        raise ConfigurationError("noise sampling requires an explicit seed")
    if noise.shots == 0:
        raise ConfigurationError("shots must be positive")
    circ, _ = _as_tape_parts(circuit)
    for g in circ.gates:
        if g.kind not in NATIVE_KINDS:
            raise CircuitError(
                f"noise sampling needs a lowered circuit; found {g.kind} "
                f"on qubits {g.qubits}")
    if not circ.measurements:
        raise ConfigurationError("circuit declares no measurements to sample")
    n2q = np.array([g.kind == "CX" for g in circ.gates], np.bool_)
    perr = np.where(n2q, noise.p2, noise.p1)
    probes = sorted(circ.probes, key=lambda p: p.position)
    by_pos: dict = {}
    for j, p in enumerate(probes):
        by_pos.setdefault(p.position, []).append(j)
    meas = circ.measurements
    n_meas = len(meas)

    def pauli(state, q, code):
        # RZ(pi) is Z up to a global -i; the -1 below makes code 2 exactly Y
        if code in (2, 3):
            state = apply_gate(state, Gate("RZ", (q,), param=math.pi))
        if code in (1, 2):
            state = apply_gate(state, Gate("X", (q,)))
        if code == 2:
            state.amplitudes *= -1.0
        return state

    hist = np.zeros(1 << n_meas, np.int64)
    probe_sum = np.zeros(len(probes), np.float64)
    error_shots = 0
    for t in range(noise.shots):
        rng = _traj_rng(noise.seed, t)
        sites, codes = _draw_errors(rng, perr, n2q)
        um = rng.random()
        ro = rng.random(n_meas)
        if sites.shape[0]:
            error_shots += 1
        state = init_state(circ.num_qubits)
        probe_val = np.zeros(len(probes), np.float64)
        esi = 0
        for i, g in enumerate(circ.gates):
            for j in by_pos.get(i, ()):
                probe_val[j] = probability(state, probes[j].query)
            state = apply_gate(state, g)
            while esi < sites.shape[0] and sites[esi] == i:
                c = codes[esi]
                if n2q[i]:
                    if c & 3:
                        state = pauli(state, g.qubits[0], c & 3)
                    if c >> 2:
                        state = pauli(state, g.qubits[1], c >> 2)
                else:
                    state = pauli(state, g.qubits[0], c)
                esi += 1
        for j in by_pos.get(len(circ.gates), ()):
            probe_val[j] = probability(state, probes[j].query)
        probe_sum += probe_val

        marg = np.zeros(1 << n_meas, np.float64)
        _k_marginal(state.amplitudes, np.array([w for w, _ in meas], np.int64),
                    marg)
        out = _pick_outcome(np.cumsum(marg), um)
        for j in range(n_meas):
            if ro[j] < noise.p_ro:
                out ^= 1 << j
        hist[out] += 1

    histogram = {format(idx, f"0{n_meas}b"): int(hist[idx])
                 for idx in range(1 << n_meas)}
    probe_means = {p.label: float(probe_sum[j] / noise.shots)
                   for j, p in enumerate(probes)}
    return SampleResult(histogram=histogram, probe_means=probe_means,
                        shots=noise.shots, error_shots=error_shots)
