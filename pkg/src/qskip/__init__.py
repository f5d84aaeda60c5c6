"""Statevector simulation and benchmarking of a coherent conditional-skip
construction for expensive quantum subroutines."""

from .builders import (ExperimentConfig, SuccessRule, Variant, build_circuit,
                       build_fixed, build_qsg, skip_block,
                       variant_equivalence_check)
from .circuit import Circuit, Probe, RegisterLayout, circuit_from_json, \
    circuit_to_json, run
from .engine import (ProjectorQuery, Statevector, apply_gate,
                     gates_to_unitary, init_state, probability, to_unitary)
from .errors import (CapabilityError, CircuitError, ConfigurationError,
                     LoweringError)
from .gates import Gate, OracleSpec, diffusion, expensive_oracle, \
    phase_oracle, set_flag
from .harness import (SweepConfig, SweepRow, config_from_dict, load_config,
                      rows_to_csv, rows_to_json, run_sweep, verify_suite)
from .metrics import RunMetrics, efficiency, expected_ub, p_succ, summarize
from .noise import NoiseConfig, SampleResult, reference_sample, sample_shots
from .transpile import CostReport, LoweredCircuit, Span, cost, lower

__version__ = "0.1.0"

__all__ = [
    "CapabilityError", "Circuit", "CircuitError", "ConfigurationError",
    "CostReport", "ExperimentConfig", "Gate", "LoweredCircuit",
    "LoweringError", "NoiseConfig", "OracleSpec", "Probe", "ProjectorQuery",
    "RegisterLayout", "RunMetrics", "SampleResult", "Span", "Statevector",
    "SuccessRule", "SweepConfig", "SweepRow", "Variant", "apply_gate",
    "build_circuit", "build_fixed", "build_qsg", "circuit_from_json",
    "circuit_to_json", "config_from_dict", "cost", "diffusion", "efficiency",
    "expected_ub", "expensive_oracle", "gates_to_unitary", "init_state",
    "load_config", "lower", "p_succ", "phase_oracle", "probability",
    "reference_sample", "rows_to_csv", "rows_to_json", "run", "run_sweep",
    "sample_shots", "set_flag", "skip_block", "summarize", "to_unitary",
    "variant_equivalence_check", "verify_suite", "__version__",
]
