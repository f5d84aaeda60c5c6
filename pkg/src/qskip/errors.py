"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid run configuration (bad field value, missing seed, zero shots)."""


class CircuitError(ValueError):
    """Structurally invalid gate or circuit (bad arity, overlapping wires)."""


class CapabilityError(RuntimeError):
    """Request exceeds a stated capability bound (e.g. dense matrix too large)."""


class LoweringError(RuntimeError):
    """A gate cannot be lowered under the active ancilla policy."""
