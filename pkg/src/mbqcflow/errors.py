"""Exceptions shared across the package."""


class BudgetExceededError(RuntimeError):
    """A brute-force search would exceed its configured budget."""


class DeterminismError(RuntimeError):
    """A pattern expected to be deterministic produced inconsistent branches."""


class FlowConsistencyError(RuntimeError):
    """A flow-derived structure (wires, layers) contradicts its own guarantees."""


class SimulationInvariantError(RuntimeError):
    """An internal invariant of the symbolic simulation was violated."""
