class ConsistencyError(RuntimeError):
    """Two computations that must agree did not; indicates a bug, not a failed check."""


class WorkBoundError(ValueError):
    """Requested size exceeds a configured work or memory bound."""
