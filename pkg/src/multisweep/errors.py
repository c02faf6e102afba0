"""Exception types shared across the package."""


class MultisweepError(Exception):
    """Base class for all multisweep errors."""


class GridParseError(MultisweepError):
    """Malformed grid file: ragged rows, unknown characters, or empty input."""


class LogParseError(MultisweepError):
    """Malformed pass-log CSV."""


class PassOrderError(MultisweepError):
    """Pass timestamps out of order (or duplicated) for one cell."""


class DomainError(MultisweepError):
    """Value outside its legal domain, e.g. a negative dirt reading."""


class IntervalError(MultisweepError):
    """Prediction horizon with start after end."""


class InsufficientDataError(MultisweepError):
    """Cell history cannot support a rate estimate (no passes, or zero span)."""


class ConsistencyError(MultisweepError):
    """Cross-structure mismatch, e.g. a history on an obstacle cell or a route
    referencing cells outside its region."""


class TopologyError(MultisweepError):
    """Free space is disconnected."""


class InfeasibleError(MultisweepError):
    """Robot count incompatible with the map (r < 1 or r > free cells)."""


class ExhaustedGraphError(MultisweepError):
    """No unvisited vertex remains to select."""


class PartitionFailureError(MultisweepError):
    """Backtracking search exhausted or over budget without a valid partition."""


class BranchOverflowError(MultisweepError):
    """Route branching exceeded the configured cap in strict mode."""


class DegenerateScenarioError(MultisweepError):
    """Comparison against a zero-makespan baseline."""


class ConfigError(MultisweepError):
    """Invalid, missing, or unknown configuration."""


class ArtifactError(MultisweepError):
    """Missing or malformed pipeline artifact on disk."""


class StageError(MultisweepError):
    """A pipeline stage failed; wraps the underlying error with the stage name."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage}: {cause}")
        self.stage = stage
        self.cause = cause
