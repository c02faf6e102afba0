"""Dirt-aware multi-robot floor cleaning.

Estimates per-cell dirt rates from cleaning-pass logs, splits the map into
dirt-balanced connected regions for a robot team, plans per-region visit
orders with dirt-proportional dwell times, and simulates team versus
single-robot execution.
"""

from .config import RunConfig, load_config, parse_config
from .errors import (
    ArtifactError,
    BranchOverflowError,
    ConfigError,
    ConsistencyError,
    DegenerateScenarioError,
    DomainError,
    ExhaustedGraphError,
    GridParseError,
    InfeasibleError,
    InsufficientDataError,
    IntervalError,
    LogParseError,
    MultisweepError,
    PartitionFailureError,
    PassOrderError,
    StageError,
    TopologyError,
)
from .grid import (
    CellHistory,
    DirtMap,
    GridMap,
    build_dirt_map,
    estimate_cell_rate,
    load_grid,
    load_pass_log,
    record_pass,
    render_grid,
    total_dirt,
)
from .partition import (
    CellVertex,
    Partition,
    Region,
    ValidationReport,
    partition,
    select_start_vertex,
    validate_partition,
)
from .pipeline import run_pipeline, run_stage
from .render import render_dirt_map, render_partition_routes, render_time_map
from .routes import (
    Route,
    annotate_route,
    cell_distance,
    dwell_time,
    plan_route,
    plan_route_from,
)
from .sim import (
    ComparisonReport,
    DirtField,
    RobotStats,
    SimParams,
    SimReport,
    boustrophedon_order,
    compare,
    sample_dirt_field,
    simulate_baseline,
    simulate_team,
)

__version__ = "0.1.0"
