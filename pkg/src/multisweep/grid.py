"""Environment grid, cleaning-pass histories, and the expected-dirt map.

Dirt accumulation per cell is modeled as a homogeneous Poisson process.
Given passes over a cell at times t_1 < ... < t_n with dirt readings k_i,
the expected dirt collected over a prediction horizon [s, t] is

    (t - s) / (t_n - t_0) * sum(k_i)

where t_0 is the epoch of the history (start of observation). The
denominator is the telescoped sum of the inter-pass gaps t_i - t_{i-1}.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

from .errors import (
    ConsistencyError,
    DomainError,
    GridParseError,
    InsufficientDataError,
    IntervalError,
    LogParseError,
    PassOrderError,
)

Coord = tuple[int, int]

FREE = "."
OBSTACLE = "#"


@dataclass(frozen=True)
class GridMap:
    """Occupancy grid of square cells.

    cells holds one string per row (y = 0 first); '.' marks a free cell and
    '#' an obstacle. cell_size is metadata only (meters per cell edge).
    """

    width: int
    height: int
    cells: tuple[str, ...]
    cell_size: float = 1.0

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise GridParseError("grid must be at least 1x1")
        if len(self.cells) != self.height or any(len(r) != self.width for r in self.cells):
            raise GridParseError("cell rows do not match width x height")

    def in_bounds(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height

    def is_free(self, x: int, y: int) -> bool:
        return self.in_bounds(x, y) and self.cells[y][x] == FREE

    def free_cells(self) -> list[Coord]:
        """All free coordinates in row-major order."""
        return [
            (x, y)
            for y in range(self.height)
            for x in range(self.width)
            if self.cells[y][x] == FREE
        ]


def load_grid(text: str) -> GridMap:
    """Parse a grid file: an optional "cellsize <meters>" header line followed
    by equal-length rows of '.' (free) and '#' (obstacle)."""
    lines = text.splitlines()
    cell_size = 1.0
    if lines and lines[0].startswith("cellsize"):
        parts = lines[0].split()
        try:
            if len(parts) != 2:
                raise ValueError
            cell_size = float(parts[1])
        except ValueError:
            raise GridParseError(f"bad cellsize header: {lines[0]!r}") from None
        if cell_size <= 0:
            raise GridParseError("cellsize must be positive")
        lines = lines[1:]
    while lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise GridParseError("empty grid")
    width = len(lines[0])
    for i, row in enumerate(lines, 1):
        if len(row) != width:
            raise GridParseError(f"ragged row {i}")
        for j, ch in enumerate(row, 1):
            if ch not in (FREE, OBSTACLE):
                raise GridParseError(f"unknown character {ch!r} at row {i}, column {j}")
    return GridMap(width, len(lines), tuple(lines), cell_size)


def render_grid(grid: GridMap) -> str:
    """Inverse of load_grid. The cellsize header is emitted only when it is
    not the default 1.0."""
    lines = []
    if grid.cell_size != 1.0:
        lines.append(f"cellsize {grid.cell_size}")
    lines.extend(grid.cells)
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CellHistory:
    """Cleaning-pass log for one cell: the epoch t_0 plus (t_i, k_i) pairs.

    Pass times are strictly increasing and never precede the epoch; dirt
    readings are nonnegative.
    """

    cell: Coord
    epoch: float = 0.0
    passes: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        last = self.epoch
        strict = False  # the first pass may coincide with the epoch
        for t, k in self.passes:
            if k < 0:
                raise DomainError(f"cell {self.cell}: negative dirt reading {k} at t={t}")
            if t < last or (strict and t == last):
                raise PassOrderError(f"cell {self.cell}: pass time {t} not after {last}")
            last, strict = t, True


def record_pass(history: CellHistory, t: float, k: float) -> CellHistory:
    """Return a copy of history with the pass (t, k) appended."""
    return CellHistory(history.cell, history.epoch, history.passes + ((float(t), float(k)),))


def estimate_cell_rate(history: CellHistory, s: float, t: float) -> float:
    """Expected dirt accumulated over [s, t] under the homogeneous Poisson
    model; s is the latest cleaning time, t the prediction end."""
    if s > t:
        raise IntervalError(f"horizon start {s} after end {t}")
    if not history.passes:
        raise InsufficientDataError(f"cell {history.cell}: no passes recorded")
    t_n = history.passes[-1][0]
    span = t_n - history.epoch  # telescoped sum of (t_i - t_{i-1})
    if span <= 0:
        raise InsufficientDataError(f"cell {history.cell}: zero observation span")
    total = math.fsum(k for _, k in history.passes)
    return (t - s) / span * total


@dataclass(frozen=True)
class DirtMap:
    """Per-free-cell expected dirt level over a horizon [s, t].

    rates maps each free coordinate to its dirt level; obstacle cells carry
    none. insufficient flags the cells whose rate defaulted to 0 for lack of
    usable history.
    """

    grid: GridMap
    horizon: tuple[float, float]
    rates: dict[Coord, float]
    lambda_total: float
    insufficient: frozenset[Coord] = frozenset()


def build_dirt_map(
    grid: GridMap,
    histories: dict[Coord, CellHistory],
    s: float,
    t: float,
) -> DirtMap:
    """Estimate every free cell's dirt level over [s, t].

    Cells with no usable history (no passes, or zero observation span) get a
    rate of 0 and are flagged in the insufficient set. A history keyed on a
    non-free cell is a consistency error.
    """
    if s > t:
        raise IntervalError(f"horizon start {s} after end {t}")
    for cell in histories:
        if not grid.is_free(*cell):
            raise ConsistencyError(f"history supplied for non-free cell {cell}")
    rates: dict[Coord, float] = {}
    insufficient = set()
    for cell in grid.free_cells():
        history = histories.get(cell)
        if history is None:
            history = CellHistory(cell)
        try:
            rates[cell] = estimate_cell_rate(history, s, t)
        except InsufficientDataError:
            rates[cell] = 0.0
            insufficient.add(cell)
    total = math.fsum(rates.values())
    return DirtMap(grid, (float(s), float(t)), rates, total, frozenset(insufficient))


def total_dirt(dirt_map: DirtMap) -> float:
    """Sum of dirt levels over all free cells (equals dirt_map.lambda_total)."""
    return math.fsum(dirt_map.rates.values())


def load_pass_log(text: str, epoch: float = 0.0) -> dict[Coord, CellHistory]:
    """Parse a pass-log CSV with header x,y,t,k into per-cell histories.

    Rows may arrive in any order; they are sorted per cell by timestamp.
    Duplicate timestamps for one cell are rejected. All histories share the
    given epoch.
    """
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != ["x", "y", "t", "k"]:
        raise LogParseError("expected CSV header x,y,t,k")
    by_cell: dict[Coord, list[tuple[float, float]]] = {}
    for lineno, row in enumerate(reader, 2):
        if not row:
            continue
        if len(row) != 4:
            raise LogParseError(f"line {lineno}: expected 4 fields, got {len(row)}")
        try:
            cell = (int(row[0]), int(row[1]))
            entry = (float(row[2]), float(row[3]))
        except ValueError as e:
            raise LogParseError(f"line {lineno}: {e}") from None
        by_cell.setdefault(cell, []).append(entry)
    histories = {}
    for cell in sorted(by_cell):
        passes = sorted(by_cell[cell], key=lambda p: p[0])
        for (t1, _), (t2, _) in zip(passes, passes[1:]):
            if t1 == t2:
                raise LogParseError(f"cell {cell}: duplicate pass time {t1}")
        try:
            histories[cell] = CellHistory(cell, epoch, tuple(passes))
        except (PassOrderError, DomainError) as e:
            raise LogParseError(str(e)) from None
    return histories
