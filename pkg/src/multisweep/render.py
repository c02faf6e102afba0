"""PGM and ASCII renderings of dirt maps, partitions, and routes."""

from __future__ import annotations

import math

from .errors import ConsistencyError
from .grid import DirtMap, GridMap
from .partition import Partition
from .routes import dwell_time

_ASCII_RAMP = ".:-=+*%@"  # clean to dirty
_TIME_CHARS = {0.0: ".", 1.0: "1", 1.5: "2", 2.0: "3", 2.5: "4", 3.0: "5"}
_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def _round_half_away(x: float) -> int:
    return math.floor(x + 0.5)  # nonnegative inputs only


def render_dirt_map(dirt_map: DirtMap, fixed_scale: bool = False) -> tuple[str, str]:
    """Render to (PGM P2 text, ASCII art).

    Free pixels are 255 - round(255 * rate / rate_max), so white means clean
    and darker means dirtier; obstacles are 0 in the PGM and '#' in ASCII.
    fixed_scale normalizes against the top dwell bucket (77) instead of the
    map maximum, for cross-map comparison; values beyond the scale clamp.
    """
    grid = dirt_map.grid
    if fixed_scale:
        lam_max = 77.0
    else:
        lam_max = max(dirt_map.rates.values(), default=0.0) or 1.0
    pgm_rows = []
    ascii_rows = []
    for y in range(grid.height):
        prow = []
        arow = []
        for x in range(grid.width):
            if not grid.is_free(x, y):
                prow.append(0)
                arow.append("#")
                continue
            lam = dirt_map.rates[(x, y)]
            pixel = 255 - _round_half_away(255.0 * lam / lam_max)
            prow.append(min(255, max(0, pixel)))
            arow.append(_ASCII_RAMP[min(7, int(8.0 * lam / lam_max))])
        pgm_rows.append(" ".join(map(str, prow)))
        ascii_rows.append("".join(arow))
    pgm = f"P2\n{grid.width} {grid.height}\n255\n" + "\n".join(pgm_rows) + "\n"
    return pgm, "\n".join(ascii_rows) + "\n"


def render_time_map(dirt_map: DirtMap) -> str:
    """ASCII map of per-cell dwell seconds: '.' for 0 s through '5' for 3 s,
    '#' for obstacles."""
    grid = dirt_map.grid
    rows = []
    for y in range(grid.height):
        row = []
        for x in range(grid.width):
            if not grid.is_free(x, y):
                row.append("#")
            else:
                row.append(_TIME_CHARS[dwell_time(dirt_map.rates[(x, y)])])
        rows.append("".join(row))
    return "\n".join(rows) + "\n"


def render_partition_routes(partition: Partition, routes=None, grid: GridMap | None = None) -> str:
    """ASCII overlay: one letter per region, with 'S' and 'E' marking each
    route's start and end ('S' alone when they coincide). Without routes the
    plain region coloring is returned. Cells outside every region render '#'.
    """
    owner = {}
    for reg in partition.regions:
        for c in reg.cells:
            owner[c] = reg
    by_id = {reg.id: reg for reg in partition.regions}
    marks = {}
    for rt in routes or ():
        reg = by_id.get(rt.region_id)
        if reg is None:
            raise ConsistencyError(f"route for unknown region {rt.region_id}")
        if set(rt.cells()) != set(reg.cells):
            raise ConsistencyError(f"route does not match the cells of region {rt.region_id}")
        marks[rt.start] = "S"
        if rt.end != rt.start:
            marks[rt.end] = "E"
    if grid is not None:
        width, height = grid.width, grid.height
    else:
        width = max(x for x, _ in owner) + 1
        height = max(y for _, y in owner) + 1
    rows = []
    for y in range(height):
        row = []
        for x in range(width):
            c = (x, y)
            if c in marks:
                row.append(marks[c])
            elif c in owner:
                row.append(_LETTERS[(owner[c].id - 1) % 26])
            else:
                row.append("#")
        rows.append("".join(row))
    return "\n".join(rows) + "\n"
