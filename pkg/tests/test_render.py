"""PGM/ASCII renders: grayscale mapping, dwell map, and region overlays."""
import pytest

from multisweep import (
    ConsistencyError,
    Partition,
    Region,
    Route,
    load_grid,
    render_dirt_map,
    render_partition_routes,
    render_time_map,
)

from conftest import make_dirt_map


def _pgm_pixels(pgm):
    lines = pgm.strip().split("\n")
    assert lines[0] == "P2"
    assert lines[2] == "255"
    return [[int(v) for v in row.split()] for row in lines[3:]]


# -- render_dirt_map -----------------------------------------------------------


def test_dirt_render_all_clean_is_white():
    pgm, art = render_dirt_map(make_dirt_map([[0.0, 0.0]]))
    assert _pgm_pixels(pgm) == [[255, 255]]
    assert art == "..\n"


def test_dirt_render_max_cell_is_black():
    pgm, art = render_dirt_map(make_dirt_map([[0.0, 60.0]]))
    assert _pgm_pixels(pgm) == [[255, 0]]
    assert art == ".@\n"


def test_dirt_render_half_scale_pixel():
    # rounding is half-away-from-zero: 255 * 0.5 -> 128, pixel 127
    pgm, _ = render_dirt_map(make_dirt_map([[40.0, 80.0]]))
    assert _pgm_pixels(pgm) == [[127, 0]]


def test_dirt_render_obstacles():
    pgm, art = render_dirt_map(make_dirt_map([[10.0, None], [None, 10.0]]))
    assert _pgm_pixels(pgm) == [[0, 0], [0, 0]]
    assert art == "@#\n#@\n"


def test_dirt_render_header_dimensions():
    pgm, _ = render_dirt_map(make_dirt_map([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]))
    assert pgm.split("\n")[1] == "3 2"


def test_dirt_render_fixed_scale_clamps():
    dm = make_dirt_map([[77.0, 154.0, 0.0, 38.5]])
    pgm, art = render_dirt_map(dm, fixed_scale=True)
    assert _pgm_pixels(pgm) == [[0, 0, 255, 127]]
    assert art[0] == "@" and art[1] == "@" and art[2] == "."


def test_dirt_render_ascii_ramp_monotone():
    dm = make_dirt_map([[float(v) for v in range(0, 80, 10)]])
    _, art = render_dirt_map(dm)
    row = art.strip()
    ramp = ".:-=+*%@"
    assert all(ramp.index(a) <= ramp.index(b) for a, b in zip(row, row[1:]))


# -- render_time_map -------------------------------------------------------------


def test_time_map_buckets():
    dm = make_dirt_map([[0.0, 13.0, 27.0, 40.0, 52.0, 65.0, None]])
    assert render_time_map(dm) == ".12345#\n"


# -- render_partition_routes ------------------------------------------------------


def test_overlay_singleton_start_only():
    part = Partition((Region(1, ((0, 0),), 5.0, "exact"),), 5.0, 5.0)
    rt = Route(1, (((0, 0), 1.0),), 0)
    assert render_partition_routes(part, [rt]) == "S\n"


def test_overlay_two_regions_with_markers():
    part = Partition(
        (
            Region(1, ((0, 0), (0, 1)), 8.0, "exact"),
            Region(2, ((1, 1), (1, 0)), 8.0, "exact"),
        ),
        8.0,
        16.0,
    )
    routes = [
        Route(1, (((0, 0), 0.0), ((0, 1), 0.0)), 1),
        Route(2, (((1, 1), 0.0), ((1, 0), 0.0)), 1),
    ]
    # region 1 sweeps top to bottom, region 2 bottom to top
    assert render_partition_routes(part, routes) == "SE\nES\n"


def test_overlay_without_routes_letters_only():
    part = Partition(
        (
            Region(1, ((0, 0), (0, 1)), 8.0, "exact"),
            Region(2, ((1, 1), (1, 0)), 8.0, "exact"),
        ),
        8.0,
        16.0,
    )
    assert render_partition_routes(part) == "ab\nab\n"


def test_overlay_marks_cells_outside_regions():
    grid = load_grid("..\n.#")
    part = Partition(
        (
            Region(1, ((0, 0), (1, 0)), 2.0, "over"),
            Region(2, ((0, 1),), 1.0, "under"),
        ),
        1.0,
        3.0,
    )
    assert render_partition_routes(part, None, grid) == "aa\nb#\n"


def test_overlay_rejects_route_for_unknown_region():
    part = Partition((Region(1, ((0, 0),), 1.0, "exact"),), 1.0, 1.0)
    rt = Route(9, (((0, 0), 0.0),), 0)
    with pytest.raises(ConsistencyError):
        render_partition_routes(part, [rt])


def test_overlay_rejects_route_cell_mismatch():
    part = Partition((Region(1, ((0, 0), (1, 0)), 2.0, "exact"),), 2.0, 2.0)
    rt = Route(1, (((0, 0), 0.0),), 0)
    with pytest.raises(ConsistencyError):
        render_partition_routes(part, [rt])


def test_overlay_region_letters_cycle():
    regions = tuple(Region(i + 1, ((i, 0),), 1.0, "exact") for i in range(28))
    part = Partition(regions, 1.0, 28.0)
    row = render_partition_routes(part).strip()
    assert row[0] == "a" and row[25] == "z" and row[26] == "a" and row[27] == "b"
