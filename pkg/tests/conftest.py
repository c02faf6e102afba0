"""Shared fixtures: dirt-map builders, random connected blobs, and a
brute-force open-path oracle for small routing instances."""
import itertools
import math
import pathlib

import numpy as np
import pytest

from multisweep import DirtMap, GridMap

SCENARIO_DIR = pathlib.Path(__file__).resolve().parent.parent / "scenarios" / "reference"


def make_dirt_map(rows):
    """Build a DirtMap from a nested list of rates; None marks an obstacle."""
    height = len(rows)
    width = len(rows[0])
    lines = []
    rates = {}
    for y, row in enumerate(rows):
        assert len(row) == width
        chars = []
        for x, lam in enumerate(row):
            if lam is None:
                chars.append("#")
            else:
                chars.append(".")
                rates[(x, y)] = float(lam)
        lines.append("".join(chars))
    grid = GridMap(width, height, tuple(lines))
    return DirtMap(grid, (0.0, 1.0), rates, math.fsum(rates.values()))


def random_blob(rng, n, w=30, h=30):
    """Grow a random 4-connected blob of n cells inside a w x h board."""
    start = (int(rng.integers(0, w)), int(rng.integers(0, h)))
    blob = {start}
    frontier = [start]
    while len(blob) < n:
        cx, cy = frontier[rng.integers(0, len(frontier))]
        options = [
            (cx + dx, cy + dy)
            for dx, dy in ((0, 1), (0, -1), (1, 0), (-1, 0))
            if 0 <= cx + dx < w and 0 <= cy + dy < h and (cx + dx, cy + dy) not in blob
        ]
        if not options:
            frontier.remove((cx, cy))
            continue
        cell = options[rng.integers(0, len(options))]
        blob.add(cell)
        frontier.append(cell)
    return blob


def blob_dirt_map(rng, n, w=30, h=30, max_rate=77.0):
    blob = random_blob(rng, n, w, h)
    xs = [c[0] for c in blob]
    ys = [c[1] for c in blob]
    x0, y0 = min(xs), min(ys)
    width = max(xs) - x0 + 1
    height = max(ys) - y0 + 1
    rows = [[None] * width for _ in range(height)]
    for x, y in blob:
        rows[y - y0][x - x0] = float(rng.uniform(0.0, max_rate))
    return make_dirt_map(rows)


def connected_r_partitions(cells, r):
    """Yield every partition of cells into r connected non-empty parts, each
    part a bitmask over sorted(cells)."""
    cells = sorted(cells)
    index = {c: i for i, c in enumerate(cells)}
    n = len(cells)
    adj = [0] * n
    for i, (x, y) in enumerate(cells):
        for nb in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            j = index.get(nb)
            if j is not None:
                adj[i] |= 1 << j

    def connected(mask):
        low = mask & -mask
        seen = low
        stack = [low.bit_length() - 1]
        while stack:
            i = stack.pop()
            new = adj[i] & mask & ~seen
            while new:
                b = new & -new
                seen |= b
                stack.append(b.bit_length() - 1)
                new &= ~b
        return seen == mask

    def rec(remaining, k):
        if k == 1:
            if connected(remaining):
                yield [remaining]
            return
        # enumerate the part holding the lowest remaining cell, recurse on the rest
        low = remaining & -remaining
        rest = remaining & ~low
        s = rest
        while True:
            part = low | s
            rem2 = remaining & ~part
            if rem2 and connected(part):
                for tail in rec(rem2, k - 1):
                    yield [part] + tail
            if s == 0:
                break
            s = (s - 1) & rest

    yield from rec((1 << n) - 1, r)


def optimum_deviation(dm, r):
    """Brute-force minimum over all connected r-partitions of the worst
    per-region deviation from the balanced target."""
    cells = sorted(dm.rates)
    rates = [dm.rates[c] for c in cells]
    lam_s = dm.lambda_total / r
    best = math.inf
    for parts in connected_r_partitions(cells, r):
        dev = max(
            abs(math.fsum(rates[i] for i in range(len(cells)) if m >> i & 1) - lam_s)
            for m in parts
        )
        best = min(best, dev)
    return best


_PERM_CACHE = {}


def _permutations(n):
    if n not in _PERM_CACHE:
        _PERM_CACHE[n] = np.array(list(itertools.permutations(range(n))), dtype=np.intp)
    return _PERM_CACHE[n]


def path_optimum(cities):
    """Exact shortest open Manhattan path over all permutations (n <= 8)."""
    cities = sorted(cities)
    n = len(cities)
    if n == 1:
        return 0
    xs = np.array([c[0] for c in cities], dtype=np.int64)
    ys = np.array([c[1] for c in cities], dtype=np.int64)
    dist = np.abs(xs[:, None] - xs[None, :]) + np.abs(ys[:, None] - ys[None, :])
    perms = _permutations(n)
    lengths = dist[perms[:, :-1], perms[:, 1:]].sum(axis=1)
    return int(lengths.min())


@pytest.fixture(scope="session", autouse=True)
def warm_route_kernel():
    # pay the jit compile/load cost once, outside any timed section
    from multisweep import plan_route

    plan_route([(0, 0), (0, 1), (1, 0)])
