"""Vectorized numpy branch engine for the nearest-neighbor planner.

Semantics must match nn_numba.complete_from_start exactly: branches split on
distance ties step by step; when a step would push the live-branch total past
the cap, every branch keeps only its first tied candidate for that step (and
the overflow flag is set). City indices are canonical (lexicographic coord
order), so "first tied" and row-major split order are deterministic.
"""

from __future__ import annotations

import numpy as np

_BIG = np.int64(1) << 60


def complete_from_start(D: np.ndarray, start: int, cap: int):
    """Run every surviving branch from one start to completion.

    Returns (dists, orders, overflow): int64 branch distances, an int32
    (branches, n) visit-order matrix, and whether the cap ever degraded a
    step to first-tied-only.
    """
    n = D.shape[0]
    orders = np.full((1, n), -1, dtype=np.int32)
    orders[0, 0] = start
    visited = np.zeros((1, n), dtype=np.bool_)
    visited[0, start] = True
    dists = np.zeros(1, dtype=np.int64)
    cur = np.array([start], dtype=np.int64)
    overflow = False

    for step in range(1, n):
        d = D[cur].copy()
        d[visited] = _BIG
        mins = d.min(axis=1)
        ties = d == mins[:, None]
        counts = ties.sum(axis=1)
        total = int(counts.sum())
        if total <= cap:
            parent, city = np.nonzero(ties)  # row-major: branch order, then city index
            orders = orders[parent]
            visited = visited[parent]
            dists = dists[parent] + mins[parent]
            rows = np.arange(total)
            orders[rows, step] = city.astype(np.int32)
            visited[rows, city] = True
            cur = city
        else:
            overflow = True
            city = ties.argmax(axis=1)  # first tied candidate per branch
            rows = np.arange(len(city))
            dists = dists + mins
            orders[rows, step] = city.astype(np.int32)
            visited[rows, city] = True
            cur = city

    return dists, orders, overflow
