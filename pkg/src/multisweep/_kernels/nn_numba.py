"""Numba loop kernel for the nearest-neighbor branch engine.

Must stay behaviorally identical to nn_numpy.complete_from_start; the test
suite asserts byte-equal outputs across both lanes.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_BIG = np.int64(1) << 60


@njit(cache=True)
def _run(D, start, cap):
    n = D.shape[0]
    orders = np.full((1, n), -1, dtype=np.int32)
    orders[0, 0] = start
    visited = np.zeros((1, n), dtype=np.bool_)
    visited[0, start] = True
    dists = np.zeros(1, dtype=np.int64)
    cur = np.empty(1, dtype=np.int64)
    cur[0] = start
    overflow = False

    for step in range(1, n):
        b_count = orders.shape[0]
        mins = np.empty(b_count, dtype=np.int64)
        counts = np.empty(b_count, dtype=np.int64)
        for b in range(b_count):
            row = D[cur[b]]
            m = _BIG
            for j in range(n):
                if not visited[b, j] and row[j] < m:
                    m = row[j]
            c = 0
            for j in range(n):
                if not visited[b, j] and row[j] == m:
                    c += 1
            mins[b] = m
            counts[b] = c
        total = 0
        for b in range(b_count):
            total += counts[b]
        if total <= cap:
            new_orders = np.empty((total, n), dtype=np.int32)
            new_visited = np.empty((total, n), dtype=np.bool_)
            new_dists = np.empty(total, dtype=np.int64)
            new_cur = np.empty(total, dtype=np.int64)
            w = 0
            for b in range(b_count):
                row = D[cur[b]]
                for j in range(n):
                    if not visited[b, j] and row[j] == mins[b]:
                        new_orders[w] = orders[b]
                        new_visited[w] = visited[b]
                        new_orders[w, step] = j
                        new_visited[w, j] = True
                        new_dists[w] = dists[b] + mins[b]
                        new_cur[w] = j
                        w += 1
            orders = new_orders
            visited = new_visited
            dists = new_dists
            cur = new_cur
        else:
            overflow = True
            for b in range(b_count):
                row = D[cur[b]]
                pick = -1
                for j in range(n):
                    if not visited[b, j] and row[j] == mins[b]:
                        pick = j
                        break
                orders[b, step] = pick
                visited[b, pick] = True
                dists[b] += mins[b]
                cur[b] = pick

    return dists, orders, overflow


def complete_from_start(D: np.ndarray, start: int, cap: int):
    """Numba-compiled twin of nn_numpy.complete_from_start."""
    dists, orders, overflow = _run(D, np.int64(start), np.int64(cap))
    return dists, orders, bool(overflow)
