"""Dirt-balanced connected partitioning of the free-cell graph.

Regions are grown one at a time along a serpentine traversal: vertical moves
first (continuing the current direction, then reversing it), horizontal moves
only when no unvisited vertical neighbor exists, with the vertical direction
flipping on every horizontal step. Each region grows until its dirt sum
reaches the per-region target lambda_s = lambda_total / r. Regions that
cannot hit the target exactly alternate between overshooting it (stop at the
first vertex that pushes the sum past the target) and undershooting it
(return that vertex to the pool), starting with an overshoot. The final
region absorbs everything that remains.

When a region's traversal dead-ends it retreats through its own claimed
cells (re-adding no dirt) and continues from the most recently claimed cell
that still has an unvisited neighbor. When a take splits the unvisited pool
into more components than there are regions left to build, the extension
candidates are reordered smallest-component-first, so stranded pockets are
consumed before the sweep moves on. When a close would strand the remaining
cells or a prescribed flag cannot be honored, the search backtracks over
the recorded traversal choices and tries the next candidate. The total
number of take attempts is fenced by a configurable expansion budget.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Iterable

from .errors import (
    ExhaustedGraphError,
    InfeasibleError,
    PartitionFailureError,
    TopologyError,
)
from .grid import Coord, DirtMap, GridMap


@dataclass(frozen=True)
class Region:
    """One robot's cleaning space: cells in traversal (claim) order.

    flag records how the region closed relative to the target: "over"
    (first sum >= target kept), "under" (closing vertex returned to the
    pool, or the pool ran out short of the target), or "exact". declined is
    the vertex an "under" close returned, when there was one.
    """

    id: int
    cells: tuple[Coord, ...]
    lambda_actual: float
    flag: str
    declined: Coord | None = None


@dataclass(frozen=True)
class Partition:
    regions: tuple[Region, ...]
    lambda_s: float
    lambda_total: float

    @property
    def overshoot_log(self) -> tuple[str, ...]:
        return tuple(r.flag for r in self.regions)


class CellVertex:
    """Traversal node: coordinate, dirt level, visited flag, live neighbors."""

    __slots__ = ("coord", "rate", "visited", "neighbors")

    def __init__(self, coord: Coord, rate: float):
        self.coord = coord
        self.rate = rate
        self.visited = False
        self.neighbors: list[CellVertex] = []


def _neighbors4(c: Coord):
    x, y = c
    return ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1))


def _component_count(cells: set[Coord]) -> int:
    """Number of 4-connected components of a cell set."""
    seen: set[Coord] = set()
    count = 0
    for c in cells:
        if c in seen:
            continue
        count += 1
        stack = [c]
        seen.add(c)
        while stack:
            cur = stack.pop()
            for n in _neighbors4(cur):
                if n in cells and n not in seen:
                    seen.add(n)
                    stack.append(n)
    return count


def _start_key(cell: Coord, pool: set[Coord]):
    """Sort key for start selection: fewest edges first, then the corner
    closest to the top-left (smallest x + y, then y, then x)."""
    x, y = cell
    degree = sum(1 for n in _neighbors4(cell) if n in pool)
    return (degree, x + y, y, x)


def select_start_vertex(cells: Iterable[Coord]) -> Coord:
    """Pick the starting vertex among unvisited cells: minimum degree within
    the given set, ties resolved toward the top-left corner."""
    pool = set(cells)
    if not pool:
        raise ExhaustedGraphError("no unvisited vertex remains")
    return min(pool, key=lambda c: _start_key(c, pool))


class _Search:
    """Backtracking state for one partition run.

    Every take attempt counts against the expansion budget. State mutated on
    a take is restored on failure by snapshot, so backtracking is exact.
    """

    def __init__(self, rates: dict[Coord, float], r: int, lambda_s: float, budget: int):
        self.rates = rates
        self.r = r
        self.lambda_s = lambda_s
        self.budget = budget
        self.expansions = 0
        self.unvisited: set[Coord] = set(rates)
        self.n_comps = _component_count(self.unvisited)
        self.pool_mass = math.fsum(self.rates.values())
        self.stall_at = float("inf")
        self.regions: list[Region] = []
        self.closed_vdirs: list[int] = []
        self.next_flag = "over"
        # current region in progress
        self.order: list[Coord] = []
        self.lam = 0.0
        self.vdir = 1  # +1 = down (y increasing), -1 = up

    def solve(self) -> bool:
        return self._open_region(1)

    # -- region lifecycle -------------------------------------------------

    def _open_region(self, k: int) -> bool:
        # each start gets a bounded expansion window (smaller for later
        # regions, capped by the enclosing window) so one barren subtree
        # cannot starve the other start candidates of search effort
        final = k == self.r
        outer = self.stall_at
        window = max(1000, min(self.budget >> (2 * k), 50 * len(self.unvisited)))
        for cell, vd in self._start_candidates():
            self.stall_at = min(outer, self.expansions + window)
            if self._take(k, cell, vd, final):
                return True
        self.stall_at = outer
        return False

    def _start_candidates(self) -> list[tuple[Coord, int]]:
        """Starts for the next region: first the cells the previous region's
        traversal would reach next (continuation), then all remaining cells
        ordered by the start-selection key."""
        cands: list[tuple[Coord, int]] = []
        taken: set[Coord] = set()
        if self.regions:
            lx, ly = self.regions[-1].cells[-1]
            vd = self.closed_vdirs[-1]
            for nx, ny, nvd in (
                (lx, ly + vd, vd),
                (lx, ly - vd, -vd),
                (lx + 1, ly, -vd),
                (lx - 1, ly, -vd),
            ):
                if (nx, ny) in self.unvisited:
                    cands.append(((nx, ny), nvd))
                    taken.add((nx, ny))
        pool = self.unvisited
        rest = sorted((c for c in pool if c not in taken), key=lambda c: _start_key(c, pool))
        cands.extend((c, 1) for c in rest)
        return cands

    def _close(self, k: int, flag: str, declined: Coord | None) -> bool:
        """Record the current region and recurse into the next one; undo and
        return False when nothing downstream completes."""
        remaining = self.r - k
        if len(self.unvisited) < remaining:
            return False
        if k == self.r and self.unvisited:
            return False
        if remaining and self.n_comps > remaining:
            return False
        if remaining >= 2 and self.n_comps == remaining:
            # one region per component, each consuming its component whole: a
            # component lighter than lambda_s can only exhaust ("under"), one
            # within a cell's rate above it can only cross on its final cell
            # ("over"), and anything heavier suits only the exempt final
            # region, so the alternating flags of the non-final regions must
            # be servable by the component masses
            succ = self.next_flag if flag == "exact" else ("over" if flag == "under" else "under")
            need_over = need_under = final_only = 0
            for mass, cell_top in self._component_profiles():
                if mass < self.lambda_s:
                    need_under += 1
                elif mass - cell_top <= self.lambda_s:
                    need_over += 1
                else:
                    final_only += 1
            over_slots = (remaining - 1 + (succ == "over")) // 2
            under_slots = (remaining - 1) - over_slots
            if final_only > 1:
                return False
            if final_only == 1:
                if need_over != over_slots or need_under != under_slots:
                    return False
            elif not (
                (need_over == over_slots and need_under == under_slots + 1)
                or (need_over == over_slots + 1 and need_under == under_slots)
            ):
                return False
        lam_actual = math.fsum(self.rates[c] for c in self.order)
        self.regions.append(Region(k, tuple(self.order), lam_actual, flag, declined))
        self.closed_vdirs.append(self.vdir)
        old_flag = self.next_flag
        if flag != "exact":
            self.next_flag = "over" if flag == "under" else "under"
        saved = (self.order, self.lam)
        self.order, self.lam = [], 0.0

        if k == self.r or self._open_region(k + 1):
            return True

        self.order, self.lam = saved
        self.next_flag = old_flag
        self.closed_vdirs.pop()
        self.regions.pop()
        return False

    # -- traversal --------------------------------------------------------

    def _moves(self, head: Coord) -> list[tuple[Coord, int]]:
        """Unvisited neighbors of head in move priority order, paired with
        the vertical direction each move leads to."""
        x, y = head
        vd = self.vdir
        out = []
        for nx, ny, nvd in (
            (x, y + vd, vd),
            (x, y - vd, -vd),
            (x + 1, y, -vd),
            (x - 1, y, -vd),
        ):
            if (nx, ny) in self.unvisited:
                out.append(((nx, ny), nvd))
        return out

    def _cmp_flag(self) -> str:
        if self.lam == self.lambda_s:
            return "exact"
        return "over" if self.lam > self.lambda_s else "under"

    def _removal_parts(self, cell: Coord) -> int:
        """Connected groups cell's pool-neighbors fall into once cell leaves
        the pool (0 for an isolated cell). Taking a cell changes the pool's
        component count by this value minus one."""
        pool = self.unvisited
        nbrs = [n for n in _neighbors4(cell) if n in pool]
        if len(nbrs) <= 1:
            return len(nbrs)
        # ring shortcut: orthogonal neighbors already linked pairwise through
        # present diagonals stay one group without cell, skipping the flood
        # fill; an incomplete ring proves nothing and falls through
        x, y = cell
        present = ((x, y + 1) in pool, (x + 1, y) in pool, (x, y - 1) in pool, (x - 1, y) in pool)
        diag = ((x + 1, y + 1) in pool, (x + 1, y - 1) in pool, (x - 1, y - 1) in pool, (x - 1, y + 1) in pool)
        root = list(range(4))

        def find(i: int) -> int:
            while root[i] != i:
                i = root[i]
            return i

        for i in range(4):
            j = (i + 1) % 4
            if present[i] and present[j] and diag[i]:
                root[find(j)] = find(i)
        if len({find(i) for i in range(4) if present[i]}) == 1:
            return 1
        remaining = set(nbrs)
        parts = 0
        while remaining:
            parts += 1
            src = remaining.pop()
            if not remaining:
                break
            seen = {src, cell}
            stack = [src]
            while stack and remaining:
                cur = stack.pop()
                for n in _neighbors4(cur):
                    if n in pool and n not in seen:
                        seen.add(n)
                        remaining.discard(n)
                        stack.append(n)
        return parts

    def _splits_hint(self, cell: Coord) -> bool:
        """Cheap sort key: True when taking cell looks like it fragments the
        pool. Exact for ring-connected neighborhoods; the flood fill is
        capped, treating very long detours as splits."""
        pool = self.unvisited
        nbrs = [n for n in _neighbors4(cell) if n in pool]
        if len(nbrs) <= 1:
            return False
        x, y = cell
        present = ((x, y + 1) in pool, (x + 1, y) in pool, (x, y - 1) in pool, (x - 1, y) in pool)
        diag = ((x + 1, y + 1) in pool, (x + 1, y - 1) in pool, (x - 1, y - 1) in pool, (x - 1, y + 1) in pool)
        root = list(range(4))

        def find(i: int) -> int:
            while root[i] != i:
                i = root[i]
            return i

        for i in range(4):
            j = (i + 1) % 4
            if present[i] and present[j] and diag[i]:
                root[find(j)] = find(i)
        if len({find(i) for i in range(4) if present[i]}) == 1:
            return False
        remaining = set(nbrs)
        src = remaining.pop()
        seen = {src, cell}
        stack = [src]
        steps = 0
        while stack and remaining:
            steps += 1
            if steps > 64:
                return True
            cur = stack.pop()
            for n in _neighbors4(cur):
                if n in pool and n not in seen:
                    seen.add(n)
                    remaining.discard(n)
                    stack.append(n)
        return bool(remaining)

    def _component_profiles(self) -> list[tuple[float, float]]:
        """(total dirt rate, largest cell rate) of each pool component."""
        pool = self.unvisited
        profiles: list[tuple[float, float]] = []
        seen: set[Coord] = set()
        for c in pool:
            if c in seen:
                continue
            comp = [c]
            seen.add(c)
            i = 0
            while i < len(comp):
                for n in _neighbors4(comp[i]):
                    if n in pool and n not in seen:
                        seen.add(n)
                        comp.append(n)
                i += 1
            profiles.append(
                (sum(self.rates[m] for m in comp), max(self.rates[m] for m in comp))
            )
        return profiles

    def _doomed(self, k: int) -> bool:
        """True when no close of region k can remain valid. Components never
        touch each other, so the region can only ever absorb the ones already
        adjacent to it: a prescribed "over" is dead when even absorbing all of
        them cannot reach the target, and surplus components (more than the
        later regions may cover) are dead when absorbing the lightest
        admissible set of them whole overshoots the crossing. Under a
        prescribed "under" the crossing vertex goes back to the pool, so the
        absorbed mass must fit strictly below the target; under "over" the
        crossing vertex is kept and may finish the last component, which
        relaxes the bound by one cell's rate."""
        if self.n_comps == 1:
            # whole pool reachable: doomed only when a prescribed crossing
            # is out of reach even after absorbing everything
            return self.next_flag == "over" and self.lam + self.pool_mass < self.lambda_s
        needed = self.n_comps - (self.r - k)
        pool = self.unvisited
        region = set(self.order)
        seen: set[Coord] = set()
        adjacent: list[float] = []
        cell_max = 0.0
        for c in pool:
            if c in seen:
                continue
            comp = [c]
            seen.add(c)
            touches = False
            i = 0
            while i < len(comp):
                for n in _neighbors4(comp[i]):
                    if n in pool:
                        if n not in seen:
                            seen.add(n)
                            comp.append(n)
                    elif not touches and n in region:
                        touches = True
                i += 1
            if touches:
                adjacent.append(sum(self.rates[m] for m in comp))
                cell_max = max(cell_max, max(self.rates[m] for m in comp))
        if self.next_flag == "over" and self.lam + sum(adjacent) < self.lambda_s:
            return True
        if needed <= 0:
            return False
        if len(adjacent) < needed:
            return True
        adjacent.sort()
        mop = sum(adjacent[:needed])
        gap = self.lambda_s - self.lam
        if self.next_flag == "over":
            return mop - cell_max > gap
        return mop > gap

    def _component_sizes(self) -> dict[Coord, int]:
        """Size of each pool cell's 4-connected component."""
        pool = self.unvisited
        size: dict[Coord, int] = {}
        seen: set[Coord] = set()
        for c in pool:
            if c in seen:
                continue
            comp = [c]
            seen.add(c)
            i = 0
            while i < len(comp):
                for n in _neighbors4(comp[i]):
                    if n in pool and n not in seen:
                        seen.add(n)
                        comp.append(n)
                i += 1
            for m in comp:
                size[m] = len(comp)
        return size

    def _extension_candidates(self, k: int) -> list[tuple[Coord, int]]:
        """Reachable fresh cells in recency-then-move-priority order, each
        listed once.

        Two stable reorderings keep the remainder partitionable: takes that
        would split the pool into separate components are demoted behind
        takes that would not, and while the pool already holds more
        components than there are regions left to build (pockets only the
        current region can absorb), the smallest component is served
        first."""
        out: list[tuple[Coord, int]] = []
        seen: set[Coord] = set()
        for i in range(len(self.order) - 1, -1, -1):
            for cell, nvd in self._moves(self.order[i]):
                if cell not in seen:
                    seen.add(cell)
                    out.append((cell, nvd))
        if len(out) > 1:
            pool = self.unvisited

            def degree(c: Coord) -> int:
                return sum(1 for n in _neighbors4(c) if n in pool)

            if self.n_comps > self.r - k:
                size = self._component_sizes()
                out.sort(
                    key=lambda cn: (
                        degree(cn[0]) >= 2,
                        size[cn[0]],
                        self._splits_hint(cn[0]),
                    )
                )
            else:
                out.sort(
                    key=lambda cn: (degree(cn[0]) >= 2, self._splits_hint(cn[0]))
                )
        return out

    def _extend(self, k: int, final: bool) -> bool:
        """Grow the current region by one take; close it when no claimed cell
        has an unvisited neighbor left.

        The traversal continues from the most recently claimed cell with a
        fresh neighbor, passing back through its own cells to get there."""
        cands = self._extension_candidates(k)
        for cell, nvd in cands:
            if self._take(k, cell, nvd, final):
                return True
        if cands:
            # fresh cells existed but no extension completed downstream
            return False
        if final:
            return self._close(k, self._cmp_flag(), None)
        # pool component consumed short of the target
        return self.next_flag == "under" and self._close(k, "under", None)

    def _take(self, k: int, cell: Coord, nvd: int, final: bool) -> bool:
        """Claim cell for region k, resolve any close event, and recurse."""
        self.expansions += 1
        if self.expansions > self.budget:
            raise PartitionFailureError(
                f"expansion budget {self.budget} exhausted with "
                f"{len(self.regions)} of {self.r} regions closed"
            )
        if self.expansions > self.stall_at:
            return False
        old_vdir = self.vdir
        old_lam = self.lam
        dcomp = self._removal_parts(cell) - 1
        self.order.append(cell)
        self.unvisited.discard(cell)
        self.n_comps += dcomp
        self.pool_mass -= self.rates[cell]
        self.lam = old_lam + self.rates[cell]
        self.vdir = nvd

        if final:
            ok = self._extend(k, final)
        elif self.lam == self.lambda_s:
            ok = self._close(k, "exact", None)
        elif self.lam > self.lambda_s:
            if self.next_flag == "over":
                ok = self._close(k, "over", None)
            else:
                # prescribed undershoot: return this vertex to the pool
                self.order.pop()
                self.unvisited.add(cell)
                self.n_comps -= dcomp
                self.pool_mass += self.rates[cell]
                self.lam = old_lam
                self.vdir = old_vdir
                if self.order and self._close(k, "under", cell):
                    return True
                self.order.append(cell)  # re-claim so the shared undo applies
                self.unvisited.discard(cell)
                self.n_comps += dcomp
                self.pool_mass -= self.rates[cell]
                self.lam = old_lam + self.rates[cell]
                self.vdir = nvd
                ok = False
        elif len(self.unvisited) == self.r - k:
            # every later region needs a cell, so this one must stop here
            ok = self.next_flag == "under" and self._close(k, "under", None)
        else:
            fresh = dcomp != 0 or (self.expansions & 7) == 0
            if fresh and self._doomed(k):
                ok = False
            else:
                ok = self._extend(k, final)

        if not ok:
            self.vdir = old_vdir
            self.lam = old_lam
            self.unvisited.add(cell)
            self.n_comps -= dcomp
            self.pool_mass += self.rates[cell]
            self.order.pop()
        return ok


def partition(dirt_map: DirtMap, r: int, *, max_expansions: int = 1_000_000) -> Partition:
    """Divide the free cells into r connected regions balanced around
    lambda_s = lambda_total / r.

    Raises InfeasibleError when r is out of range, TopologyError when the
    free space is disconnected, and PartitionFailureError when the search
    exhausts its alternatives or its expansion budget.
    """
    if r < 1:
        raise InfeasibleError("robot count must be at least 1")
    cells = set(dirt_map.rates)
    if not cells:
        raise InfeasibleError("map has no free cells")
    if r > len(cells):
        raise InfeasibleError(f"{r} robots but only {len(cells)} free cells")
    if _component_count(cells) != 1:
        raise TopologyError("free space is disconnected")

    lambda_total = dirt_map.lambda_total
    lambda_s = lambda_total / r
    search = _Search(dict(dirt_map.rates), r, lambda_s, max_expansions)

    limit = sys.getrecursionlimit()
    needed = 4 * len(cells) + 200
    if limit < needed:
        sys.setrecursionlimit(needed)
    try:
        solved = search.solve()
    finally:
        if limit < needed:
            sys.setrecursionlimit(limit)

    if not solved:
        raise PartitionFailureError(
            f"no valid {r}-region partition found after {search.expansions} expansions"
        )
    result = Partition(tuple(search.regions), lambda_s, lambda_total)
    report = validate_partition(result, dirt_map.grid)
    if not report.ok:
        raise PartitionFailureError(
            "internal validation failed: " + "; ".join(c.name for c in report.checks if not c.passed)
        )
    return result


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    offenders: tuple = ()


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def validate_partition(part: Partition, grid: GridMap) -> ValidationReport:
    """Check coverage, disjointness, per-region 4-connectivity, dirt-sum
    conservation, and flag alternation. Failures are reported, not raised."""
    free = set(grid.free_cells())
    claimed: list[Coord] = []
    for reg in part.regions:
        claimed.extend(reg.cells)
    claimed_set = set(claimed)

    missing = sorted(free - claimed_set)
    extra = sorted(claimed_set - free)
    coverage = CheckResult(
        "coverage",
        not missing and not extra,
        f"{len(missing)} free cells unassigned, {len(extra)} assigned cells not free",
        tuple(missing + extra),
    )

    seen: set[Coord] = set()
    dupes: set[Coord] = set()
    for c in claimed:
        if c in seen:
            dupes.add(c)
        seen.add(c)
    disjoint = CheckResult(
        "disjoint", not dupes, f"{len(dupes)} cells in more than one region", tuple(sorted(dupes))
    )

    broken: list[Coord] = []
    broken_ids = []
    for reg in part.regions:
        cells = set(reg.cells)
        if cells and _component_count(cells) != 1:
            broken_ids.append(reg.id)
            broken.extend(sorted(cells))
    connectivity = CheckResult(
        "connectivity",
        not broken_ids,
        "regions not 4-connected: " + ", ".join(map(str, broken_ids)) if broken_ids else "",
        tuple(broken),
    )

    total = math.fsum(r.lambda_actual for r in part.regions)
    tol = 1e-9 * max(1.0, abs(part.lambda_total))
    conservation = CheckResult(
        "conservation",
        abs(total - part.lambda_total) <= tol,
        f"sum of region dirt {total!r} vs map total {part.lambda_total!r}",
    )

    # the final region absorbs the remainder, so its flag is not prescribed
    flags = [r.flag for r in part.regions[:-1] if r.flag != "exact"]
    clash = any(a == b for a, b in zip(flags, flags[1:]))
    alternation = CheckResult(
        "alternation", not clash, f"non-exact flags before the final region: {flags}"
    )

    return ValidationReport((coverage, disjoint, connectivity, conservation, alternation))
