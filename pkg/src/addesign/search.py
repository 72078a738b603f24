"""Exact lambda-fold difference-cover search over candidate orbits.

Goal: pick ``family_size`` candidate orbits whose difference vectors sum
to exactly ``target`` on every nonzero group element.  Developing such a
family gives a balanced design with lambda = target/p pair coverage.

Each candidate contributes a fixed nonnegative sparse vector (8 entries
summing to 30 for the p=3 two-line blocks), so the counting identity

    family_size * k(k-1) = target * (p^n - 1)

must hold for the space to be nonempty, and the residual sum stays
pinned to k(k-1) * (picks still needed) along every search path.
Together with overshoot rejection this means any full-size selection
that never overshoots is automatically an exact solution.

Branching is element-driven: every node picks the smallest difference d
with residual > 0 and tries its still-usable coverers in increasing
candidate order, discarding each tried coverer for the rest of the node
(any solution containing it would have been built in the branch that
chose it).  That makes the tree duplicate-free and complete: along one
path the branching differences are nondecreasing, and the coverers of
each difference are committed in increasing order, which pins a unique
construction order for every solution set.

Pruning is forward checking with exact undo.  Residuals only shrink
along a path, so a candidate whose contribution no longer fits anywhere
is dead for the whole subtree; its supply leaves the per-difference
availability floors immediately, and a floor dropping below a residual
kills the branch.  Two structural bounds come on top: enough residual
room for the big (direction) contributions of all remaining picks, and
enough direction classes that still own a usable candidate.

The search is fully deterministic: no randomization, and a canonical
emission order (depth-first discovery order, which for complete runs is
sorted afterwards by the caller if needed).
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator

from .designs import (
    CoverageReport,
    Design,
    SimplicityReport,
    StructureReport,
    ZeroSumReport,
    check_simple,
    check_t_design,
    check_two_parallel_line_structure,
    check_zero_sum,
    pair_coverage,
)
from .geometry import Geometry
from .orbits import Family, OrbitRep, develop

_TICK_MASK = 1023  # budget clock checked every 1024 decisions


@dataclass(frozen=True)
class SearchConfig:
    """Knobs of one search run.  Candidate order is fixed (canonical
    keys), so there is no seed: identical configs give identical runs."""

    family_size: int = 16
    target: int = 6
    limit: int | None = 1
    budget: float | None = None  # wall-clock seconds

    def validate(self, geometry: Geometry, block_size: int) -> None:
        if self.family_size < 1:
            raise ValueError(f"family_size must be >= 1, got {self.family_size}")
        if self.target < 1:
            raise ValueError(f"target must be >= 1, got {self.target}")
        if self.limit is not None and self.limit < 1:
            raise ValueError(f"solution limit must be >= 1 or None, got {self.limit}")
        if self.budget is not None and self.budget <= 0:
            raise ValueError(f"time budget must be positive, got {self.budget}")
        lhs = self.family_size * block_size * (block_size - 1)
        rhs = self.target * (geometry.size - 1)
        if lhs != rhs:
            raise ValueError(
                f"counting identity fails: family_size*k(k-1) = {lhs} but "
                f"target*(p^n - 1) = {rhs}; no family can match"
            )


class _BudgetExpired(Exception):
    pass


class _Ticker:
    __slots__ = ("deadline", "nodes")

    def __init__(self, deadline: float | None):
        self.deadline = deadline
        self.nodes = 0

    def tick(self) -> None:
        self.nodes += 1
        if (
            self.deadline is not None
            and (self.nodes & _TICK_MASK) == 0
            and time.monotonic() > self.deadline
        ):
            raise _BudgetExpired


def _column_sums(supports, size: int) -> list[int]:
    avail = [0] * size
    for sup in supports:
        for d, val in sup:
            avail[d] += val
    return avail


def _by_difference(supports, size: int) -> list[list[tuple[int, int]]]:
    """For each difference d, the (candidate, contribution) pairs covering it."""
    table: list[list[tuple[int, int]]] = [[] for _ in range(size)]
    for c, sup in enumerate(supports):
        for d, val in sup:
            table[d].append((c, val))
    return table


class _State:
    """Mutable search state with exact undo.

    ``residual[d]`` is the coverage still needed at difference d and
    ``avail[d]`` the total contribution of usable candidates there.  A
    candidate is unusable (``dead[c] > 0``) once it is decided, or once
    some difference cannot absorb its contribution any more; residuals
    only shrink along a path, so dead candidates stay dead within the
    subtree and their supply leaves the floors immediately.
    """

    __slots__ = (
        "supports",
        "by_diff",
        "residual",
        "avail",
        "cov_alive",
        "dead",
        "big",
        "big_need",
        "capacity",
        "dirs",
        "dir_prune",
        "cls_alive",
        "open_classes",
    )

    def __init__(self, supports, size: int, target: int, dirs=None):
        self.supports = supports
        self.by_diff = _by_difference(supports, size)
        self.residual = [target] * size
        self.residual[0] = 0
        self.avail = _column_sums(supports, size)
        self.cov_alive = [len(cov) for cov in self.by_diff]
        self.dead = [0] * len(supports)
        # Capacity bound: every candidate carries `big_need` entries of the
        # largest contribution `big` (the two direction differences for the
        # 6,6,3,3,3,3,3,3 blocks), and each such entry needs a residual of
        # at least `big` to land.  The number of big landings still
        # possible, sum_d floor(residual[d]/big), therefore bounds
        # big_need * (picks remaining) from above.
        self.big = max(val for sup in supports for _, val in sup)
        self.big_need = min(
            sum(1 for _, val in sup if val == self.big) for sup in supports
        )
        self.capacity = sum(r // self.big for r in self.residual)
        # Direction-class bound: when two big contributions overshoot one
        # difference (2*big > target), the picked candidates occupy pairwise
        # distinct direction classes, so the number of classes that still
        # own a usable candidate bounds the picks remaining.
        self.dirs = dirs
        self.dir_prune = dirs is not None and 2 * self.big > target
        self.cls_alive = [0] * size
        self.open_classes = 0
        if self.dir_prune:
            for cls in dirs:
                if self.cls_alive[cls] == 0:
                    self.open_classes += 1
                self.cls_alive[cls] += 1

    def feasible(self) -> bool:
        return all(a >= r for a, r in zip(self.avail, self.residual))

    def _class_drop(self, c: int) -> None:
        cls = self.dirs[c]
        self.cls_alive[cls] -= 1
        if self.cls_alive[cls] == 0:
            self.open_classes -= 1

    def _class_raise(self, c: int) -> None:
        cls = self.dirs[c]
        if self.cls_alive[cls] == 0:
            self.open_classes += 1
        self.cls_alive[cls] += 1

    def kill(self, c: int) -> list[int]:
        """Remove a usable candidate from the pool (decided or discarded).

        Returns the differences whose floor broke: evidence that every
        completion from here needed c.
        """
        broken = []
        for d, val in self.supports[c]:
            self.avail[d] -= val
            self.cov_alive[d] -= 1
            if self.avail[d] < self.residual[d]:
                broken.append(d)
        if self.dir_prune:
            self._class_drop(c)
        self.dead[c] += 1
        return broken

    def revive(self, c: int) -> None:
        self.dead[c] -= 1
        for d, val in self.supports[c]:
            self.avail[d] += val
            self.cov_alive[d] += 1
        if self.dir_prune:
            self._class_raise(c)

    def branch_difference(self) -> int:
        """The most constrained deficient difference: fewest usable
        coverers, smallest index on ties.  Deterministic in the state."""
        best = -1
        best_count = -1
        for d in range(1, len(self.residual)):
            if self.residual[d] > 0:
                count = self.cov_alive[d]
                if best < 0 or count < best_count:
                    best, best_count = d, count
        return best

    def include(self, c: int) -> tuple[list[int], bool]:
        """Commit candidate c (already killed as 'decided').

        Lowers the residuals, kills every candidate whose contribution
        no longer fits somewhere, and keeps floors, capacity and class
        counts in step.  Returns the kill journal and whether the
        touched floors survived.
        """
        killed: list[int] = []
        touched: set[int] = set()
        for d, val in self.supports[c]:
            old = self.residual[d]
            new = old - val
            self.residual[d] = new
            self.capacity -= old // self.big - new // self.big
            for c2, v2 in self.by_diff[d]:
                if new < v2 <= old:
                    if not self.dead[c2]:
                        for d2, v3 in self.supports[c2]:
                            self.avail[d2] -= v3
                            self.cov_alive[d2] -= 1
                            touched.add(d2)
                        if self.dir_prune:
                            self._class_drop(c2)
                    self.dead[c2] += 1
                    killed.append(c2)
        # floors are only meaningful once all entries are updated
        ok = all(self.avail[d] >= self.residual[d] for d in touched)
        return killed, ok

    def undo_include(self, c: int, killed: list[int]) -> None:
        for c2 in reversed(killed):
            self.dead[c2] -= 1
            if not self.dead[c2]:
                for d2, v3 in self.supports[c2]:
                    self.avail[d2] += v3
                    self.cov_alive[d2] += 1
                if self.dir_prune:
                    self._class_raise(c2)
        for d, val in self.supports[c]:
            new = self.residual[d]
            old = new + val
            self.residual[d] = old
            self.capacity += old // self.big - new // self.big


def _dfs(state: _State, chosen, slots, ticker, first_pick=None) -> Iterator[tuple[int, ...]]:
    """Yield solution index tuples (sorted) below one node.

    The node branches on the usable coverers of the most constrained
    deficient difference, in increasing candidate order; a tried coverer
    is dead for the rest of the node.  ``first_pick`` restricts the node
    to one predetermined branch, which lets parallel workers own exactly
    one top-level subtree.
    """
    if slots == 0:
        # residual sums to k(k-1)*slots == 0 with nonnegative entries,
        # so reaching full size without overshoot is already exactness.
        yield tuple(sorted(chosen))
        return
    d = state.branch_difference()  # exists: sum(residual) > 0
    passed = []
    try:
        for c, _val in state.by_diff[d]:
            if state.dead[c]:
                continue
            if first_pick is not None and c != first_pick:
                # silent replay of this branch's discarded predecessors
                state.kill(c)
                passed.append(c)
                continue
            ticker.tick()
            broken = state.kill(c)
            passed.append(c)
            killed, ok = state.include(c)
            if ok and broken:
                # the include must also repair every floor its own
                # discard broke, otherwise the branch is dead anyway
                ok = all(state.avail[b] >= state.residual[b] for b in broken)
            if ok and state.capacity < state.big_need * (slots - 1):
                ok = False  # not enough big landings left for the picks ahead
            if ok and state.dir_prune and state.open_classes < slots - 1:
                ok = False  # too few direction classes still selectable
            if ok:
                chosen.append(c)
                yield from _dfs(state, chosen, slots - 1, ticker)
                chosen.pop()
            state.undo_include(c, killed)
            if first_pick is not None:
                break
            if broken:
                # discarding c starves some difference for good: every
                # completion of this node includes c, so the node is done
                break
            if state.dir_prune and state.open_classes < slots:
                break  # open classes only dwindle while the node advances
    finally:
        for c in reversed(passed):
            state.revive(c)


def _branch_worker(args):
    """Search one top-level subtree: the root pick is exactly `first`.

    Runs in a worker process; returns plain data.
    """
    supports, dirs, size, family_size, target, first, limit, budget = args
    deadline = None if budget is None else time.monotonic() + budget
    ticker = _Ticker(deadline)
    state = _State(supports, size, target, dirs)
    solutions = []
    complete = True
    try:
        for sol in _dfs(state, [], family_size, ticker, first_pick=first):
            solutions.append(sol)
            if limit is not None and len(solutions) >= limit:
                break
    except _BudgetExpired:
        complete = False
    return solutions, ticker.nodes, complete


class FamilySearch:
    """Streaming search for exact difference-cover families.

    Iterate ``run()`` (or the instance itself) to receive solutions as
    Family objects, in a deterministic canonical order (depth-first
    discovery).  After the stream ends the run statistics are on the
    instance: ``nodes``, ``elapsed``, ``emitted`` and ``complete``
    (False exactly when a time budget cut the exploration short).
    """

    def __init__(self, geometry: Geometry, candidates: list[OrbitRep], config: SearchConfig):
        if not candidates:
            raise ValueError("no candidates to search over")
        keys = [c.block for c in candidates]
        if any(a >= b for a, b in zip(keys, keys[1:])):
            raise ValueError("candidates must be strictly increasing by canonical key")
        sizes = {len(c.block) for c in candidates}
        if len(sizes) != 1:
            raise ValueError(f"candidates mix block sizes {sorted(sizes)}")
        config.validate(geometry, sizes.pop())
        self.geometry = geometry
        self.candidates = candidates
        self.config = config
        self.supports = [c.sparse for c in candidates]
        self.dirs = [c.direction for c in candidates]
        self.nodes = 0
        self.elapsed = 0.0
        self.emitted = 0
        self.complete = False

    def __iter__(self) -> Iterator[Family]:
        return self.run()

    def _family(self, indices: tuple[int, ...]) -> Family:
        return Family(
            geometry=self.geometry,
            reps=tuple(self.candidates[i] for i in indices),
        )

    def _root_branches(self) -> list[int]:
        """Root picks whose discarded predecessors keep the floors alive."""
        state = _State(self.supports, self.geometry.size, self.config.target, self.dirs)
        if not state.feasible():
            return []  # some difference can never be covered
        d = state.branch_difference()
        branches = []
        for c, _val in state.by_diff[d]:
            branches.append(c)
            if state.kill(c):
                break
        return branches

    def run(self, workers: int = 1) -> Iterator[Family]:
        if workers < 1:
            raise ValueError(f"workers must be >= 1, got {workers}")
        start = time.monotonic()
        self.nodes = 0
        self.emitted = 0
        self.complete = False
        try:
            if workers == 1:
                yield from self._run_sequential()
            else:
                yield from self._run_parallel(workers)
        finally:
            self.elapsed = time.monotonic() - start

    def _run_sequential(self) -> Iterator[Family]:
        cfg = self.config
        deadline = None if cfg.budget is None else time.monotonic() + cfg.budget
        ticker = _Ticker(deadline)
        state = _State(self.supports, self.geometry.size, cfg.target, self.dirs)
        if not state.feasible():
            self.complete = True  # some difference can never be covered
            return
        try:
            for sol in _dfs(state, [], cfg.family_size, ticker):
                yield self._family(sol)
                self.emitted += 1
                if cfg.limit is not None and self.emitted >= cfg.limit:
                    self.complete = True
                    return
            self.complete = True
        except _BudgetExpired:
            self.complete = False
        finally:
            self.nodes = ticker.nodes

    def _run_parallel(self, workers: int) -> Iterator[Family]:
        """Fan the top-level branches out to processes.

        Branch j owns the subtree whose root pick is the j-th usable
        coverer of the first deficient difference, so concatenating the
        per-branch streams in branch order reproduces the sequential
        emission exactly.
        """
        cfg = self.config
        branches = self._root_branches()
        if not branches:
            self.complete = True
            return
        payloads = [
            (self.supports, self.dirs, self.geometry.size, cfg.family_size,
             cfg.target, c, cfg.limit, cfg.budget)
            for c in branches
        ]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_branch_worker, p) for p in payloads]
            try:
                for fut in futures:
                    solutions, nodes, complete = fut.result()
                    self.nodes += nodes
                    for sol in solutions:
                        yield self._family(sol)
                        self.emitted += 1
                        if cfg.limit is not None and self.emitted >= cfg.limit:
                            self.complete = True
                            return
                    if not complete:
                        # this branch was cut short: emitting later branches
                        # would break the in-order guarantee
                        self.complete = False
                        return
                self.complete = True
            finally:
                pool.shutdown(wait=False, cancel_futures=True)

    def collect(self, workers: int = 1) -> list[Family]:
        return list(self.run(workers=workers))


@dataclass
class FamilyVerdict:
    """Aggregate of the four family checks on the developed design."""

    design: Design
    coverage: CoverageReport
    simplicity: SimplicityReport
    zero_sum: ZeroSumReport
    structure: StructureReport

    @property
    def ok(self) -> bool:
        return (
            self.coverage.balanced
            and self.simplicity.simple
            and self.zero_sum.ok
            and self.structure.ok
        )


def verify_family(family: Family, lam: int | None = None) -> FamilyVerdict:
    """Develop a family and run the full verification suite.

    Balance is checked by brute-force pair counting on the developed
    blocks, never by the difference arithmetic that may have produced
    the family.  Failures are verdict content, not errors.
    """
    design = develop(family)
    if lam is None:
        lam = design.lam
    if lam is not None:
        coverage = check_t_design(design, 2, lam)
    else:
        # counting already rules out balance; keep the histogram as evidence
        coverage = pair_coverage(design, None)
    return FamilyVerdict(
        design=design,
        coverage=coverage,
        simplicity=check_simple(design),
        zero_sum=check_zero_sum(design),
        structure=check_two_parallel_line_structure(design),
    )
