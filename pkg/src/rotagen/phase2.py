"""Phase 2: exact assignment of shift types to the working days of one pattern.

Every working cell of the chosen boolean array can carry any catalog type;
the search space is the Cartesian product of the catalog over the unpinned
working cells. Two method implementations are provided: CARTESIAN iterates
the product directly, RECURSIVE walks the same space depth-first with
incremental constraint state (no intermediate materialization). Both return
identical solution sets in lexicographic row-major order.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .model import (
    FREE,
    AssignmentMatrix,
    CellFlag,
    CoverageFlag,
    CoverageTable,
    Diagnostics,
    DomainError,
    MemoryGuardError,
    NotWorkingCellError,
    ScheduleParams,
    ShapeError,
    SolutionSet,
    SolveMethod,
    estimate_memory_bytes,
    hours_to_exact,
)
from .phase1 import ProgressHandle

#: The "prompt the user" boundary for full product materialization, in bytes.
DEFAULT_MEMORY_THRESHOLD = 10**9

_CANCEL_STRIDE = 4096


@dataclass(frozen=True, slots=True)
class MemoryGuardDecision:
    """Pre-estimate of the Cartesian method's memory demand."""

    estimated_bytes: int
    threshold_bytes: int

    @property
    def requires_confirmation(self) -> bool:
        return self.estimated_bytes > self.threshold_bytes


def memory_guard(
    params: ScheduleParams, working_days: int, threshold_bytes: int = DEFAULT_MEMORY_THRESHOLD
) -> MemoryGuardDecision:
    """Estimate the materialized product size and compare against the threshold."""
    return MemoryGuardDecision(
        estimated_bytes=estimate_memory_bytes(params.n_shift_types, working_days),
        threshold_bytes=threshold_bytes,
    )


@dataclass(frozen=True, slots=True)
class SolveRequest:
    """Inputs for one phase-2 search."""

    template: AssignmentMatrix
    params: ScheduleParams
    pinned_cells: frozenset = frozenset()
    method: SolveMethod = SolveMethod.AUTO
    confirm_memory: bool = False
    memory_threshold: int = DEFAULT_MEMORY_THRESHOLD

    def __post_init__(self):
        object.__setattr__(self, "pinned_cells", frozenset(self.pinned_cells))


class _HourTable:
    """Integer-scaled clock data for the catalog plus the rest minimum."""

    __slots__ = ("day", "cycle", "starts", "durations", "rest_min")

    def __init__(self, params: ScheduleParams):
        fractions = [hours_to_exact(params.min_rest_between_shifts)]
        for s in params.shift_catalog:
            fractions.append(hours_to_exact(s.start_hour))
            fractions.append(hours_to_exact(s.duration))
        uph = math.lcm(*(f.denominator for f in fractions))
        self.day = 24 * uph
        self.cycle = self.day * 7 * params.weeks
        self.rest_min = int(hours_to_exact(params.min_rest_between_shifts) * uph)
        self.starts = tuple(int(hours_to_exact(s.start_hour) * uph) for s in params.shift_catalog)
        self.durations = tuple(int(hours_to_exact(s.duration) * uph) for s in params.shift_catalog)


def _check_matrix(matrix: AssignmentMatrix, params: ScheduleParams) -> None:
    if matrix.weeks != params.weeks:
        raise ShapeError(f"matrix has {matrix.weeks} weeks, params demand {params.weeks}")
    n = params.n_shift_types
    for row in matrix.cells:
        for v in row:
            if v != FREE and not 0 <= v < n:
                raise DomainError(f"cell value {v} outside catalog of {n} types")


def validate_assignment(matrix: AssignmentMatrix, params: ScheduleParams) -> Diagnostics:
    """Full feasibility readout: rest between consecutive shifts and staffing.

    Consecutive working days are taken over the flattened row-major cycle
    with wraparound (the rotation repeats); the second shift of any pair with
    rest below the minimum is flagged. Staffing counts every (day-of-week,
    shift type) against `min_workers_per_shift`.
    """
    _check_matrix(matrix, params)
    hours = _HourTable(params)
    cells = matrix.cells
    work = [
        (7 * w + c, w, c, cells[w][c])
        for w in range(len(cells))
        for c in range(7)
        if cells[w][c] != FREE
    ]
    n_days = 7 * params.weeks
    flags = [[CellFlag.OK] * 7 for _ in range(params.weeks)]
    k = len(work)
    for i in range(k):
        d1, _, _, s1 = work[i]
        d2, w2, c2, s2 = work[(i + 1) % k]
        gap = (d2 - d1) % n_days or n_days
        rest = gap * hours.day + hours.starts[s2] - hours.starts[s1] - hours.durations[s1]
        if rest < hours.rest_min:
            flags[w2][c2] = CellFlag.REST_VIOLATION
    coverage = build_coverage_table(matrix, params.n_shift_types)
    minimum = params.min_workers_per_shift
    cov_flags = tuple(
        tuple(
            CoverageFlag.OK if coverage.counts[c][s] >= minimum else CoverageFlag.UNDERSTAFFED
            for s in range(params.n_shift_types)
        )
        for c in range(7)
    )
    return Diagnostics(
        cell_flags=tuple(tuple(row) for row in flags),
        coverage=cov_flags,
    )


def assignment_feasible(diagnostics: Diagnostics, params: ScheduleParams) -> bool:
    """Zero violations: no rest flags, no understaffing on schedulable columns.

    Columns beyond `workdays_per_week` are off-days by construction and do not
    count against staffing.
    """
    if diagnostics.rest_violations():
        return False
    wd = params.workdays_per_week
    return all(c >= wd for c, _ in diagnostics.understaffed())


def build_coverage_table(matrix: AssignmentMatrix, n_shift_types: int | None = None) -> CoverageTable:
    """Workers per (day-of-week, shift type): column-wise tally over all weeks."""
    if n_shift_types is None:
        present = [v for row in matrix.cells for v in row if v != FREE]
        n_shift_types = max(present) + 1 if present else 1
    counts = [[0] * n_shift_types for _ in range(7)]
    for row in matrix.cells:
        for c, v in enumerate(row):
            if v != FREE:
                counts[c][v] += 1
    return CoverageTable(tuple(tuple(col) for col in counts))


class _SearchSpace:
    """Shared precomputation for both solve methods."""

    def __init__(self, request: SolveRequest):
        params = request.params
        template = request.template
        _check_matrix(template, params)
        if template.origin is not None:
            expected = {
                (w, c)
                for w in range(params.weeks)
                for c in range(params.workdays_per_week)
                if template.origin.bits[w * params.workdays_per_week + c]
            }
            if set(template.working_positions()) != expected:
                raise ShapeError("template working cells disagree with the origin array")
        self.params = params
        self.template = template
        self.positions = template.working_positions()
        for cell in request.pinned_cells:
            if cell not in self.positions:
                raise NotWorkingCellError(f"pinned cell {cell} is not a working cell")
        n = params.n_shift_types
        self.choices: list[tuple[int, ...]] = []
        for w, c in self.positions:
            if (w, c) in request.pinned_cells:
                self.choices.append((template.cells[w][c],))
            else:
                self.choices.append(tuple(range(n)))
        self.d_on = sum(1 for ch in self.choices if len(ch) > 1)
        self.space_size = n**self.d_on
        hours = _HourTable(params)
        n_days = 7 * params.weeks
        k = len(self.positions)
        days = [7 * w + c for w, c in self.positions]
        # pair_ok[i][s1][s2]: rest between working day i and its successor
        self.pair_ok: list[list[list[bool]]] = []
        for i in range(k):
            gap = (days[(i + 1) % k] - days[i]) % n_days or n_days
            base = gap * hours.day
            self.pair_ok.append(
                [
                    [
                        base + hours.starts[s2] - hours.starts[s1] - hours.durations[s1]
                        >= hours.rest_min
                        for s2 in range(n)
                    ]
                    for s1 in range(n)
                ]
            )
        self.column_of = [c for _, c in self.positions]
        self.min_workers = params.min_workers_per_shift
        self.schedulable = params.workdays_per_week

    def coverage_ok(self, values) -> bool:
        if self.min_workers <= 0:
            return True
        n = self.params.n_shift_types
        counts = [0] * (7 * n)
        for col, v in zip(self.column_of, values):
            counts[col * n + v] += 1
        need = self.min_workers
        for c in range(self.schedulable):
            base = c * n
            for s in range(n):
                if counts[base + s] < need:
                    return False
        return True

    def rest_ok(self, values) -> bool:
        k = len(values)
        pair_ok = self.pair_ok
        for i in range(k):
            if not pair_ok[i][values[i]][values[(i + 1) % k]]:
                return False
        return True

    def build_matrix(self, values) -> AssignmentMatrix:
        rows = [[FREE] * 7 for _ in range(self.params.weeks)]
        for (w, c), v in zip(self.positions, values):
            rows[w][c] = v
        return AssignmentMatrix(tuple(tuple(r) for r in rows), origin=self.template.origin)


def solve(request: SolveRequest, progress: ProgressHandle | None = None) -> SolutionSet:
    """Find every feasible assignment for the request's template.

    AUTO resolves to CARTESIAN unless the memory pre-estimate exceeds the
    threshold, in which case the caller must have confirmed explicitly.
    """
    space = _SearchSpace(request)
    method = request.method
    if method is SolveMethod.AUTO:
        guard = memory_guard(request.params, space.d_on, request.memory_threshold)
        if guard.requires_confirmation and not request.confirm_memory:
            raise MemoryGuardError(guard)
        method = SolveMethod.CARTESIAN
    if progress is not None:
        progress.total = space.space_size
    if method is SolveMethod.CARTESIAN:
        solutions, examined, truncated = _solve_cartesian(space, progress)
    else:
        solutions, examined, truncated = _solve_recursive(space, progress)
    return SolutionSet(
        solutions=tuple(solutions),
        candidates_examined=examined,
        method=method,
        truncated=truncated,
    )


def _solve_cartesian(
    space: _SearchSpace, progress: ProgressHandle | None
) -> tuple[list[AssignmentMatrix], int, bool]:
    solutions: list[AssignmentMatrix] = []
    examined = 0
    truncated = False
    if not space.positions:
        # No working cells: the single empty assignment is feasible iff
        # staffing demands nothing.
        examined = 1
        if space.coverage_ok(()):
            solutions.append(space.build_matrix(()))
        return solutions, examined, truncated
    for values in itertools.product(*space.choices):
        examined += 1
        if space.rest_ok(values) and space.coverage_ok(values):
            solutions.append(space.build_matrix(values))
        if progress is not None and not examined & (_CANCEL_STRIDE - 1):
            progress.examined = examined
            if progress.cancelled:
                truncated = True
                break
    if progress is not None:
        progress.examined = examined
    return solutions, examined, truncated


def _solve_recursive(
    space: _SearchSpace, progress: ProgressHandle | None
) -> tuple[list[AssignmentMatrix], int, bool]:
    """Depth-first walk of the product space with incremental constraints.

    Candidates are streamed, never materialized; a canonical-form set guards
    solution uniqueness. Covered-candidate accounting includes subtrees
    eliminated by an infeasible prefix, so a completed walk reports the same
    count as the Cartesian method.
    """
    params = space.params
    n = params.n_shift_types
    k = len(space.positions)
    if k == 0:
        examined = 1
        solutions = []
        if space.coverage_ok(()):
            solutions.append(space.build_matrix(()))
        return solutions, examined, False

    suffix_size = [1] * (k + 1)
    for i in reversed(range(k)):
        suffix_size[i] = suffix_size[i + 1] * len(space.choices[i])

    counts = [0] * (7 * n)
    need = space.min_workers
    schedulable = space.schedulable
    column_of = space.column_of
    pair_ok = space.pair_ok
    deficit = schedulable * n if need > 0 else 0
    values = [0] * k
    solutions: list[AssignmentMatrix] = []
    seen: set = set()
    state = {"covered": 0, "cancelled": False, "next_poll": _CANCEL_STRIDE}

    def bump(amount: int) -> None:
        state["covered"] += amount
        if progress is not None and state["covered"] >= state["next_poll"]:
            state["next_poll"] = state["covered"] + _CANCEL_STRIDE
            progress.examined = state["covered"]
            if progress.cancelled:
                state["cancelled"] = True

    def descend(i: int, deficit: int) -> None:
        if state["cancelled"]:
            return
        if i == k:
            if deficit == 0 and pair_ok[k - 1][values[k - 1]][values[0]]:
                key = tuple(values)
                if key not in seen:
                    seen.add(key)
                    solutions.append(space.build_matrix(values))
            bump(1)
            return
        col = column_of[i]
        for v in space.choices[i]:
            if i > 0 and not pair_ok[i - 1][values[i - 1]][v]:
                bump(suffix_size[i + 1])
                continue
            values[i] = v
            d = deficit
            idx = -1
            if need > 0 and col < schedulable:
                idx = col * n + v
                counts[idx] += 1
                if counts[idx] == need:
                    d -= 1
            descend(i + 1, d)
            if idx >= 0:
                counts[idx] -= 1
            if state["cancelled"]:
                return

    descend(0, deficit)
    if progress is not None:
        progress.examined = state["covered"]
    covered = state["covered"]
    truncated = state["cancelled"]
    return solutions, covered, truncated


__all__ = [
    "DEFAULT_MEMORY_THRESHOLD",
    "MemoryGuardDecision",
    "SolveRequest",
    "memory_guard",
    "validate_assignment",
    "assignment_feasible",
    "build_coverage_table",
    "solve",
]
