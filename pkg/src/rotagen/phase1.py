"""Phase 1: constrained enumeration of boolean work/off patterns.

Candidates are the C(total_days, n_shifts) placements of working days over the
cycle's schedulable slots, visited in lexicographic order of their index
tuples. Each candidate passes through the coverage, weekly-rest and (optional)
free-day clustering predicates; survivors become `BooleanShiftArray` values.

The public predicates are the readable reference semantics. The enumeration
loop itself uses precomputed row tables and a memo over three-week windows so
that full multi-million-candidate runs stay in the tens of seconds; emitted
arrays always re-validate against the public predicates (tested).
"""

from __future__ import annotations

import itertools
import math
import threading
import time
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .model import (
    BooleanShiftArray,
    DomainError,
    GenerationMode,
    ScheduleParams,
    derive_total_shifts,
    expand_to_day_flags,
    expand_to_week_matrix,
    hours_to_exact,
    total_combination_count,
)

_PROGRESS_STRIDE = 8192  # candidates between progress/cancel polls


@dataclass(frozen=True, slots=True)
class GenerationRequest:
    """Inputs for one phase-1 run."""

    params: ScheduleParams
    mode: GenerationMode = GenerationMode.FULL
    fast_limit: int = 100
    cluster_free_days: bool = False

    def __post_init__(self):
        if self.fast_limit < 1:
            raise ValueError("fast_limit must be >= 1")


class ShiftArraySequence(Sequence):
    """Immutable, memory-compact ordered collection of BooleanShiftArray.

    Stores all patterns in one flat 0/1 byte buffer; items are materialized
    on access. Full runs can hold millions of arrays, so per-item objects
    would be wasteful.
    """

    __slots__ = ("_body", "_n_days", "_fingerprint")

    def __init__(self, body: bytes, n_days: int, fingerprint: str = ""):
        if n_days < 1:
            raise ValueError("n_days must be >= 1")
        if len(body) % n_days:
            raise ValueError("body length is not a multiple of n_days")
        self._body = bytes(body)
        self._n_days = n_days
        self._fingerprint = fingerprint

    @classmethod
    def from_arrays(
        cls, arrays: "Sequence[BooleanShiftArray]", n_days: int, fingerprint: str = ""
    ) -> "ShiftArraySequence":
        body = bytearray()
        for a in arrays:
            if a.n_days != n_days:
                raise ValueError("mixed array lengths")
            body += a.bits
        return cls(bytes(body), n_days, fingerprint)

    @property
    def n_days(self) -> int:
        return self._n_days

    @property
    def params_fingerprint(self) -> str:
        return self._fingerprint

    def __len__(self) -> int:
        return len(self._body) // self._n_days

    def __getitem__(self, index):
        if isinstance(index, slice):
            start, stop, step = index.indices(len(self))
            if step != 1:
                raise ValueError("only contiguous slices are supported")
            return ShiftArraySequence(
                self._body[start * self._n_days : stop * self._n_days],
                self._n_days,
                self._fingerprint,
            )
        n = len(self)
        if index < 0:
            index += n
        if not 0 <= index < n:
            raise IndexError(index)
        off = index * self._n_days
        return BooleanShiftArray(self._body[off : off + self._n_days], self._fingerprint)

    def __eq__(self, other) -> bool:
        if isinstance(other, ShiftArraySequence):
            return self._body == other._body and self._n_days == other._n_days
        if isinstance(other, (list, tuple)):
            return len(self) == len(other) and all(a == b for a, b in zip(self, other))
        return NotImplemented

    def __repr__(self) -> str:
        return f"ShiftArraySequence(len={len(self)}, n_days={self._n_days})"


@dataclass(frozen=True, slots=True)
class GenerationResult:
    """Outcome of one phase-1 run."""

    arrays: ShiftArraySequence
    combinations_examined: int
    solutions_found: int
    elapsed: float
    truncated: bool


class ProgressHandle:
    """Monotonic progress counters plus a cancel signal, shared across tasks.

    Counter updates are plain attribute stores, safe to read from other
    threads; `cancel()` asks a running generation to stop at the next poll.
    """

    def __init__(self, total: int | None = None):
        self.total = total
        self.examined = 0
        self.accepted = 0
        self._cancel = threading.Event()

    def cancel(self) -> None:
        self._cancel.set()

    @property
    def cancelled(self) -> bool:
        return self._cancel.is_set()

    @property
    def fraction(self) -> float:
        if not self.total:
            return 0.0
        return min(1.0, self.examined / self.total)


# ---------------------------------------------------------------------------
# Reference predicates
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class _TimeGrid:
    """Integer time arithmetic: one unit = 1/units_per_hour hours, exactly."""

    units_per_hour: int
    day: int
    week: int
    cycle: int
    shift_len: int
    rest_min: int
    anchor: int


def _time_grid(params: ScheduleParams) -> _TimeGrid:
    ts = hours_to_exact(params.shift_hours)
    tr = hours_to_exact(params.weekly_rest_hours)
    anchor = hours_to_exact(params.anchor_start_hour)
    uph = math.lcm(ts.denominator, tr.denominator, anchor.denominator)
    scale = lambda f: int(f * uph)  # noqa: E731 - exact by construction
    return _TimeGrid(
        units_per_hour=uph,
        day=24 * uph,
        week=168 * uph,
        cycle=168 * uph * params.weeks,
        shift_len=scale(ts),
        rest_min=scale(tr),
        anchor=scale(anchor),
    )


def check_coverage(array: BooleanShiftArray, params: ScheduleParams) -> bool:
    """Every schedulable day column must be staffed by at least N workers."""
    matrix = expand_to_week_matrix(array, params)  # raises ShapeError
    sums = matrix.sum(axis=0)
    return bool((sums[: params.workdays_per_week] >= params.n_shift_types).all())


def check_weekly_rest(array: BooleanShiftArray, params: ScheduleParams) -> bool:
    """Each calendar week must touch one continuous shift-free stretch >= t_r.

    The cycle is circular time of 168*weeks hours; working day d occupies
    [24d + anchor, 24d + anchor + shift_hours).
    """
    flags = expand_to_day_flags(array, params)
    return _weekly_rest_ok(flags, params.weeks, _time_grid(params))


def _weekly_rest_ok(flags: Sequence, weeks: int, grid: _TimeGrid) -> bool:
    if grid.rest_min <= 0:
        return True
    work = [d for d, f in enumerate(flags) if f]
    if not work:
        return grid.rest_min <= grid.cycle
    n_days = len(flags)
    qualifying = []
    k = len(work)
    for i, d in enumerate(work):
        gap_days = (work[(i + 1) % k] - d) % n_days or n_days
        length = gap_days * grid.day - grid.shift_len
        if length >= grid.rest_min:
            start = (d * grid.day + grid.anchor + grid.shift_len) % grid.cycle
            qualifying.append((start, length))
    if not qualifying:
        return False
    for w in range(weeks):
        wk_start = w * grid.week
        wk_end = wk_start + grid.week
        if not any(
            (s < wk_end and s + ln > wk_start) or (s + ln - grid.cycle > wk_start)
            for s, ln in qualifying
        ):
            return False
    return True


def check_free_day_clustering(
    array: BooleanShiftArray, params: ScheduleParams, min_cluster: int | None = None
) -> bool:
    """Every maximal run of free days in the circular cycle spans >= min_cluster days."""
    n_cf = params.min_free_cluster if min_cluster is None else min_cluster
    if n_cf < 1:
        raise DomainError("min_cluster must be >= 1")
    return _free_runs_ok(expand_to_day_flags(array, params), n_cf)


def _free_runs_ok(flags: Sequence, n_cf: int) -> bool:
    if n_cf <= 1:
        return True
    if 1 not in flags:
        return len(flags) >= n_cf
    first = list(flags).index(1)
    rotated = list(flags[first:]) + list(flags[:first])
    run = 0
    for f in rotated:
        if f:
            if 0 < run < n_cf:
                return False
            run = 0
        else:
            run += 1
    return not 0 < run < n_cf


def weekend_off_count(array: BooleanShiftArray, params: ScheduleParams) -> int:
    """Number of weeks with both Saturday and Sunday free."""
    matrix = expand_to_week_matrix(array, params)
    return int(((matrix[:, 5] == 0) & (matrix[:, 6] == 0)).sum())


# ---------------------------------------------------------------------------
# Fast enumeration path
# ---------------------------------------------------------------------------


class _GenTables:
    """Precomputed per-parameter lookup tables for the enumeration loop."""

    __slots__ = (
        "params",
        "weeks",
        "workdays",
        "total_days",
        "week_of",
        "bit_of",
        "enc",
        "ones_enc",
        "high_mask",
        "offset_enc",
        "grid",
        "n_cf",
        "cluster_on",
        "memo",
        "swar_ok",
    )

    def __init__(self, params: ScheduleParams, cluster_on: bool):
        self.params = params
        self.weeks = params.weeks
        self.workdays = params.workdays_per_week
        self.total_days = params.total_days
        wd = self.workdays
        self.week_of = tuple(s // wd for s in range(self.total_days))
        self.bit_of = tuple(1 << (s % wd) for s in range(self.total_days))
        self.grid = _time_grid(params)
        self.n_cf = params.min_free_cluster
        self.cluster_on = cluster_on
        self.memo: dict[int, int] = {}
        n = params.n_shift_types
        # SWAR column sums: one byte per schedulable column.
        self.swar_ok = self.weeks + 128 - n < 256 and n < 128
        self.enc = tuple(
            sum(((r >> c) & 1) << (8 * c) for c in range(wd)) for r in range(1 << wd)
        )
        self.ones_enc = sum(1 << (8 * c) for c in range(wd))
        self.high_mask = self.ones_enc * 0x80
        self.offset_enc = (0x80 - n) * self.ones_enc

    def coverage_ok(self, rows: list) -> bool:
        if self.swar_ok:
            enc = self.enc
            total = self.offset_enc
            for r in rows:
                total += enc[r]
            return (total & self.high_mask) == self.high_mask
        n = self.params.n_shift_types
        for c in range(self.workdays):
            if sum((r >> c) & 1 for r in rows) < n:
                return False
        return True

    def window_verdict(self, prev: int, cur: int, nxt: int) -> int:
        """Bit 0: weekly rest holds for the middle week; bit 1: free runs
        beginning in the middle week are long enough. All rows must be
        non-zero (guaranteed by the caller)."""
        key = (prev << 14) | (cur << 7) | nxt
        cached = self.memo.get(key)
        if cached is not None:
            return cached
        flags = [(prev >> c) & 1 for c in range(7)]
        flags += [(cur >> c) & 1 for c in range(7)]
        flags += [(nxt >> c) & 1 for c in range(7)]
        grid = self.grid
        wk_start = 7 * grid.day
        wk_end = 14 * grid.day
        rest_ok = grid.rest_min <= 0
        if not rest_ok:
            work = [d for d in range(21) if flags[d]]
            for i in range(len(work) - 1):
                d1 = work[i]
                length = (work[i + 1] - d1) * grid.day - grid.shift_len
                if length < grid.rest_min:
                    continue
                start = d1 * grid.day + grid.anchor + grid.shift_len
                if start < wk_end and start + length > wk_start:
                    rest_ok = True
                    break
        cluster_ok = True
        if self.cluster_on and self.n_cf > 1:
            for d in range(7, 14):
                if flags[d] == 0 and flags[d - 1] == 1:
                    run = 0
                    while flags[d + run] == 0:
                        run += 1
                    if run < self.n_cf:
                        cluster_ok = False
                        break
        verdict = (1 if rest_ok else 0) | (2 if cluster_ok else 0)
        self.memo[key] = verdict
        return verdict

    def scalar_ok(self, rows: list) -> bool:
        """Exact rest + clustering check on the full circular cycle; used for
        the rare candidates containing an all-free week."""
        flags = []
        wd = self.workdays
        for r in rows:
            flags.extend(((r >> c) & 1 for c in range(wd)))
            flags.extend((0,) * (7 - wd))
        if not _weekly_rest_ok(flags, self.weeks, self.grid):
            return False
        if self.cluster_on and not _free_runs_ok(flags, self.n_cf):
            return False
        return True


def _scan(
    tables: _GenTables,
    combos,
    max_candidates: int | None,
    fast_limit: int | None,
    progress: ProgressHandle | None,
) -> tuple[bytearray, int, int, bool]:
    """Run candidates from `combos` through the constraint stack.

    Returns (accepted pattern bytes, examined, accepted, truncated). Stops
    after `max_candidates` examined, after `fast_limit` acceptances, or on
    cancellation (whichever comes first).
    """
    weeks = tables.weeks
    workdays = tables.workdays
    total_days = tables.total_days
    week_of = tables.week_of
    bit_of = tables.bit_of
    coverage_ok = tables.coverage_ok
    window_verdict = tables.window_verdict
    scalar_ok = tables.scalar_ok
    want = 3 if tables.cluster_on else 1
    body = bytearray()
    examined = 0
    accepted = 0
    truncated = False
    rows = [0] * weeks
    for tpl in combos:
        if max_candidates is not None and examined >= max_candidates:
            break
        examined += 1
        for p in tpl:
            rows[week_of[p]] |= bit_of[p]
        if coverage_ok(rows):
            if 0 in rows:
                ok = scalar_ok(rows)
            else:
                ok = True
                for w in range(weeks):
                    v = window_verdict(rows[w - 1], rows[w], rows[(w + 1) % weeks])
                    if v & want != want:
                        ok = False
                        break
            if ok:
                entry = bytearray(total_days)
                for p in tpl:
                    entry[p] = 1
                body += entry
                accepted += 1
                if fast_limit is not None and accepted >= fast_limit:
                    truncated = True
                    break
        for w in range(weeks):
            rows[w] = 0
        if progress is not None and not examined & (_PROGRESS_STRIDE - 1):
            progress.examined = examined
            progress.accepted = accepted
            if progress.cancelled:
                truncated = True
                break
    if progress is not None:
        progress.examined = examined
        progress.accepted = accepted
    return body, examined, accepted, truncated


def unrank_combination(n: int, k: int, rank: int) -> tuple[int, ...]:
    """Index tuple at `rank` in the lexicographic enumeration of C(n, k)."""
    if k < 0 or k > n:
        raise DomainError(f"need 0 <= k <= n, got ({n}, {k})")
    if not 0 <= rank < math.comb(n, k):
        raise DomainError(f"rank {rank} outside [0, C({n},{k}))")
    out = []
    p = 0
    remaining = rank
    for i in range(k):
        while True:
            below = math.comb(n - p - 1, k - i - 1)
            if remaining < below:
                break
            remaining -= below
            p += 1
        out.append(p)
        p += 1
    return tuple(out)


def combinations_from(n: int, k: int, start: Sequence):
    """Lexicographic index tuples of C(n, k) beginning at a given tuple.

    Mirrors the classic successor computation so a scan can resume anywhere
    in the index space.
    """
    indices = list(start)
    if len(indices) != k:
        raise DomainError(f"start tuple has {len(indices)} elements, expected {k}")
    yield tuple(indices)
    if k == 0:
        return
    while True:
        for i in reversed(range(k)):
            if indices[i] != i + n - k:
                break
        else:
            return
        indices[i] += 1
        for j in range(i + 1, k):
            indices[j] = indices[j - 1] + 1
        yield tuple(indices)


def _range_worker(args) -> tuple[bytes, int, int]:
    """Scan one contiguous rank range; used by process-parallel full runs."""
    params, cluster_on, n_shifts, lo, count = args
    tables = _GenTables(params, cluster_on)
    combos = combinations_from(params.total_days, n_shifts, unrank_combination(params.total_days, n_shifts, lo))
    body, examined, accepted, _ = _scan(tables, combos, count, None, None)
    return bytes(body), examined, accepted


def generate(
    request: GenerationRequest,
    progress: ProgressHandle | None = None,
    threads: int = 1,
) -> GenerationResult:
    """Enumerate and filter all boolean shift arrays for the request.

    FULL mode examines every combination; FAST mode stops after
    `fast_limit` acceptances. With threads > 1 a FULL run partitions the
    rank space across worker processes; the merged output preserves the
    single-threaded order exactly.
    """
    params = request.params
    n_shifts = derive_total_shifts(params)
    total = params.total_days
    expected = total_combination_count(total, n_shifts)
    if progress is not None:
        progress.total = expected
    fast_limit = request.fast_limit if request.mode is GenerationMode.FAST else None
    started = time.perf_counter()
    if threads > 1 and fast_limit is None and expected > 1:
        body, examined, accepted, truncated = _parallel_scan(
            request, n_shifts, expected, max(2, int(threads)), progress
        )
    else:
        tables = _GenTables(params, request.cluster_free_days)
        combos = itertools.combinations(range(total), n_shifts)
        body, examined, accepted, truncated = _scan(
            tables, combos, None, fast_limit, progress
        )
    elapsed = time.perf_counter() - started
    arrays = ShiftArraySequence(bytes(body), total, params.fingerprint())
    return GenerationResult(
        arrays=arrays,
        combinations_examined=examined,
        solutions_found=accepted,
        elapsed=elapsed,
        truncated=truncated,
    )


def _parallel_scan(
    request: GenerationRequest,
    n_shifts: int,
    expected: int,
    workers: int,
    progress: ProgressHandle | None,
) -> tuple[bytearray, int, int, bool]:
    params = request.params
    chunks = min(expected, workers * 8)
    bounds = [expected * i // chunks for i in range(chunks + 1)]
    jobs = [
        (params, request.cluster_free_days, n_shifts, lo, hi - lo)
        for lo, hi in zip(bounds, bounds[1:])
        if hi > lo
    ]
    body = bytearray()
    examined = 0
    accepted = 0
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part_body, part_examined, part_accepted in pool.map(_range_worker, jobs):
            body += part_body
            examined += part_examined
            accepted += part_accepted
            if progress is not None:
                progress.examined = examined
                progress.accepted = accepted
    return body, examined, accepted, False


__all__ = [
    "GenerationRequest",
    "GenerationResult",
    "ShiftArraySequence",
    "ProgressHandle",
    "generate",
    "check_coverage",
    "check_weekly_rest",
    "check_free_day_clustering",
    "weekend_off_count",
    "unrank_combination",
    "combinations_from",
]
