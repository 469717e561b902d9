"""Domain types and exact derivations shared by both scheduling phases.

Everything here is an immutable value object or a pure function; counts are
exact integers (arbitrary width) and hour arithmetic is done on rationals so
that decimal inputs like 8.33 never suffer float rounding at comparison
boundaries.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable

import numpy as np

#: Sentinel for an unassigned (free) cell in an assignment matrix.
FREE = -1

#: Column 0 of every week matrix is Monday; columns 5 and 6 are the weekend.
DAY_NAMES = (
    "Monday",
    "Tuesday",
    "Wednesday",
    "Thursday",
    "Friday",
    "Saturday",
    "Sunday",
)

HOURS_PER_DAY = 24
HOURS_PER_WEEK = 168


class SchedulerError(Exception):
    """Base class for all scheduling errors."""


class InfeasibleError(SchedulerError):
    """Parameters demand more shifts than there are schedulable slots."""


class DomainError(SchedulerError):
    """An argument is outside the mathematical domain of an operation."""


class ShapeError(SchedulerError):
    """An array or matrix does not match the dimensions set by the parameters."""


class ParseError(SchedulerError):
    """A persisted file is malformed."""


class ValidationError(SchedulerError):
    """A persisted file parses but contradicts its own header."""


class VersionError(SchedulerError):
    """A persisted file declares an unknown format version."""


class CatalogMismatchError(SchedulerError):
    """Schedules with different shift catalogs cannot be merged."""


class MemoryGuardError(SchedulerError):
    """A solve would exceed the memory threshold and was not confirmed."""

    def __init__(self, decision: "MemoryGuardDecision"):
        super().__init__(
            f"estimated {format_bytes(decision.estimated_bytes)} exceeds "
            f"threshold {format_bytes(decision.threshold_bytes)}; confirmation required"
        )
        self.decision = decision


class NotWorkingCellError(SchedulerError):
    """A shift type can only be placed on a working cell."""


def hours_to_exact(value: float | int | str | Fraction) -> Fraction:
    """Convert an hour quantity to an exact rational.

    Floats are interpreted through their shortest decimal repr, so 8.33 means
    exactly 833/100 rather than the nearest binary double.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(str(value))


def format_bytes(n: int) -> str:
    """Render a byte count with decimal units (kB = 1000 B) to 5 significant digits."""
    value = float(n)
    for unit in ("B", "kB", "MB", "GB", "TB", "PB"):
        if value < 1000 or unit == "PB":
            if unit == "B":
                return f"{n} B"
            return f"{value:.5g} {unit}"
        value /= 1000.0
    raise AssertionError("unreachable")


@dataclass(frozen=True, slots=True)
class ShiftType:
    """One shift species: a short label plus its clock placement."""

    label: str
    start_hour: float
    duration: float

    def __post_init__(self):
        if not self.label or self.label == "0":
            raise ValueError("shift label must be non-empty and distinct from the free-day token '0'")
        if not 0 <= self.start_hour < 24:
            raise ValueError(f"start_hour must lie in [0, 24), got {self.start_hour}")
        if self.duration <= 0:
            raise ValueError(f"duration must be positive, got {self.duration}")


#: Conventional day/evening/night start hours used when no catalog is given.
DEFAULT_START_HOURS = (6.0, 14.0, 22.0)


def default_catalog(n_shift_types: int, shift_hours: float) -> tuple[ShiftType, ...]:
    """Build a catalog of ``n_shift_types`` shifts of equal length.

    Up to three types get the conventional D/E/N labels and start hours;
    beyond that, starts are spread evenly over the day.
    """
    if n_shift_types < 1:
        raise ValueError("need at least one shift type")
    labels = ("D", "E", "N")
    if n_shift_types <= 3:
        return tuple(
            ShiftType(labels[i], DEFAULT_START_HOURS[i], shift_hours)
            for i in range(n_shift_types)
        )
    return tuple(
        ShiftType(f"S{i}", round(24.0 * i / n_shift_types, 2), shift_hours)
        for i in range(n_shift_types)
    )


@dataclass(frozen=True, slots=True)
class ScheduleParams:
    """All user inputs steering both generation phases.

    ``workdays_per_week`` counts the schedulable days per week (columns beyond
    it are forced off), ``weeks`` is the cycle length (= number of workers),
    and the hour fields are exact decimals.
    """

    n_shift_types: int
    workdays_per_week: int
    weeks: int
    shift_hours: float
    weekly_hours: float
    weekly_rest_hours: float
    min_free_cluster: int = 1
    shift_catalog: tuple[ShiftType, ...] = ()
    min_rest_between_shifts: float = 11.0
    min_workers_per_shift: int = 1
    anchor_start_hour: float = 8.0

    def __post_init__(self):
        if self.n_shift_types < 1:
            raise ValueError("n_shift_types must be >= 1")
        if not 1 <= self.workdays_per_week <= 7:
            raise ValueError("workdays_per_week must lie in 1..7")
        if self.weeks < 1:
            raise ValueError("weeks must be >= 1")
        if self.shift_hours <= 0:
            raise ValueError("shift_hours must be positive")
        if self.weekly_hours < 0:
            raise ValueError("weekly_hours must be >= 0")
        if not 0 <= self.weekly_rest_hours <= HOURS_PER_WEEK:
            raise ValueError("weekly_rest_hours must lie in 0..168")
        if not 1 <= self.min_free_cluster <= 7 * self.weeks:
            raise ValueError("min_free_cluster must lie in 1..7*weeks")
        if self.min_rest_between_shifts < 0:
            raise ValueError("min_rest_between_shifts must be >= 0")
        if self.min_workers_per_shift < 0:
            raise ValueError("min_workers_per_shift must be >= 0")
        if not 0 <= self.anchor_start_hour < 24:
            raise ValueError("anchor_start_hour must lie in [0, 24)")
        if not self.shift_catalog:
            object.__setattr__(
                self,
                "shift_catalog",
                default_catalog(self.n_shift_types, self.shift_hours),
            )
        else:
            object.__setattr__(self, "shift_catalog", tuple(self.shift_catalog))
        if len(self.shift_catalog) != self.n_shift_types:
            raise ValueError(
                f"catalog holds {len(self.shift_catalog)} types, expected {self.n_shift_types}"
            )
        labels = [s.label for s in self.shift_catalog]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate shift labels: {labels}")

    @property
    def total_days(self) -> int:
        """Number of schedulable day slots in one full cycle."""
        return self.weeks * self.workdays_per_week

    @property
    def cycle_days(self) -> int:
        """Number of calendar days in one full cycle."""
        return 7 * self.weeks

    def fingerprint(self) -> str:
        """Stable digest identifying this parameter set across processes."""
        canon = repr(
            (
                self.n_shift_types,
                self.workdays_per_week,
                self.weeks,
                str(hours_to_exact(self.shift_hours)),
                str(hours_to_exact(self.weekly_hours)),
                str(hours_to_exact(self.weekly_rest_hours)),
                self.min_free_cluster,
                tuple(
                    (s.label, str(hours_to_exact(s.start_hour)), str(hours_to_exact(s.duration)))
                    for s in self.shift_catalog
                ),
                str(hours_to_exact(self.min_rest_between_shifts)),
                self.min_workers_per_shift,
                str(hours_to_exact(self.anchor_start_hour)),
            )
        )
        return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True, slots=True)
class BooleanShiftArray:
    """One phase-1 candidate: a work/off pattern over the cycle's schedulable days.

    ``bits`` is a bytes object whose elements are 0 or 1; index ``w*workdays + c``
    is day ``c`` of week ``w``.
    """

    bits: bytes
    params_fingerprint: str = ""

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("bits must contain only 0 and 1")

    @classmethod
    def from_bits(cls, bits: Iterable[int], params_fingerprint: str = "") -> "BooleanShiftArray":
        return cls(bytes(int(b) for b in bits), params_fingerprint)

    @classmethod
    def from_bitstring(cls, text: str, params_fingerprint: str = "") -> "BooleanShiftArray":
        if set(text) - {"0", "1"}:
            raise ValueError(f"bitstring may contain only 0/1, got {text!r}")
        return cls(bytes(ch == "1" for ch in text), params_fingerprint)

    @property
    def n_days(self) -> int:
        return len(self.bits)

    @property
    def popcount(self) -> int:
        return sum(self.bits)

    @property
    def bitstring(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)

    @property
    def mask(self) -> int:
        """The pattern as an integer; bit ``i`` is day-slot ``i``."""
        m = 0
        for i, b in enumerate(self.bits):
            if b:
                m |= 1 << i
        return m

    @classmethod
    def from_mask(cls, mask: int, n_days: int, params_fingerprint: str = "") -> "BooleanShiftArray":
        return cls(bytes((mask >> i) & 1 for i in range(n_days)), params_fingerprint)


def derive_total_shifts(params: ScheduleParams) -> int:
    """Number of working shifts one full cycle must contain.

    Computed as the ceiling of (weeks * weekly hours) / shift length, exactly:
    a couple of spare hours beats running short.
    """
    if params.shift_hours <= 0:
        raise DomainError("shift_hours must be positive")
    required = hours_to_exact(params.weeks) * hours_to_exact(params.weekly_hours)
    n_shifts = math.ceil(required / hours_to_exact(params.shift_hours))
    if n_shifts > params.total_days:
        raise InfeasibleError(
            f"{n_shifts} shifts needed but only {params.total_days} schedulable slots "
            f"({params.weeks} weeks x {params.workdays_per_week} days)"
        )
    return n_shifts


def total_combination_count(total_days: int, n_shifts: int) -> int:
    """Exact number of work/off patterns: C(total_days, n_shifts)."""
    if total_days < 0 or n_shifts < 0 or n_shifts > total_days:
        raise DomainError(f"need 0 <= n_shifts <= total_days, got ({total_days}, {n_shifts})")
    return math.comb(total_days, n_shifts)


def estimate_memory_bytes(n_shift_types: int, working_days: int) -> int:
    """Rough bytes needed to materialize every assignment of ``working_days`` cells.

    N^d assignments of d cells, one byte per cell.
    """
    if n_shift_types < 1:
        raise DomainError("n_shift_types must be >= 1")
    if working_days < 0:
        raise DomainError("working_days must be >= 0")
    return n_shift_types**working_days * working_days


def expand_to_week_matrix(array: BooleanShiftArray, params: ScheduleParams) -> np.ndarray:
    """Lay the flat pattern out as a read-only weeks x 7 matrix.

    Week ``w``, column ``c`` (c < workdays_per_week) is ``bits[w*workdays + c]``;
    the remaining columns are forced off-days.
    """
    if array.n_days != params.total_days:
        raise ShapeError(
            f"array has {array.n_days} slots, params demand {params.total_days}"
        )
    matrix = np.zeros((params.weeks, 7), dtype=np.uint8)
    wd = params.workdays_per_week
    flat = np.frombuffer(array.bits, dtype=np.uint8)
    matrix[:, :wd] = flat.reshape(params.weeks, wd)
    matrix.setflags(write=False)
    return matrix


def expand_to_day_flags(array: BooleanShiftArray, params: ScheduleParams) -> tuple[int, ...]:
    """Flat calendar-day view (length 7*weeks) with off-day padding in place."""
    return tuple(int(v) for v in expand_to_week_matrix(array, params).ravel())


class SolveMethod(str, Enum):
    AUTO = "AUTO"
    CARTESIAN = "CARTESIAN"
    RECURSIVE = "RECURSIVE"


class GenerationMode(str, Enum):
    FAST = "FAST"
    FULL = "FULL"


class CellFlag(str, Enum):
    OK = "OK"
    REST_VIOLATION = "REST_VIOLATION"


class CoverageFlag(str, Enum):
    OK = "OK"
    UNDERSTAFFED = "UNDERSTAFFED"


@dataclass(frozen=True, slots=True)
class AssignmentMatrix:
    """Phase-2 state: one shift-type index (or FREE) per calendar cell."""

    cells: tuple[tuple[int, ...], ...]
    origin: BooleanShiftArray | None = None

    def __post_init__(self):
        if any(len(row) != 7 for row in self.cells):
            raise ShapeError("every week row must have 7 columns")

    @classmethod
    def from_boolean_array(
        cls,
        array: BooleanShiftArray,
        params: ScheduleParams,
        fill_type: int = 0,
    ) -> "AssignmentMatrix":
        """Initial template: every working day gets the first shift type."""
        matrix = expand_to_week_matrix(array, params)
        cells = tuple(
            tuple(fill_type if v else FREE for v in row) for row in matrix
        )
        return cls(cells, origin=array)

    @property
    def weeks(self) -> int:
        return len(self.cells)

    def working_positions(self) -> tuple[tuple[int, int], ...]:
        """(week, column) of every non-FREE cell, row-major."""
        return tuple(
            (w, c)
            for w, row in enumerate(self.cells)
            for c, v in enumerate(row)
            if v != FREE
        )

    def replace_cell(self, week: int, column: int, shift_type: int) -> "AssignmentMatrix":
        if self.cells[week][column] == FREE:
            raise NotWorkingCellError(f"cell ({week}, {column}) is a free day")
        rows = [list(r) for r in self.cells]
        rows[week][column] = shift_type
        return AssignmentMatrix(tuple(tuple(r) for r in rows), origin=self.origin)


@dataclass(frozen=True, slots=True)
class CoverageTable:
    """Workers on duty per (day-of-week, shift type); ``counts[c][s]``."""

    counts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.counts) != 7:
            raise ShapeError("coverage table must have 7 day columns")

    def total(self) -> int:
        return sum(sum(col) for col in self.counts)

    def as_array(self) -> np.ndarray:
        a = np.array(self.counts, dtype=np.int64)
        a.setflags(write=False)
        return a


@dataclass(frozen=True, slots=True)
class Diagnostics:
    """Feasibility readout for one assignment matrix.

    ``cell_flags[w][c]`` marks the second shift of any too-short rest pair;
    ``coverage[c][s]`` marks understaffed (day, shift) combinations.
    """

    cell_flags: tuple[tuple[CellFlag, ...], ...]
    coverage: tuple[tuple[CoverageFlag, ...], ...]

    def rest_violations(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            (w, c)
            for w, row in enumerate(self.cell_flags)
            for c, f in enumerate(row)
            if f is CellFlag.REST_VIOLATION
        )

    def understaffed(self) -> tuple[tuple[int, int], ...]:
        """(day column, shift type) pairs below the staffing minimum."""
        return tuple(
            (c, s)
            for c, col in enumerate(self.coverage)
            for s, f in enumerate(col)
            if f is CoverageFlag.UNDERSTAFFED
        )


@dataclass(frozen=True, slots=True)
class SolutionSet:
    """All feasible assignments found for one boolean shift array."""

    solutions: tuple[AssignmentMatrix, ...]
    candidates_examined: int
    method: SolveMethod
    truncated: bool = False


__all__ = [
    "FREE",
    "DAY_NAMES",
    "HOURS_PER_DAY",
    "HOURS_PER_WEEK",
    "SchedulerError",
    "InfeasibleError",
    "DomainError",
    "ShapeError",
    "ParseError",
    "ValidationError",
    "VersionError",
    "CatalogMismatchError",
    "MemoryGuardError",
    "NotWorkingCellError",
    "hours_to_exact",
    "format_bytes",
    "ShiftType",
    "default_catalog",
    "DEFAULT_START_HOURS",
    "ScheduleParams",
    "BooleanShiftArray",
    "derive_total_shifts",
    "total_combination_count",
    "estimate_memory_bytes",
    "expand_to_week_matrix",
    "expand_to_day_flags",
    "SolveMethod",
    "GenerationMode",
    "CellFlag",
    "CoverageFlag",
    "AssignmentMatrix",
    "CoverageTable",
    "Diagnostics",
    "SolutionSet",
]
