"""Deterministic on-disk formats: combination files and schedule CSV export.

Combination files are line-oriented so multi-million-row results stream well:
a magic+version line, one JSON header line (full parameters plus run
counters), then one 0/1 bitstring per accepted pattern. Schedule CSVs are
plain comma-separated text, labels restricted to alphanumerics, LF endings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .model import (
    DAY_NAMES,
    FREE,
    AssignmentMatrix,
    BooleanShiftArray,
    CatalogMismatchError,
    GenerationMode,
    ParseError,
    ScheduleParams,
    ShapeError,
    ShiftType,
    ValidationError,
    VersionError,
    derive_total_shifts,
)
from .phase1 import GenerationRequest, GenerationResult, ShiftArraySequence
from .phase2 import build_coverage_table

COMBINATION_MAGIC = "rotagen-combinations"
COMBINATION_VERSION = 1


def params_to_dict(params: ScheduleParams) -> dict:
    return {
        "n_shift_types": params.n_shift_types,
        "workdays_per_week": params.workdays_per_week,
        "weeks": params.weeks,
        "shift_hours": params.shift_hours,
        "weekly_hours": params.weekly_hours,
        "weekly_rest_hours": params.weekly_rest_hours,
        "min_free_cluster": params.min_free_cluster,
        "shift_catalog": [
            {"label": s.label, "start_hour": s.start_hour, "duration": s.duration}
            for s in params.shift_catalog
        ],
        "min_rest_between_shifts": params.min_rest_between_shifts,
        "min_workers_per_shift": params.min_workers_per_shift,
        "anchor_start_hour": params.anchor_start_hour,
    }


def params_from_dict(data: dict) -> ScheduleParams:
    try:
        catalog = tuple(
            ShiftType(s["label"], s["start_hour"], s["duration"])
            for s in data["shift_catalog"]
        )
        return ScheduleParams(
            n_shift_types=data["n_shift_types"],
            workdays_per_week=data["workdays_per_week"],
            weeks=data["weeks"],
            shift_hours=data["shift_hours"],
            weekly_hours=data["weekly_hours"],
            weekly_rest_hours=data["weekly_rest_hours"],
            min_free_cluster=data["min_free_cluster"],
            shift_catalog=catalog,
            min_rest_between_shifts=data["min_rest_between_shifts"],
            min_workers_per_shift=data["min_workers_per_shift"],
            anchor_start_hour=data["anchor_start_hour"],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad parameter header: {exc}") from exc


@dataclass(frozen=True, slots=True)
class CombinationFile:
    """A parsed combination file: the request that produced it plus the result."""

    request: GenerationRequest
    result: GenerationResult


def save_combinations(
    result: GenerationResult, request: GenerationRequest, destination
) -> int:
    """Write a combination file; returns the number of bytes written.

    Identical inputs produce identical bytes (keys sorted, floats via repr).
    """
    header = {
        "params": params_to_dict(request.params),
        "mode": request.mode.value,
        "fast_limit": request.fast_limit,
        "cluster_free_days": request.cluster_free_days,
        "combinations_examined": result.combinations_examined,
        "solutions_found": result.solutions_found,
        "elapsed_seconds": result.elapsed,
        "truncated": result.truncated,
    }
    chunks = [
        f"{COMBINATION_MAGIC} {COMBINATION_VERSION}\n".encode(),
        (json.dumps(header, sort_keys=True, separators=(",", ":")) + "\n").encode(),
    ]
    for array in result.arrays:
        chunks.append((array.bitstring + "\n").encode())
    payload = b"".join(chunks)
    if hasattr(destination, "write"):
        destination.write(payload)
    else:
        Path(destination).write_bytes(payload)
    return len(payload)


def load_combinations(source) -> CombinationFile:
    """Parse and validate a combination file.

    Raises VersionError for unknown versions, ParseError for malformed
    content, ValidationError when body lines contradict the header.
    """
    if hasattr(source, "read"):
        payload = source.read()
    else:
        payload = Path(source).read_bytes()
    text = payload.decode("utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("empty file")
    magic = lines[0].split(" ")
    if len(magic) != 2 or magic[0] != COMBINATION_MAGIC:
        raise ParseError(f"not a combination file: {lines[0]!r}")
    if magic[1] != str(COMBINATION_VERSION):
        raise VersionError(f"unknown format version {magic[1]!r}")
    if len(lines) < 2:
        raise ParseError("missing header line")
    try:
        header = json.loads(lines[1])
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad header JSON: {exc}") from exc
    params = params_from_dict(header.get("params", {}))
    try:
        request = GenerationRequest(
            params=params,
            mode=GenerationMode(header["mode"]),
            fast_limit=header["fast_limit"],
            cluster_free_days=header["cluster_free_days"],
        )
        examined = int(header["combinations_examined"])
        solutions_found = int(header["solutions_found"])
        elapsed = float(header["elapsed_seconds"])
        truncated = bool(header["truncated"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad header field: {exc}") from exc
    n_days = params.total_days
    n_shifts = derive_total_shifts(params)
    body = bytearray()
    for lineno, line in enumerate(lines[2:], start=3):
        if set(line) - {"0", "1"}:
            raise ParseError(f"line {lineno}: not a bitstring")
        if len(line) != n_days:
            raise ValidationError(
                f"line {lineno}: length {len(line)} != {n_days} slots"
            )
        ones = line.count("1")
        if ones != n_shifts:
            raise ValidationError(
                f"line {lineno}: {ones} working days, header demands {n_shifts}"
            )
        body += bytes(ch == "1" for ch in line)
    arrays = ShiftArraySequence(bytes(body), n_days, params.fingerprint())
    if len(arrays) != solutions_found:
        raise ValidationError(
            f"{len(arrays)} body lines but header counts {solutions_found}"
        )
    result = GenerationResult(
        arrays=arrays,
        combinations_examined=examined,
        solutions_found=solutions_found,
        elapsed=elapsed,
        truncated=truncated,
    )
    return CombinationFile(request=request, result=result)


# ---------------------------------------------------------------------------
# Schedule CSV
# ---------------------------------------------------------------------------


def _person_row(solution: AssignmentMatrix, params: ScheduleParams, person: int) -> list[str]:
    labels = [s.label for s in params.shift_catalog]
    cells = []
    weeks = params.weeks
    for k in range(weeks):
        row = solution.cells[(person + k) % weeks]
        cells.extend("0" if v == FREE else labels[v] for v in row)
    return cells


def _catalog_key(params: ScheduleParams) -> tuple:
    return tuple((s.label, s.start_hour, s.duration) for s in params.shift_catalog)


def export_csv(solution: AssignmentMatrix, params: ScheduleParams) -> bytes:
    """Render one solution as a rotational schedule CSV.

    Person p's row is the solution's week rows rotated by p (person p starts
    at week p); the footer block repeats each (day, type) worker count under
    every week.
    """
    return merge_schedules([solution], params)


def merge_schedules(
    solutions: Sequence[AssignmentMatrix],
    params: ScheduleParams | Sequence[ScheduleParams],
) -> bytes:
    """Concatenate schedules into one CSV with continuous person numbering.

    All members must share the shift catalog and the cycle length; the footer
    is the elementwise sum of the members' coverage tables.
    """
    if not solutions:
        raise ValueError("nothing to merge")
    if isinstance(params, ScheduleParams):
        params_list = [params] * len(solutions)
    else:
        params_list = list(params)
        if len(params_list) != len(solutions):
            raise ValueError("one params per solution required")
    catalog = _catalog_key(params_list[0])
    weeks = params_list[0].weeks
    for p in params_list[1:]:
        if _catalog_key(p) != catalog:
            raise CatalogMismatchError("members use different shift catalogs")
        if p.weeks != weeks:
            raise ShapeError("members span different numbers of weeks")
    for sol, p in zip(solutions, params_list):
        if sol.weeks != p.weeks:
            raise ShapeError("solution weeks disagree with its params")

    lines = ["Person," + ",".join(DAY_NAMES * weeks)]
    person = 0
    for sol, p in zip(solutions, params_list):
        for local in range(weeks):
            lines.append(f"{person}," + ",".join(_person_row(sol, p, local)))
            person += 1

    n_types = params_list[0].n_shift_types
    totals = [[0] * n_types for _ in range(7)]
    for sol in solutions:
        table = build_coverage_table(sol, n_types)
        for c in range(7):
            for s in range(n_types):
                totals[c][s] += table.counts[c][s]
    labels = [s.label for s in params_list[0].shift_catalog]
    for s in range(n_types):
        counts = [str(totals[c][s]) for c in range(7)] * weeks
        lines.append(f"{labels[s]}," + ",".join(counts))
    return ("\n".join(lines) + "\n").encode("utf-8")


__all__ = [
    "COMBINATION_MAGIC",
    "COMBINATION_VERSION",
    "CombinationFile",
    "params_to_dict",
    "params_from_dict",
    "save_combinations",
    "load_combinations",
    "export_csv",
    "merge_schedules",
]
