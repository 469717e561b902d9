"""HTTP/JSON facade: phase-1 jobs and phase-2 planning sessions.

The service is a thin adapter over the core modules: every response is
reconstructible from core outputs, no scheduling logic lives here. Long
generations run as cancellable background jobs polled by the client; each
session serializes its own mutations.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException, Response
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .model import (
    FREE,
    AssignmentMatrix,
    Diagnostics,
    GenerationMode,
    InfeasibleError,
    NotWorkingCellError,
    ScheduleParams,
    ShiftType,
    SolutionSet,
    SolveMethod,
    derive_total_shifts,
    expand_to_week_matrix,
    format_bytes,
    total_combination_count,
)
from .phase1 import GenerationRequest, GenerationResult, ProgressHandle, generate, weekend_off_count
from .phase2 import (
    DEFAULT_MEMORY_THRESHOLD,
    SolveRequest,
    assignment_feasible,
    build_coverage_table,
    memory_guard,
    solve,
    validate_assignment,
)
from .schedule_io import merge_schedules


@dataclass(frozen=True)
class ServiceSettings:
    """Deployment knobs; every value can also come from CLI flags or env."""

    memory_threshold: int = DEFAULT_MEMORY_THRESHOLD
    default_fast_limit: int = 100
    default_start_hours: tuple = (6.0, 14.0, 22.0)


# -- wire models -------------------------------------------------------------


class ShiftTypeIn(BaseModel):
    label: str
    start_hour: float
    duration: float


class ParamsIn(BaseModel):
    n_shift_types: int = Field(ge=1)
    workdays_per_week: int = Field(ge=1, le=7)
    weeks: int = Field(ge=1)
    shift_hours: float = Field(gt=0)
    weekly_hours: float = Field(ge=0)
    weekly_rest_hours: float = Field(ge=0, le=168)
    min_free_cluster: int = Field(default=1, ge=1)
    shift_catalog: list[ShiftTypeIn] | None = None
    min_rest_between_shifts: float = 11.0
    min_workers_per_shift: int = 1
    anchor_start_hour: float = 8.0


class GenerateIn(BaseModel):
    params: ParamsIn
    mode: str = "FULL"
    fast_limit: int | None = None
    cluster_free_days: bool = False
    threads: int = 1


class SetCellIn(BaseModel):
    row: int
    column: int
    shift_type: int


class SolveIn(BaseModel):
    method: str = "AUTO"
    confirm_memory: bool = False


class OpenSessionIn(BaseModel):
    job_id: str
    combination_index: int


class ExportIn(BaseModel):
    solution_index: int | None = None
    merge: list[int] | None = None


class SelectIn(BaseModel):
    solution_index: int


# -- state -------------------------------------------------------------------


@dataclass
class Phase1Job:
    id: str
    request: GenerationRequest
    progress: ProgressHandle
    state: str = "RUNNING"  # RUNNING | DONE | CANCELLED | FAILED
    result: GenerationResult | None = None
    error: str | None = None
    thread: threading.Thread | None = None


@dataclass
class Phase2Session:
    id: str
    job_id: str
    combination_index: int
    params: ScheduleParams
    matrix: AssignmentMatrix
    diagnostics: Diagnostics
    solutions: SolutionSet | None = None
    selected_solution: int | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)


def _params_from_wire(data: ParamsIn) -> ScheduleParams:
    catalog = ()
    if data.shift_catalog:
        catalog = tuple(
            ShiftType(s.label, s.start_hour, s.duration) for s in data.shift_catalog
        )
    return ScheduleParams(
        n_shift_types=data.n_shift_types,
        workdays_per_week=data.workdays_per_week,
        weeks=data.weeks,
        shift_hours=data.shift_hours,
        weekly_hours=data.weekly_hours,
        weekly_rest_hours=data.weekly_rest_hours,
        min_free_cluster=data.min_free_cluster,
        shift_catalog=catalog,
        min_rest_between_shifts=data.min_rest_between_shifts,
        min_workers_per_shift=data.min_workers_per_shift,
        anchor_start_hour=data.anchor_start_hour,
    )


def _diagnostics_to_wire(diag: Diagnostics, params: ScheduleParams) -> dict:
    return {
        "cell_flags": [[f.value for f in row] for row in diag.cell_flags],
        "coverage": [[f.value for f in col] for col in diag.coverage],
        "feasible": assignment_feasible(diag, params),
    }


def _matrix_to_wire(matrix: AssignmentMatrix, params: ScheduleParams) -> dict:
    labels = [s.label for s in params.shift_catalog]
    return {
        "cells": [list(row) for row in matrix.cells],
        "labels": [["0" if v == FREE else labels[v] for v in row] for row in matrix.cells],
        "shift_counts_per_week": [
            [sum(1 for v in row if v == s) for s in range(params.n_shift_types)]
            for row in matrix.cells
        ],
        "coverage_counts": [list(col) for col in build_coverage_table(matrix, params.n_shift_types).counts],
    }


def create_app(settings: ServiceSettings | None = None) -> FastAPI:
    settings = settings or ServiceSettings()
    app = FastAPI(title="rotagen", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    jobs: dict[str, Phase1Job] = {}
    sessions: dict[str, Phase2Session] = {}
    store_lock = threading.Lock()

    def _get_job(job_id: str) -> Phase1Job:
        job = jobs.get(job_id)
        if job is None:
            raise HTTPException(404, detail={"error": "NO_SUCH_JOB", "job_id": job_id})
        return job

    def _get_session(session_id: str) -> Phase2Session:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(404, detail={"error": "NO_SUCH_SESSION", "session_id": session_id})
        return session

    @app.post("/phase1/jobs", status_code=202)
    def start_phase1(body: GenerateIn):
        try:
            params = _params_from_wire(body.params)
            mode = GenerationMode(body.mode)
            request = GenerationRequest(
                params=params,
                mode=mode,
                fast_limit=body.fast_limit or settings.default_fast_limit,
                cluster_free_days=body.cluster_free_days,
            )
            n_shifts = derive_total_shifts(params)
        except InfeasibleError as exc:
            raise HTTPException(422, detail={"error": "INFEASIBLE", "message": str(exc)})
        except ValueError as exc:
            raise HTTPException(422, detail={"error": "BAD_PARAMS", "message": str(exc)})
        job_id = uuid.uuid4().hex[:12]
        progress = ProgressHandle(
            total=total_combination_count(params.total_days, n_shifts)
        )
        job = Phase1Job(id=job_id, request=request, progress=progress)

        def run():
            try:
                job.result = generate(request, progress=progress, threads=body.threads)
                job.state = "CANCELLED" if progress.cancelled else "DONE"
            except Exception as exc:  # pragma: no cover - defensive
                job.state = "FAILED"
                job.error = str(exc)

        job.thread = threading.Thread(target=run, daemon=True)
        with store_lock:
            jobs[job_id] = job
        job.thread.start()
        return {"job_id": job_id}

    @app.get("/phase1/jobs/{job_id}")
    def get_phase1_status(job_id: str):
        job = _get_job(job_id)
        out = {
            "id": job.id,
            "state": job.state,
            "progress": job.progress.fraction,
            "combinations_examined": job.progress.examined,
            "solutions_found": job.progress.accepted,
            "mode": job.request.mode.value,
            "error": job.error,
        }
        if job.result is not None and job.state in ("DONE", "CANCELLED"):
            out.update(
                combinations_examined=job.result.combinations_examined,
                solutions_found=job.result.solutions_found,
                elapsed=job.result.elapsed,
                truncated=job.result.truncated,
                progress=1.0 if job.state == "DONE" else job.progress.fraction,
            )
        return out

    @app.post("/phase1/jobs/{job_id}/cancel")
    def cancel_phase1(job_id: str):
        job = _get_job(job_id)
        job.progress.cancel()
        return {"id": job.id, "state": job.state}

    @app.get("/phase1/jobs/{job_id}/combinations")
    def list_combinations(job_id: str, offset: int = 0, limit: int = 50):
        job = _get_job(job_id)
        if job.state == "RUNNING" or job.result is None:
            raise HTTPException(409, detail={"error": "JOB_NOT_DONE", "state": job.state})
        arrays = job.result.arrays
        total = len(arrays)
        offset = max(0, offset)
        limit = max(0, min(limit, 500))
        items = []
        params = job.request.params
        for index in range(offset, min(offset + limit, total)):
            array = arrays[index]
            items.append(
                {
                    "index": index,
                    "bits": array.bitstring,
                    "week_matrix": expand_to_week_matrix(array, params).tolist(),
                    "column_sums": expand_to_week_matrix(array, params).sum(axis=0).tolist(),
                    "weekends_off": weekend_off_count(array, params),
                }
            )
        return {"total": total, "offset": offset, "items": items}

    @app.post("/phase2/sessions", status_code=201)
    def open_phase2(body: OpenSessionIn):
        job = _get_job(body.job_id)
        if job.state == "RUNNING" or job.result is None:
            raise HTTPException(409, detail={"error": "JOB_NOT_DONE", "state": job.state})
        if not 0 <= body.combination_index < len(job.result.arrays):
            raise HTTPException(
                404,
                detail={"error": "NO_SUCH_COMBINATION", "index": body.combination_index},
            )
        params = job.request.params
        array = job.result.arrays[body.combination_index]
        matrix = AssignmentMatrix.from_boolean_array(array, params)
        session = Phase2Session(
            id=uuid.uuid4().hex[:12],
            job_id=body.job_id,
            combination_index=body.combination_index,
            params=params,
            matrix=matrix,
            diagnostics=validate_assignment(matrix, params),
        )
        with store_lock:
            sessions[session.id] = session
        return _session_state(session)

    def _session_state(session: Phase2Session) -> dict:
        return {
            "session_id": session.id,
            "job_id": session.job_id,
            "combination_index": session.combination_index,
            "n_shift_types": session.params.n_shift_types,
            "shift_labels": [s.label for s in session.params.shift_catalog],
            "matrix": _matrix_to_wire(session.matrix, session.params),
            "diagnostics": _diagnostics_to_wire(session.diagnostics, session.params),
            "solution_count": len(session.solutions.solutions) if session.solutions else None,
            "selected_solution": session.selected_solution,
        }

    @app.get("/phase2/sessions/{session_id}")
    def get_session(session_id: str):
        return _session_state(_get_session(session_id))

    @app.put("/phase2/sessions/{session_id}/cells")
    def set_cell(session_id: str, body: SetCellIn):
        session = _get_session(session_id)
        with session.lock:
            params = session.params
            if not (0 <= body.row < params.weeks and 0 <= body.column < 7):
                raise HTTPException(422, detail={"error": "BAD_CELL"})
            if not 0 <= body.shift_type < params.n_shift_types:
                raise HTTPException(422, detail={"error": "BAD_SHIFT_TYPE"})
            try:
                session.matrix = session.matrix.replace_cell(
                    body.row, body.column, body.shift_type
                )
            except NotWorkingCellError:
                raise HTTPException(409, detail={"error": "NOT_WORKING_CELL"})
            session.diagnostics = validate_assignment(session.matrix, params)
            return _session_state(session)

    @app.post("/phase2/sessions/{session_id}/solve")
    def find_solutions(session_id: str, body: SolveIn):
        session = _get_session(session_id)
        with session.lock:
            params = session.params
            try:
                method = SolveMethod(body.method)
            except ValueError:
                raise HTTPException(422, detail={"error": "BAD_METHOD", "method": body.method})
            d_on = len(session.matrix.working_positions())
            guard = memory_guard(params, d_on, settings.memory_threshold)
            if (
                method in (SolveMethod.AUTO, SolveMethod.CARTESIAN)
                and guard.requires_confirmation
                and not body.confirm_memory
            ):
                return {
                    "memory_guard": {
                        "estimated_bytes": guard.estimated_bytes,
                        "estimated_human": format_bytes(guard.estimated_bytes),
                        "threshold_bytes": guard.threshold_bytes,
                        "requires_confirmation": True,
                    },
                    "confirmed": False,
                }
            request = SolveRequest(
                template=session.matrix,
                params=params,
                method=method,
                confirm_memory=True,
                memory_threshold=settings.memory_threshold,
            )
            session.solutions = solve(request)
            session.selected_solution = 0 if session.solutions.solutions else None
            return {
                "method": session.solutions.method.value,
                "candidates_examined": session.solutions.candidates_examined,
                "solution_count": len(session.solutions.solutions),
                "truncated": session.solutions.truncated,
            }

    @app.get("/phase2/sessions/{session_id}/solutions")
    def list_solutions(session_id: str, offset: int = 0, limit: int = 20):
        session = _get_session(session_id)
        if session.solutions is None:
            raise HTTPException(409, detail={"error": "NOT_SOLVED"})
        sols = session.solutions.solutions
        offset = max(0, offset)
        limit = max(0, min(limit, 200))
        items = []
        for index in range(offset, min(offset + limit, len(sols))):
            items.append(
                {
                    "index": index,
                    "matrix": _matrix_to_wire(sols[index], session.params),
                }
            )
        return {"total": len(sols), "offset": offset, "items": items}

    @app.post("/phase2/sessions/{session_id}/select")
    def select_solution(session_id: str, body: SelectIn):
        session = _get_session(session_id)
        with session.lock:
            if session.solutions is None:
                raise HTTPException(409, detail={"error": "NOT_SOLVED"})
            if not 0 <= body.solution_index < len(session.solutions.solutions):
                raise HTTPException(404, detail={"error": "NO_SUCH_SOLUTION"})
            session.selected_solution = body.solution_index
            return {"selected_solution": session.selected_solution}

    @app.post("/phase2/sessions/{session_id}/export")
    def export(session_id: str, body: ExportIn):
        session = _get_session(session_id)
        if session.solutions is None:
            raise HTTPException(409, detail={"error": "NOT_SOLVED"})
        sols = session.solutions.solutions
        if body.merge is not None:
            indices = body.merge
        elif body.solution_index is not None:
            indices = [body.solution_index]
        elif session.selected_solution is not None:
            indices = [session.selected_solution]
        else:
            raise HTTPException(422, detail={"error": "NO_SOLUTION_SELECTED"})
        if any(not 0 <= i < len(sols) for i in indices):
            raise HTTPException(404, detail={"error": "NO_SUCH_SOLUTION"})
        payload = merge_schedules([sols[i] for i in indices], session.params)
        return Response(
            content=payload,
            media_type="text/csv; charset=utf-8",
            headers={"Content-Disposition": "attachment; filename=schedule.csv"},
        )

    return app


app = create_app()

__all__ = ["ServiceSettings", "create_app", "app"]
