"""rotagen: two-phase generation of N-shift rotational workforce schedules.

Phase 1 enumerates boolean work/off patterns under coverage, weekly-rest and
free-day clustering constraints; phase 2 assigns shift types to the working
days of a chosen pattern by exhaustive, exact search. Everything rotates: one
cycle of `weeks` weeks serves `weeks` workers, each shifted by one week.
"""

from .model import (
    DAY_NAMES,
    FREE,
    AssignmentMatrix,
    BooleanShiftArray,
    CatalogMismatchError,
    CellFlag,
    CoverageFlag,
    CoverageTable,
    Diagnostics,
    DomainError,
    GenerationMode,
    InfeasibleError,
    MemoryGuardError,
    NotWorkingCellError,
    ParseError,
    ScheduleParams,
    SchedulerError,
    ShapeError,
    ShiftType,
    SolutionSet,
    SolveMethod,
    ValidationError,
    VersionError,
    default_catalog,
    derive_total_shifts,
    estimate_memory_bytes,
    expand_to_week_matrix,
    format_bytes,
    total_combination_count,
)
from .phase1 import (
    GenerationRequest,
    GenerationResult,
    ProgressHandle,
    ShiftArraySequence,
    check_coverage,
    check_free_day_clustering,
    check_weekly_rest,
    generate,
    weekend_off_count,
)
from .phase2 import (
    DEFAULT_MEMORY_THRESHOLD,
    MemoryGuardDecision,
    SolveRequest,
    assignment_feasible,
    build_coverage_table,
    memory_guard,
    solve,
    validate_assignment,
)
from .schedule_io import (
    CombinationFile,
    export_csv,
    load_combinations,
    merge_schedules,
    save_combinations,
)

__version__ = "0.1.0"

__all__ = [
    "DAY_NAMES",
    "FREE",
    "AssignmentMatrix",
    "BooleanShiftArray",
    "CatalogMismatchError",
    "CellFlag",
    "CoverageFlag",
    "CoverageTable",
    "Diagnostics",
    "DomainError",
    "GenerationMode",
    "InfeasibleError",
    "MemoryGuardError",
    "NotWorkingCellError",
    "ParseError",
    "ScheduleParams",
    "SchedulerError",
    "ShapeError",
    "ShiftType",
    "SolutionSet",
    "SolveMethod",
    "ValidationError",
    "VersionError",
    "default_catalog",
    "derive_total_shifts",
    "estimate_memory_bytes",
    "expand_to_week_matrix",
    "format_bytes",
    "total_combination_count",
    "GenerationRequest",
    "GenerationResult",
    "ProgressHandle",
    "ShiftArraySequence",
    "check_coverage",
    "check_free_day_clustering",
    "check_weekly_rest",
    "generate",
    "weekend_off_count",
    "DEFAULT_MEMORY_THRESHOLD",
    "MemoryGuardDecision",
    "SolveRequest",
    "assignment_feasible",
    "build_coverage_table",
    "memory_guard",
    "solve",
    "validate_assignment",
    "CombinationFile",
    "export_csv",
    "load_combinations",
    "merge_schedules",
    "save_combinations",
    "__version__",
]
