"""
Phase 2: assigning shift types to a chosen pattern
==================================================

Once a work/off pattern is fixed, every working day still needs a concrete
shift type. The search space is the Cartesian product of the catalog over the
working cells; constraints are rest between consecutive shifts and full
staffing of every (day, type) slot.
"""

from rotagen import (
    AssignmentMatrix,
    GenerationMode,
    ScheduleParams,
    SolveMethod,
    SolveRequest,
    memory_guard,
    solve,
    validate_assignment,
)
from rotagen.phase1 import GenerationRequest, generate

params = ScheduleParams(
    n_shift_types=2,
    workdays_per_week=7,
    weeks=4,
    shift_hours=8.33,
    weekly_hours=36.0,
    weekly_rest_hours=36.0,
    min_free_cluster=2,
)

batch = generate(GenerationRequest(params, GenerationMode.FAST, cluster_free_days=True))
pattern = batch.arrays[0]

# The initial template fills every working day with the first catalog type
# (D). Free days stay "0" and can never carry a shift.
template = AssignmentMatrix.from_boolean_array(pattern, params)
print("template row 0:", template.cells[0])

# Editing by hand: put an evening shift on the second Thursday. The very next
# working morning then starts too soon - the diagnostics flag the SECOND cell
# of the violating pair, exactly what a grid UI paints red.
edited = template.replace_cell(1, 3, 1)
diag = validate_assignment(edited, params)
print("rest violations after the evening edit:", diag.rest_violations())

# evening ends 14:00 + 8.33 h = 22:20; day shift starts 06:00 -> 7.67 h rest < 11 h
diag = validate_assignment(template, params)
print("violations on the untouched template:", diag.rest_violations())

# Before an exhaustive search, estimate the materialized product size. Above
# the 1 GB threshold the caller must confirm or pick the recursive method.
guard = memory_guard(params, len(template.working_positions()))
print(f"memory estimate: {guard.estimated_bytes} B, "
      f"confirmation required: {guard.requires_confirmation}")

# Find every feasible assignment. Both methods return identical solution
# sets; the recursive one streams candidates instead of materializing them.
cartesian = solve(SolveRequest(template, params, method=SolveMethod.CARTESIAN))
recursive = solve(SolveRequest(template, params, method=SolveMethod.RECURSIVE))
print(f"candidates: {cartesian.candidates_examined}, "
      f"solutions: {len(cartesian.solutions)}, "
      f"methods agree: {cartesian.solutions == recursive.solutions}")

if cartesian.solutions:
    first = cartesian.solutions[0]
    print("first solution row 0:", first.cells[0])

# Pinning keeps hand-chosen cells fixed during the search.
pinned = solve(
    SolveRequest(
        template=template,
        params=params,
        pinned_cells=frozenset({(0, 0)}),
        method=SolveMethod.RECURSIVE,
    )
)
print("solutions with Monday week 0 pinned to D:", len(pinned.solutions))
