"""
Exporting and combining rotational schedules
============================================

A solved cycle becomes a spreadsheet-ready CSV: one row per person, each
person starting one week later than the previous, plus per-day counts of
every shift type. Two cycles can be merged into one staffing plan with
continuous person numbering and summed counts.
"""

import io

from rotagen import (
    AssignmentMatrix,
    GenerationMode,
    ScheduleParams,
    SolveMethod,
    SolveRequest,
    export_csv,
    load_combinations,
    merge_schedules,
    save_combinations,
    solve,
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

request = GenerationRequest(params, GenerationMode.FAST, cluster_free_days=True)
batch = generate(request)

# Generation results persist as plain text: header + one bitstring per line.
buffer = io.BytesIO()
save_combinations(batch, request, buffer)
print("combination file bytes:", len(buffer.getvalue()))
buffer.seek(0)
reloaded = load_combinations(buffer)
print("round trip exact:", reloaded.result == batch)

# Solve two different patterns and export each.
def first_solution(index: int) -> AssignmentMatrix:
    template = AssignmentMatrix.from_boolean_array(batch.arrays[index], params)
    found = solve(SolveRequest(template, params, method=SolveMethod.RECURSIVE))
    if not found.solutions:
        raise SystemExit(f"pattern #{index} has no feasible assignment")
    return found.solutions[0]

schedule_a = first_solution(0)
schedule_b = first_solution(1)

print("\n--- schedule A ---")
print(export_csv(schedule_a, params).decode(), end="")

# The merge keeps person numbering continuous (0..7 for two 4-week cycles)
# and sums the per-day counts, so minimum staffing of the combined plan can
# be read straight off the footer.
combined = merge_schedules([schedule_a, schedule_b], params)
print("\n--- combined plan ---")
print(combined.decode(), end="")
