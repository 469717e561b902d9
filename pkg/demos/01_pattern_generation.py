"""
Phase 1: enumerating boolean work/off patterns
==============================================

A rotational schedule over `weeks` weeks is shared by `weeks` workers, each
shifted by one week. Phase 1 finds every admissible work/off pattern for one
cycle: enough shifts to cover the weekly hours, every day staffed, a real
block of rest touching every week.
"""

from rotagen import (
    GenerationMode,
    ScheduleParams,
    check_weekly_rest,
    expand_to_week_matrix,
    generate,
    total_combination_count,
    weekend_off_count,
)
from rotagen.phase1 import GenerationRequest

# The worked configuration: two shift species (day/evening), full 7-day weeks,
# a 4-week cycle, 8.33 h shifts, 36 h weekly load, 36 h weekly rest, and free
# days clustered in pairs.
params = ScheduleParams(
    n_shift_types=2,
    workdays_per_week=7,
    weeks=4,
    shift_hours=8.33,
    weekly_hours=36.0,
    weekly_rest_hours=36.0,
    min_free_cluster=2,
)

# 18 shifts must be placed into 28 slots; the raw search space is C(28, 18).
print("combination space:", total_combination_count(params.total_days, 18))

# FAST mode stops after the first 100 accepted patterns - ideal for browsing.
fast = generate(GenerationRequest(params, GenerationMode.FAST, cluster_free_days=True))
print(f"fast run: {fast.combinations_examined} examined, "
      f"{fast.solutions_found} accepted in {fast.elapsed:.2f}s")

# Each accepted pattern is a 0/1 array; viewed as a matrix, rows are weeks
# (or workers, depending on the viewing angle) and columns are Monday..Sunday.
pattern = fast.arrays[0]
print("first pattern:", pattern.bitstring)
print(expand_to_week_matrix(pattern, params))
print("weekends fully off:", weekend_off_count(pattern, params))
print("weekly rest holds:", check_weekly_rest(pattern, params))

# Patterns with more free weekends are nicer to rotate through; rank the fast
# batch by that count.
by_weekends = sorted(
    range(len(fast.arrays)),
    key=lambda i: -weekend_off_count(fast.arrays[i], params),
)
best = by_weekends[0]
print(f"pattern #{best} has {weekend_off_count(fast.arrays[best], params)} free weekends:")
print(expand_to_week_matrix(fast.arrays[best], params))

# A FULL run of this configuration walks all 13.1 million combinations in
# about a minute; see the CLI:  rotagen generate --cluster --full --out all.txt
