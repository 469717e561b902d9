from __future__ import annotations

import pytest

from rotagen import ScheduleParams


def make_params(**overrides) -> ScheduleParams:
    """Worked-example defaults: 2-shift, 7-day weeks, 4-week cycle."""
    base = dict(
        n_shift_types=2,
        workdays_per_week=7,
        weeks=4,
        shift_hours=8.33,
        weekly_hours=36.0,
        weekly_rest_hours=36.0,
        min_free_cluster=2,
    )
    base.update(overrides)
    return ScheduleParams(**base)


@pytest.fixture
def table_params() -> ScheduleParams:
    return make_params()


@pytest.fixture
def single_shift_week() -> ScheduleParams:
    return make_params(n_shift_types=1, workdays_per_week=5, weeks=1, min_free_cluster=1)
