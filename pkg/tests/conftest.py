from __future__ import annotations

import random
from datetime import date, timedelta

import numpy as np

import oracle
from sclcover import SceneMask, SceneSeries

# Lines recorded by the acceptance tests; shown after the run summary so
# they are visible without -s.
_ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def make_timestamps(n_steps: int) -> list[str]:
    start = date(2020, 1, 1)
    return [(start + timedelta(days=5 * i)).isoformat() for i in range(n_steps)]


def make_series(
    rng: random.Random,
    width: int,
    height: int,
    n_steps: int,
    region_id: str = "r",
    label_pool=tuple(range(12)),
) -> SceneSeries:
    """Random series with labels drawn from the pool via Python's RNG."""
    pool = list(label_pool)
    masks = []
    for _ in range(n_steps):
        grid = [[rng.choice(pool) for _ in range(width)] for _ in range(height)]
        masks.append(SceneMask(np.array(grid, dtype=np.uint8)))
    return SceneSeries(region_id, make_timestamps(n_steps), masks)


def grids_of(series: SceneSeries) -> list[list[list[int]]]:
    return [mask.labels.tolist() for mask in series.masks]


def oracle_assess(series: SceneSeries, config) -> dict:
    """The brute-force oracle applied to a SceneSeries + config."""
    return oracle.assess(
        grids_of(series),
        set(config.label_filter.members),
        config.sc_thresh,
        config.step_thresh,
        config.tc_thresh,
    )


def assert_matches_oracle(assessment, series, config) -> None:
    """Field-for-field, bit-exact comparison against the oracle."""
    expected = oracle_assess(series, config)
    assert list(assessment.sc_per_step) == expected["sc_per_step"]
    assert assessment.sc == expected["sc"]
    assert assessment.tc == expected["tc"]
    assert assessment.sca == expected["sca"]
    assert assessment.tca == expected["tca"]
    assert assessment.n_steps == expected["n_steps"]
