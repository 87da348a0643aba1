"""The oracle itself is anchored on hand-counted cases.

Every reference implementation the suite trusts gets at least one test
whose expected value was worked out by hand (or, for splitmix64, taken
from the published algorithm's reference C compiled and run once).
"""

import math

import oracle


def test_count_clean_hand_counted():
    grid = [[4, 5], [8, 4]]
    assert oracle.count_clean(grid, {4, 5}) == 3
    assert oracle.count_clean(grid, {8}) == 1
    assert oracle.count_clean(grid, set()) == 0
    assert oracle.count_clean(grid, set(range(12))) == 4


def test_sc_step_hand_counted():
    assert oracle.sc_step([[4, 5], [8, 4]], {4, 5}) == 0.75
    assert oracle.sc_step([[9]], {4}) == 0.0
    assert oracle.sc_step([[4]], {4}) == 1.0


def test_sc_series_hand_counted():
    # steps: 4/4, 2/4, 0/4 clean -> mean (1 + 0.5 + 0) / 3
    grids = [
        [[4, 4], [4, 4]],
        [[4, 9], [9, 4]],
        [[9, 9], [9, 9]],
    ]
    sc, per_step = oracle.sc_series(grids, {4})
    assert per_step == [1.0, 0.5, 0.0]
    assert sc == 0.5


def test_tc_series_hand_counted():
    assert oracle.tc_series([0.8, 0.6, 0.9], 0.7) == 2 / 3
    assert oracle.tc_series([0.7], 0.7) == 1.0  # inclusive boundary
    assert oracle.tc_series([0.69], 0.7) == 0.0


def test_label():
    assert oracle.label(0.7, 0.7) == "high"
    assert oracle.label(0.699, 0.7) == "low"


def test_assess_hand_counted():
    grids = [[[4, 4], [4, 4]], [[9, 9], [9, 9]]]
    got = oracle.assess(grids, {4}, 0.5, 0.5, 0.5)
    assert got == {
        "sc_per_step": [1.0, 0.0],
        "sc": 0.5,
        "tc": 0.5,
        "sca": "high",
        "tca": "high",
        "n_steps": 2,
    }


def test_quantile_linear_hand_counted():
    assert oracle.quantile_linear([1.0, 2.0, 3.0, 4.0], 0.5) == 2.5
    assert oracle.quantile_linear([1.0, 2.0, 3.0, 4.0], 0.25) == 1.75
    assert oracle.quantile_linear([1.0, 2.0, 3.0], 0.5) == 2.0
    assert oracle.quantile_linear([5.0], 0.75) == 5.0
    assert oracle.quantile_linear([1.0, 2.0], 1.0) == 2.0
    assert oracle.quantile_linear([1.0, 2.0], 0.0) == 1.0


def test_boxplot_numbers_hand_counted():
    # values 1..4 with one far outlier; q1=2, q3=4, iqr=2, fences [-1, 7]
    pairs = [("a", 1.0), ("b", 2.0), ("c", 3.0), ("d", 4.0), ("e", 100.0)]
    mean, med, q1, q3, lo, hi, outliers = oracle.boxplot_numbers(pairs)
    assert mean == 22.0
    assert med == 3.0
    assert q1 == 2.0
    assert q3 == 4.0
    assert (lo, hi) == (1.0, 100.0)
    assert outliers == ["e"]


def test_pearson_hand_counted():
    # the raw-sum formula carries a couple ulp of float error even on
    # perfectly linear data, hence isclose rather than ==
    assert math.isclose(oracle.pearson([1.0, 2.0, 3.0], [2.0, 4.0, 6.0]), 1.0, abs_tol=1e-12)
    assert math.isclose(oracle.pearson([1.0, 2.0, 3.0], [3.0, 2.0, 1.0]), -1.0, abs_tol=1e-12)


def test_round_half_even_percent():
    assert oracle.round_half_even_percent(1, 8) == 12  # 12.5 -> even 12
    assert oracle.round_half_even_percent(3, 8) == 38  # 37.5 -> even 38
    assert oracle.round_half_even_percent(1, 200) == 0  # 0.5 -> 0
    assert oracle.round_half_even_percent(3, 200) == 2  # 1.5 -> 2
    assert oracle.round_half_even_percent(230, 1980) == 12
    assert oracle.round_half_even_percent(0, 7) == 0
    assert oracle.round_half_even_percent(7, 7) == 100


def test_splitmix64_reference_values():
    # First outputs for seeds 0 and 1234567, from the published C
    # reference (Steele/Lea/Flood; Vigna's splitmix64.c) compiled and run.
    assert oracle.splitmix64_stream(0, 3) == [
        0xB2B24A15D311BDFF,
        0xED8C5342AB0CFEB2,
        0x39597E830BC21AD8,
    ]
    assert oracle.splitmix64_stream(1234567, 2) == [
        0x3BEF0972233E8B44,
        0x53F77C22816123BF,
    ]


def test_synth_labels_pools():
    stack = oracle.synth_labels(99, 4, 3, 2, 1.0, {4, 5}, {0, 1})
    for grid in stack:
        for row in grid:
            for code in row:
                assert code in {4, 5}
    stack = oracle.synth_labels(99, 4, 3, 2, 0.0, {4, 5}, {0, 1})
    for grid in stack:
        for row in grid:
            for code in row:
                assert code in {0, 1}
