import math

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from innometer.corpus import ObservationSeries
from innometer.errors import ConfigError, UnusablePatternError
from innometer.indicators import (
    NOVELTY_LABELS_4,
    IntervalGrouping,
    IntervalPartition,
    NormalizedSeries,
    bin_count,
    build_report,
    cohort_stats,
    group_by_interval,
    make_partition,
    nominal_labels,
    normalize_count,
    normalize_series,
    novelty,
    relevance,
    report_csv_rows,
    report_to_json_dict,
)

counts = st.integers(min_value=0, max_value=10_000)
baselines = st.integers(min_value=1, max_value=10_000)


def high_precision_saturating(raw, baseline):
    with mpmath.workdps(50):
        return float(1 - mpmath.e ** (-mpmath.mpf(raw) / mpmath.mpf(baseline)))


@pytest.mark.parametrize("raw,baseline", [(0, 1), (1, 1), (7, 15), (100, 100), (170, 100), (9999, 3)])
def test_saturating_matches_high_precision_oracle(raw, baseline):
    assert normalize_count(raw, baseline) == pytest.approx(
        high_precision_saturating(raw, baseline), abs=1e-12
    )


def test_verbatim_stays_at_zero_until_baseline():
    assert normalize_count(0, 10, mode="verbatim") == 0.0
    assert normalize_count(10, 10, mode="verbatim") == 0.0
    assert normalize_count(20, 10, mode="verbatim") == pytest.approx(1 - math.exp(-1))
    assert normalize_count(30, 10, mode="verbatim") == pytest.approx(1 - math.exp(-2))
    assert normalize_count(10_000, 10, mode="verbatim") <= 1.0


@given(counts, counts, baselines, st.sampled_from(["saturating", "verbatim"]))
def test_normalize_count_is_monotone_and_bounded(a, b, baseline, mode):
    lo, hi = sorted((a, b))
    va = normalize_count(lo, baseline, mode)
    vb = normalize_count(hi, baseline, mode)
    assert 0.0 <= va <= vb <= 1.0


def test_normalize_count_rejects_bad_inputs():
    with pytest.raises(ConfigError):
        normalize_count(1, 1, mode="linear")
    with pytest.raises(ValueError):
        normalize_count(-1, 1)
    with pytest.raises(UnusablePatternError, match="no documents"):
        normalize_count(5, 0)


def test_normalized_series_bounds():
    with pytest.raises(ValueError):
        NormalizedSeries(values=(0.5, 1.2), mode="saturating", baseline_raw=1)


def hits_series(*values, baseline=100, engine="e"):
    return ObservationSeries(engine_id=engine, kind="hits", baseline=baseline, values=values)


def interest_series(*values, baseline=100, engine="e"):
    return ObservationSeries(engine_id=engine, kind="interest", baseline=baseline, values=values)


def test_novelty_and_relevance_check_series_kind():
    with pytest.raises(ConfigError):
        novelty(interest_series(1, 2, 3))
    with pytest.raises(ConfigError):
        relevance(hits_series(1, 2, 3))


def test_novelty_is_one_when_nothing_is_found():
    assert novelty(hits_series(0, 0, 0)) == 1.0
    assert relevance(interest_series(0, 0, 0)) == 0.0


@given(st.lists(counts, min_size=1, max_size=20), st.integers(min_value=0, max_value=19), baselines)
def test_novelty_falls_and_relevance_rises_with_counts(values, position, baseline):
    position %= len(values)
    bumped = list(values)
    bumped[position] += 1
    nv_before = novelty(hits_series(*values, baseline=baseline))
    nv_after = novelty(hits_series(*bumped, baseline=baseline))
    assert nv_after <= nv_before
    assert 0.0 <= nv_after <= 1.0
    rl_before = relevance(interest_series(*values, baseline=baseline))
    rl_after = relevance(interest_series(*bumped, baseline=baseline))
    assert rl_after >= rl_before
    assert 0.0 <= rl_after <= 1.0


@pytest.mark.parametrize("s,expected", [(1, 1), (2, 1), (3, 2), (4, 2), (15, 4), (50, 7), (100, 10)])
def test_bin_count_rounds_sqrt_half_up(s, expected):
    assert bin_count(s) == expected


@given(st.integers(min_value=1, max_value=5000))
def test_bin_count_is_sqrt_scaled(s):
    i = bin_count(s)
    assert i == max(1, math.floor(math.sqrt(s) + 0.5))
    assert i * i <= s * 2  # never wildly above sqrt


def test_partition_validation():
    with pytest.raises(ConfigError):
        IntervalPartition(boundaries=(0.0, 0.5, 0.5, 1.0), labels=("a", "b", "c"))
    with pytest.raises(ConfigError):
        IntervalPartition(boundaries=(0.1, 1.0), labels=("a",))
    with pytest.raises(ConfigError):
        IntervalPartition(boundaries=(0.0, 1.0), labels=("a", "b"))


def test_membership_is_left_closed_right_open_last_closed():
    p = make_partition([], 4, strategy="equal")
    assert p.index_of(0.0) == 0
    assert p.index_of(0.25) == 1
    assert p.index_of(0.4999) == 1
    assert p.index_of(0.75) == 3
    assert p.index_of(1.0) == 3
    with pytest.raises(ValueError):
        p.index_of(1.5)


def test_nominal_labels_four_novelty_wording():
    assert nominal_labels(4, "novelty") == NOVELTY_LABELS_4
    assert nominal_labels(4, "relevance") == ("level 1/4", "level 2/4", "level 3/4", "level 4/4")
    assert nominal_labels(3, "novelty") == ("level 1/3", "level 2/3", "level 3/3")


def test_quantile_partition_uses_empirical_quartiles():
    values = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8]
    p = make_partition(values, 4, strategy="quantile")
    assert p.boundaries[0] == 0.0
    assert p.boundaries[-1] == 1.0
    assert p.boundaries[2] == pytest.approx(0.45)  # median of the sample
    grouping = group_by_interval(values, p)
    assert grouping.counts == (2, 2, 2, 2)


def test_quantile_partition_falls_back_on_ties():
    p = make_partition([0.5] * 10, 4, strategy="quantile")
    assert p.boundaries == (0.0, 0.25, 0.5, 0.75, 1.0)


def test_unknown_strategy_rejected():
    with pytest.raises(ConfigError):
        make_partition([0.5], 4, strategy="jenks")


@given(st.lists(st.floats(min_value=0.0, max_value=1.0, allow_nan=False), min_size=1, max_size=40))
def test_grouping_partitions_query_indices(values):
    p = make_partition(values, 4, strategy="equal")
    grouping = group_by_interval(values, p)
    union = set()
    for g in grouping.groups:
        assert not union & g
        union |= g
    assert union == set(range(1, len(values) + 1))


def test_grouping_validation_rejects_gaps():
    with pytest.raises(ValueError):
        IntervalGrouping(groups=(frozenset({1}), frozenset({3})), frame_size=3)


def test_build_report_novelty_pipeline():
    series = hits_series(10, 20, 25, 35, 45, 75, 55, 65, 85, 95, 105, 115, 125, 135, 170)
    report = build_report(series)
    assert report.kind == "novelty"
    assert report.grouping.counts == (3, 4, 7, 1)
    assert report.partition.labels == NOVELTY_LABELS_4
    assert report.assignment.mass_of(report.grouping.groups[2]) == pytest.approx(7 / 15)
    assert report.probability == pytest.approx(7 / 15)
    assert report.value == pytest.approx(1 - sum(1 - math.exp(-v / 100) for v in series.values) / 15)


def test_build_report_relevance_reads_upper_intervals():
    series = interest_series(10, 20, 25, 35, 45, 75, 55, 65, 85, 95, 105, 115, 125, 135, 170)
    report = build_report(series)
    assert report.kind == "relevance"
    upper = report.grouping.groups[2] | report.grouping.groups[3]
    assert report.probability == pytest.approx(len(upper) / 15)


def test_build_report_degenerate_unseen_object():
    report = build_report(hits_series(0, 0, 0, baseline=0))
    assert report.value == 1.0
    assert report.probability == 1.0
    assert report.grouping.counts[0] == 3
    rl = build_report(interest_series(0, 0, 0, baseline=0))
    assert rl.value == 0.0


def test_build_report_contradictory_baseline_is_an_error():
    with pytest.raises(UnusablePatternError, match="other queries did"):
        build_report(hits_series(0, 5, 0, baseline=0))


def test_cohort_stats():
    mean, std = cohort_stats([0.2, 0.4, 0.6])
    assert mean == pytest.approx(0.4)
    assert std == pytest.approx(math.sqrt(2 / 75))
    with pytest.raises(ValueError):
        cohort_stats([])


def test_csv_rows_round_trip_exactly():
    series = hits_series(3, 4, 7, baseline=9)
    report = build_report(series)
    rows = report_csv_rows(report)
    assert rows[0] == ["k", "raw", "normalized", "interval"]
    for k, raw, norm, interval in rows[1:]:
        assert float(str(norm)) == norm
        assert report.partition.index_of(norm) + 1 == interval


def test_report_json_shape():
    doc = report_to_json_dict(build_report(hits_series(1, 2, 3, baseline=4)))
    assert doc["frame_size"] == 3
    assert doc["indicator"]["name"] == "Nv"
    assert len(doc["intervals"]) == doc["partition"]["boundaries"].__len__() - 1
    assert sorted(q for row in doc["intervals"] for q in row["queries"]) == [1, 2, 3]


def test_normalize_series_keeps_order():
    series = hits_series(0, 50, 100, baseline=100)
    normalized = normalize_series(series)
    assert normalized.values[0] == 0.0
    assert normalized.values == tuple(sorted(normalized.values))
    assert normalized.baseline_raw == 100
