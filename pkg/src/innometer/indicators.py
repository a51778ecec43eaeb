"""Novelty and relevance indicators over an observed count series.

Raw counts are scaled against the marker-only baseline into [0, 1], the
scaled values are split into I intervals (I grows with the square root of
the query count), and the per-interval occupancy doubles as evidence:
q_i / S is the mass of interval i.  Novelty is high when queries found
little; relevance is high when the found documents attracted interest.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import evidence
from .corpus import ObservationSeries
from .errors import ConfigError, UnusablePatternError

MODES = ("saturating", "verbatim")
PARTITION_STRATEGIES = ("equal", "quantile")

NOVELTY_LABELS_4 = (
    "It is novel",
    "It is evidently novel",
    "It is evidently not novel",
    "It is not novel",
)


def normalize_count(raw: int | float, baseline: int | float, mode: str = "saturating") -> float:
    """Scale a raw count against the marker-only baseline into [0, 1].

    The default "saturating" mode, 1 - exp(-raw/baseline), maps zero to
    zero and approaches one as the count dwarfs the baseline.  "verbatim"
    mode keeps the published shape, clamp(1 - exp(1 - raw/baseline)), which
    stays at zero until the count exceeds the baseline.
    """
    if mode not in MODES:
        raise ConfigError(f"unknown normalization mode {mode!r}; expected one of {', '.join(MODES)}")
    if raw < 0:
        raise ValueError(f"raw count must be nonnegative, got {raw}")
    if baseline <= 0:
        raise UnusablePatternError("marker-only query returned no documents")
    if mode == "verbatim":
        value = 1.0 - math.exp(1.0 - raw / baseline)
        return min(max(value, 0.0), 1.0)
    return min(1.0 - math.exp(-raw / baseline), 1.0)


@dataclass(frozen=True)
class NormalizedSeries:
    """Scaled values in query order, plus how they were scaled."""

    values: tuple[float, ...]
    mode: str
    baseline_raw: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        for v in self.values:
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"normalized value {v} outside [0, 1]")


def normalize_series(series: ObservationSeries, mode: str = "saturating") -> NormalizedSeries:
    """Scale every count of an observed series."""
    values = tuple(normalize_count(v, series.baseline, mode) for v in series.values)
    return NormalizedSeries(values=values, mode=mode, baseline_raw=series.baseline)


def novelty(series: ObservationSeries, mode: str = "saturating") -> float:
    """Nv = 1 - mean scaled hit count; 1 means nothing like it was found."""
    if series.kind != "hits":
        raise ConfigError(f"novelty needs a hit-count series, got kind {series.kind!r}")
    normalized = normalize_series(series, mode)
    return 1.0 - float(np.mean(normalized.values))


def relevance(series: ObservationSeries, mode: str = "saturating") -> float:
    """Rl = mean scaled interest; 1 means every query drew attention."""
    if series.kind != "interest":
        raise ConfigError(f"relevance needs an interest series, got kind {series.kind!r}")
    normalized = normalize_series(series, mode)
    return float(np.mean(normalized.values))


def bin_count(frame_size: int) -> int:
    """Interval count I for S queries: round-half-up of sqrt(S), at least 1."""
    if frame_size < 1:
        raise ValueError(f"frame size must be >= 1, got {frame_size}")
    return max(1, math.floor(math.sqrt(frame_size) + 0.5))


@dataclass(frozen=True)
class IntervalPartition:
    """Ascending boundaries 0 = b_0 < ... < b_I = 1 with one label per interval.

    Membership is left-closed, right-open, except the last interval which
    is closed at 1.
    """

    boundaries: tuple[float, ...]
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "boundaries", tuple(float(b) for b in self.boundaries))
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.boundaries) < 2:
            raise ConfigError("a partition needs at least two boundaries")
        if self.boundaries[0] != 0.0 or self.boundaries[-1] != 1.0:
            raise ConfigError("partition boundaries must start at 0 and end at 1")
        for lo, hi in zip(self.boundaries, self.boundaries[1:]):
            if not lo < hi:
                raise ConfigError(f"partition boundaries must be strictly ascending, got {lo} then {hi}")
        if len(self.labels) != self.interval_count:
            raise ConfigError(
                f"expected {self.interval_count} labels, got {len(self.labels)}"
            )

    @property
    def interval_count(self) -> int:
        return len(self.boundaries) - 1

    def index_of(self, value: float) -> int:
        """0-based interval index of a value in [0, 1]."""
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"value {value} outside [0, 1]")
        return min(bisect_right(self.boundaries, value) - 1, self.interval_count - 1)


def nominal_labels(interval_count: int, kind: str = "novelty") -> tuple[str, ...]:
    """Human-readable interval labels; the four novelty ones are fixed wording."""
    if interval_count == 4 and kind == "novelty":
        return NOVELTY_LABELS_4
    return tuple(f"level {i}/{interval_count}" for i in range(1, interval_count + 1))


def make_partition(
    values: NormalizedSeries | Sequence[float],
    interval_count: int,
    strategy: str = "equal",
    labels: Sequence[str] | None = None,
) -> IntervalPartition:
    """Build a partition of [0, 1] into ``interval_count`` intervals.

    "equal" ignores the values and cuts equal widths.  "quantile" puts the
    interior boundaries at the empirical i/I-quantiles of the values; if
    deduplication leaves fewer than I distinct intervals it falls back to
    equal widths.
    """
    if strategy not in PARTITION_STRATEGIES:
        raise ConfigError(
            f"unknown partition strategy {strategy!r}; expected one of {', '.join(PARTITION_STRATEGIES)}"
        )
    if interval_count < 1:
        raise ConfigError(f"interval count must be >= 1, got {interval_count}")
    vals = values.values if isinstance(values, NormalizedSeries) else tuple(values)
    boundaries = [i / interval_count for i in range(interval_count + 1)]
    if strategy == "quantile" and interval_count > 1 and len(vals) > 0:
        interior = np.quantile(np.asarray(vals, dtype=float), [i / interval_count for i in range(1, interval_count)])
        candidate = [0.0, *(float(b) for b in interior), 1.0]
        deduped = [candidate[0]]
        for b in candidate[1:]:
            if b > deduped[-1]:
                deduped.append(b)
        if len(deduped) == interval_count + 1:
            boundaries = deduped
    if labels is None:
        labels = tuple(f"level {i}/{interval_count}" for i in range(1, interval_count + 1))
    return IntervalPartition(boundaries=tuple(boundaries), labels=tuple(labels))


@dataclass(frozen=True)
class IntervalGrouping:
    """Which query indices fell into which interval.

    ``groups[i]`` is the (possibly empty) frozenset of 1-based query
    indices in interval i; together the groups partition {1..frame_size}.
    """

    groups: tuple[frozenset[int], ...]
    frame_size: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "groups", tuple(frozenset(g) for g in self.groups))
        union: set[int] = set()
        total = 0
        for g in self.groups:
            total += len(g)
            union |= g
        expected = set(range(1, self.frame_size + 1))
        if total != self.frame_size or union != expected:
            raise ValueError("interval groups must partition the query indices 1..S")

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(len(g) for g in self.groups)


def group_by_interval(
    values: NormalizedSeries | Sequence[float], partition: IntervalPartition
) -> IntervalGrouping:
    """Assign each query index to its interval."""
    vals = values.values if isinstance(values, NormalizedSeries) else tuple(values)
    buckets: list[set[int]] = [set() for _ in range(partition.interval_count)]
    for k, v in enumerate(vals, start=1):
        buckets[partition.index_of(v)].add(k)
    return IntervalGrouping(groups=tuple(frozenset(b) for b in buckets), frame_size=len(vals))


@dataclass(frozen=True)
class IndicatorReport:
    """Everything one assessment produced for one (engine, kind) pair."""

    kind: str
    value: float
    probability: float
    series: NormalizedSeries
    partition: IntervalPartition
    grouping: IntervalGrouping
    assignment: evidence.MassAssignment
    engine_id: str
    baseline: int
    raw_values: tuple[int, ...]
    year_filter: int | None = None


def _probability_from(assignment: evidence.MassAssignment, grouping: IntervalGrouping, kind: str) -> float:
    """Belief that the object sits in the half of the scale named by ``kind``.

    Novelty reads the first floor(I/2) intervals (low scaled counts);
    relevance reads the last floor(I/2) (high scaled interest).
    """
    half = len(grouping.groups) // 2
    if kind == "novelty":
        chosen = grouping.groups[:half]
    else:
        chosen = grouping.groups[len(grouping.groups) - half :]
    target: set[int] = set()
    for g in chosen:
        target |= g
    return evidence.belief(assignment, target)


def build_report(
    series: ObservationSeries,
    mode: str = "saturating",
    strategy: str = "equal",
) -> IndicatorReport:
    """Run the full indicator pipeline over one observed series.

    A series whose baseline and counts are all zero describes an object the
    source has never seen; it is reported as maximally novel (or not
    relevant at all) with every query in the first interval.  A zero
    baseline with nonzero counts is contradictory and raises
    :class:`UnusablePatternError`.
    """
    kind = "novelty" if series.kind == "hits" else "relevance"
    if series.baseline <= 0:
        if any(series.values):
            raise UnusablePatternError(
                "marker-only query returned no documents but other queries did"
            )
        normalized = NormalizedSeries(
            values=(0.0,) * len(series.values), mode=mode, baseline_raw=0
        )
        value = 1.0 if kind == "novelty" else 0.0
    else:
        normalized = normalize_series(series, mode)
        mean = float(np.mean(normalized.values))
        value = 1.0 - mean if kind == "novelty" else mean
    intervals = bin_count(len(series.values))
    partition = make_partition(
        normalized, intervals, strategy=strategy, labels=nominal_labels(intervals, kind)
    )
    grouping = group_by_interval(normalized, partition)
    assignment = evidence.base_probability(grouping, origin=series.engine_id)
    probability = _probability_from(assignment, grouping, kind)
    return IndicatorReport(
        kind=kind,
        value=value,
        probability=probability,
        series=normalized,
        partition=partition,
        grouping=grouping,
        assignment=assignment,
        engine_id=series.engine_id,
        baseline=series.baseline,
        raw_values=series.values,
        year_filter=series.year_filter,
    )


def cohort_stats(values: Sequence[float]) -> tuple[float, float]:
    """Mean and population standard deviation across assessed objects."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("cohort_stats needs at least one value")
    return float(arr.mean()), float(arr.std(ddof=0))


def report_to_json_dict(report: IndicatorReport) -> dict:
    """Full JSON form of a report; intervals are numbered from 1 here."""
    rows = []
    for i, group in enumerate(report.grouping.groups):
        rows.append(
            {
                "interval": i + 1,
                "label": report.partition.labels[i],
                "queries": sorted(group),
                "count": len(group),
                "mass": (len(group) / report.grouping.frame_size) if group else 0.0,
            }
        )
    return {
        "engine_id": report.engine_id,
        "kind": report.kind,
        "year_filter": report.year_filter,
        "frame_size": report.grouping.frame_size,
        "baseline": report.baseline,
        "mode": report.series.mode,
        "raw_values": list(report.raw_values),
        "normalized_values": list(report.series.values),
        "partition": {
            "boundaries": list(report.partition.boundaries),
            "labels": list(report.partition.labels),
        },
        "intervals": rows,
        "indicator": {"name": "Nv" if report.kind == "novelty" else "Rl", "value": report.value},
        "probability": report.probability,
    }


def report_csv_rows(report: IndicatorReport) -> list[list]:
    """CSV form: one row per query k with raw, normalized, interval index."""
    rows: list[list] = [["k", "raw", "normalized", "interval"]]
    for k, (raw, norm) in enumerate(zip(report.raw_values, report.series.values), start=1):
        rows.append([k, raw, norm, report.partition.index_of(norm) + 1])
    return rows
