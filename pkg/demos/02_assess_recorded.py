"""Replay a recorded engine and read off the novelty verdict.

Recorded engines are JSON files pairing each rendered query with the
count it returned on some past date.  They make assessments repeatable:
the same file always yields the same report, which is also how the test
suite freezes its expectations.
"""

from pathlib import Path

from innometer import build_report, load_engine_config, load_pattern, observe_series

FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"

pattern = load_pattern(FIXTURES / "pattern_eye.json")
engine = load_engine_config(FIXTURES / "engine_se1.json")

series = observe_series(engine, pattern, kind="hits")
print(f"engine {series.engine_id}: baseline {series.baseline} hits")
print(f"per-query counts: {series.values}\n")

report = build_report(series)
for i, group in enumerate(report.grouping.groups):
    label = report.partition.labels[i]
    mass = len(group) / report.grouping.frame_size
    print(f"  interval {i + 1} ({label}): {len(group):>2} queries, mass {mass:.3f}")

print(f"\nNv = {report.value:.3f}")
print(f"p(novelty) = {report.probability:.3f}")
