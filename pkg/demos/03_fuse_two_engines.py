"""Fuse the verdicts of two engines that disagree.

Each engine's interval grouping becomes a mass assignment over the
query frame.  Dempster's rule measures how much the assignments clash
(the conflict factor K), throws the clashing mass away, and rescales
what survives.  Discounting one engine first tells the rule that its
evidence deserves less credit.
"""

from pathlib import Path

from innometer import (
    base_probability,
    build_report,
    combine,
    discount,
    load_engine_config,
    load_pattern,
    observe_series,
)

FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"
pattern = load_pattern(FIXTURES / "pattern_eye.json")

assignments = []
for name in ("engine_se1.json", "engine_se2.json"):
    engine = load_engine_config(FIXTURES / name)
    report = build_report(observe_series(engine, pattern, kind="hits"))
    assignments.append(base_probability(report.grouping, origin=report.engine_id))
    print(f"{report.engine_id}: occupancy {report.grouping.counts}, p(novelty) = {report.probability:.3f}")

m_a, m_b = assignments
fused = combine(m_a, m_b)
print(f"\nfused at full credit: K = {fused.conflict:.4f}")
print(f"  interval masses {tuple(round(m, 4) for m in fused.interval_masses)}")
print(f"  p(novelty) = {fused.belief_lower_half:.4f}")

fused = combine(m_a, discount(m_b, 0.2))
print(f"\nwith the second engine discounted by 0.2: K = {fused.conflict:.4f}")
print(f"  interval masses {tuple(round(m, 4) for m in fused.interval_masses)}")
print(f"  p(novelty) = {fused.belief_lower_half:.4f}")
