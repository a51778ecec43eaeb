"""Watch novelty decay and relevance build over five years of documents.

The synthetic corpus plants a growing share of matching documents in
each successive year, so the marker's novelty must fall while interest
in it rises.  A year with no documents at all yields None, not zero;
the fits simply skip it.
"""

from pathlib import Path

from innometer import load_corpus_jsonl, load_pattern
from innometer.cli import trend_series

FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"

corpus = load_corpus_jsonl(FIXTURES / "corpus_trend.jsonl")
pattern = load_pattern(FIXTURES / "pattern_trend.json")

trend = trend_series(corpus, pattern, 1999, 2004)

print("year    Nv      Rl")
for year, nv, rl in zip(trend.years, trend.nv_values, trend.rl_values):
    nv_text = "  -  " if nv is None else f"{nv:.3f}"
    rl_text = "  -  " if rl is None else f"{rl:.3f}"
    print(f"{year}  {nv_text}   {rl_text}")

print(f"\nNv fit: slope {trend.nv_fit[0]:+.4f} per year")
print(f"Rl fit: slope {trend.rl_fit[0]:+.4f} per year")
print(f"corr(Nv, Rl) = {trend.pearson_r:.3f}")
