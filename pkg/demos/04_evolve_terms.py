"""Refine a twelve-term vocabulary down to the pair the corpus rewards."""

from pathlib import Path
import json

from innometer import EvolverConfig, derive_model_pattern, evolve, load_corpus_jsonl

FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"

reference = json.loads((FIXTURES / "reference_dominance.json").read_text())
config = EvolverConfig.from_dict(json.loads((FIXTURES / "evolver_config.json").read_text()))
corpus = load_corpus_jsonl(FIXTURES / "corpus_dominance.jsonl")

model = evolve(reference["terms"], reference["synonyms"], corpus, config)

print(f"seed {model.seed}, stopped by {model.terminated_by} after {model.generations} generations")
print("best fitness by generation:")
for gen, best in enumerate(model.history):
    print(f"  {gen:>3}  {best:.4f}")

print("\nterm weights across surviving queries:")
for term, weight in model.terms.items():
    print(f"  {term:<10} {weight}")

derived = derive_model_pattern(model, reference["marker"], config.model_terms or 4)
print(f"\nderived pattern: marker {derived.marker!r}, terms {derived.terms}")
