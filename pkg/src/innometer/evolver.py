"""Evolutionary construction of an object's linguistic model.

Starting from a reference vocabulary K (candidate terms, optionally with
synonym sets), a small population of conjunctive queries is evolved against
a document source.  A query is fit when its results rank well, recur in the
other queries' results, and read like the reference vocabulary.  The elite
survivors become the model: a weighted term multiset where a term's weight
is the number of surviving queries that use it.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import ConfigError, PatternError
from .pattern import MAX_TERMS, SearchPattern

CROSSOVER_KINDS = ("one_point", "two_point", "none")


def _fold(text: str) -> str:
    return " ".join(text.casefold().split())


@dataclass(frozen=True)
class Component:
    """One genotype slot: the current term and the synonym pool it can swap within."""

    term: str
    synonyms: tuple[str, ...] = ()


@dataclass(frozen=True)
class QueryGenotype:
    """An ordered, duplicate-free list of components forming one conjunctive query."""

    components: tuple[Component, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise ConfigError("a genotype needs at least one component")

    @property
    def terms(self) -> tuple[str, ...]:
        return tuple(c.term for c in self.components)


def _dedup(components: Sequence[Component]) -> tuple[Component, ...]:
    """Drop later components whose term repeats an earlier one (case-folded)."""
    seen: set[str] = set()
    out = []
    for c in components:
        f = _fold(c.term)
        if f in seen:
            continue
        seen.add(f)
        out.append(c)
    return tuple(out)


@dataclass(frozen=True)
class EvolverConfig:
    """Knobs of the evolutionary run.

    ``weights`` orders the fitness components (rank quality, genericity
    across queries, similarity to the reference vocabulary).
    ``model_terms`` caps how many top-weight terms the derived pattern
    keeps; when unset the population size is used.
    """

    population_size: int
    weights: tuple[float, float, float] = (0.4, 0.2, 0.4)
    crossover: str = "one_point"
    mutation_prob: float = 0.1
    elite_fraction: float = 0.25
    stability_epsilon: float = 1e-6
    stability_generations: int = 3
    max_generations: int = 50
    seed: int = 0
    results_per_query: int = 10
    model_terms: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if self.population_size < 2:
            raise ConfigError(f"population_size must be >= 2, got {self.population_size}")
        if len(self.weights) != 3 or any(w < 0 for w in self.weights):
            raise ConfigError("weights must be three nonnegative numbers")
        if self.crossover not in CROSSOVER_KINDS:
            raise ConfigError(
                f"unknown crossover kind {self.crossover!r}; expected one of {', '.join(CROSSOVER_KINDS)}"
            )
        if not 0.0 <= self.mutation_prob <= 1.0:
            raise ConfigError(f"mutation_prob must be within [0, 1], got {self.mutation_prob}")
        if not 0.0 < self.elite_fraction <= 1.0:
            raise ConfigError(f"elite_fraction must be within (0, 1], got {self.elite_fraction}")
        if self.stability_epsilon <= 0.0:
            raise ConfigError("stability_epsilon must be positive")
        if self.stability_generations < 1:
            raise ConfigError("stability_generations must be >= 1")
        if self.max_generations < 1:
            raise ConfigError("max_generations must be >= 1")
        if self.results_per_query < 1:
            raise ConfigError("results_per_query must be >= 1")
        if self.model_terms is not None and self.model_terms < 1:
            raise ConfigError("model_terms must be >= 1 when given")

    @classmethod
    def from_dict(cls, raw: dict) -> "EvolverConfig":
        known = {
            "population_size",
            "weights",
            "crossover",
            "mutation_prob",
            "elite_fraction",
            "stability_epsilon",
            "stability_generations",
            "max_generations",
            "seed",
            "results_per_query",
            "model_terms",
        }
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown evolver config field(s): {', '.join(sorted(unknown))}")
        if "population_size" not in raw:
            raise ConfigError("evolver config needs population_size")
        kwargs = dict(raw)
        if "weights" in kwargs:
            kwargs["weights"] = tuple(kwargs["weights"])
        return cls(**kwargs)


def _elite_count(config: EvolverConfig) -> int:
    return min(config.population_size, max(1, math.ceil(config.elite_fraction * config.population_size)))


def init_population(
    reference_terms: Sequence[str],
    synonyms: Mapping[str, Sequence[str]],
    config: EvolverConfig,
    rng: random.Random,
) -> list[QueryGenotype]:
    """Sample the initial population from the reference vocabulary.

    Each genotype gets a uniform length in [2, min(6, |K|)] and distinct
    terms drawn uniformly from K.  The population must stay below half the
    vocabulary size so that crossover partners can actually differ.
    """
    terms = tuple(reference_terms)
    if len(terms) < 3:
        raise ConfigError(f"need at least 3 reference terms, got {len(terms)}")
    if config.population_size >= len(terms) / 2:
        raise ConfigError(
            f"population_size {config.population_size} must be below half the "
            f"vocabulary size ({len(terms)} terms)"
        )
    population = []
    top = min(6, len(terms))
    for _ in range(config.population_size):
        length = rng.randint(2, top)
        chosen = rng.sample(terms, length)
        components = tuple(
            Component(term=t, synonyms=tuple(synonyms.get(t, ()))) for t in chosen
        )
        population.append(QueryGenotype(components=components))
    return population


def _one_point(a: QueryGenotype, b: QueryGenotype, cut: int) -> tuple[QueryGenotype, QueryGenotype]:
    ca = _dedup(a.components[:cut] + b.components[cut:])
    cb = _dedup(b.components[:cut] + a.components[cut:])
    return QueryGenotype(ca), QueryGenotype(cb)


def _two_point(a: QueryGenotype, b: QueryGenotype, i: int, j: int) -> tuple[QueryGenotype, QueryGenotype]:
    ca = _dedup(a.components[:i] + b.components[i:j] + a.components[j:])
    cb = _dedup(b.components[:i] + a.components[i:j] + b.components[j:])
    return QueryGenotype(ca), QueryGenotype(cb)


def crossover(
    parent_a: QueryGenotype,
    parent_b: QueryGenotype,
    kind: str = "one_point",
    rng: random.Random | None = None,
) -> tuple[QueryGenotype, QueryGenotype]:
    """Recombine two parents; parents shorter than two components pass through.

    One-point swaps suffixes behind a random cut, two-point swaps a random
    middle slice; children drop duplicated terms (later copies lose).
    """
    if kind == "none":
        return parent_a, parent_b
    if kind not in CROSSOVER_KINDS:
        raise ConfigError(f"unknown crossover kind {kind!r}")
    if len(parent_a.components) < 2 or len(parent_b.components) < 2:
        return parent_a, parent_b
    if rng is None:
        rng = random.Random()
    shorter = min(len(parent_a.components), len(parent_b.components))
    if kind == "one_point":
        cut = rng.randint(1, shorter - 1) if shorter > 1 else 0
        return _one_point(parent_a, parent_b, cut)
    i = rng.randint(0, shorter - 1)
    j = rng.randint(i + 1, shorter)
    return _two_point(parent_a, parent_b, i, j)


def mutate(genotype: QueryGenotype, mutation_prob: float, rng: random.Random) -> QueryGenotype:
    """Swap each component's term for one of its synonyms with probability p.

    Components without synonyms never change.  Duplicates a swap may create
    are dropped afterwards, keeping the genotype's terms distinct.
    """
    if not 0.0 <= mutation_prob <= 1.0:
        raise ConfigError(f"mutation_prob must be within [0, 1], got {mutation_prob}")
    out = []
    for comp in genotype.components:
        roll = rng.random()
        if comp.synonyms and roll < mutation_prob:
            out.append(Component(term=rng.choice(comp.synonyms), synonyms=comp.synonyms))
        else:
            out.append(comp)
    return QueryGenotype(_dedup(out))


def tokenize(text: str) -> list[str]:
    return text.casefold().split()


def term_vector(source: str | Sequence[str]) -> Counter:
    """Term-frequency vector over case-folded whitespace tokens."""
    if isinstance(source, str):
        return Counter(tokenize(source))
    counter: Counter = Counter()
    for item in source:
        counter.update(tokenize(item))
    return counter


def cosine_similarity(vec_a: Mapping[str, float], vec_b: Mapping[str, float]) -> float:
    """Cosine of two term-frequency vectors; zero when either is all-zero."""
    norm_a = math.sqrt(sum(v * v for v in vec_a.values()))
    norm_b = math.sqrt(sum(v * v for v in vec_b.values()))
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    dot = sum(v * vec_b.get(k, 0.0) for k, v in vec_a.items())
    return min(max(dot / (norm_a * norm_b), 0.0), 1.0)


def result_fitness(
    rank: int,
    result_id: str,
    other_results: Sequence[Sequence[str]],
    result_text: str,
    reference_terms: Sequence[str],
    weights: tuple[float, float, float],
    results_per_query: int,
) -> float:
    """Score one retrieved document for the query that retrieved it.

    Three ingredients: rank quality g (1 at the top, sliding down over the
    result window), genericity p (share of the other queries that also
    retrieved this document), and similarity s (cosine between the document
    text and the reference vocabulary).
    """
    if rank < 1:
        raise ValueError(f"rank must be >= 1, got {rank}")
    w_g, w_p, w_s = weights
    g = 1.0 - (rank - 1) / max(1, results_per_query - 1)
    p = sum(1 for ids in other_results if result_id in ids) / max(1, len(other_results))
    s = cosine_similarity(term_vector(result_text), term_vector(reference_terms))
    return w_g * g + w_p * p + w_s * s


def query_fitness(
    genotype: QueryGenotype,
    engine,
    config: EvolverConfig,
    reference_terms: Sequence[str],
    other_results: Sequence[Sequence[str]] = (),
    results=None,
) -> float:
    """Mean result fitness over the query's top results; zero when it finds nothing.

    ``results`` lets callers pass documents they already retrieved;
    otherwise the engine is searched for the genotype's terms.
    """
    if results is None:
        results = engine.search(list(genotype.terms), limit=config.results_per_query)
    if not results:
        return 0.0
    scores = [
        result_fitness(
            rank,
            doc.id,
            other_results,
            doc.text,
            reference_terms,
            config.weights,
            config.results_per_query,
        )
        for rank, doc in enumerate(results, start=1)
    ]
    return sum(scores) / len(scores)


@dataclass(frozen=True)
class EvolvedModel:
    """The surviving queries and the weighted term multiset they induce.

    ``terms`` maps term to the number of surviving queries using it,
    ordered by descending weight then lexicographically.  ``history`` holds
    the best fitness per generation, starting with the initial population.
    """

    terms: dict[str, int]
    queries: tuple[QueryGenotype, ...]
    fitness: tuple[float, ...]
    history: tuple[float, ...]
    generations: int
    terminated_by: str
    seed: int

    def to_json_dict(self) -> dict:
        return {
            "terms": dict(self.terms),
            "queries": [
                {"terms": list(q.terms), "fitness": f}
                for q, f in zip(self.queries, self.fitness)
            ],
            "history": list(self.history),
            "generations": self.generations,
            "terminated_by": self.terminated_by,
            "seed": self.seed,
        }


def model_weights(queries: Sequence[QueryGenotype]) -> dict[str, int]:
    """Term weights: in how many of the queries each term appears."""
    counts: dict[str, int] = {}
    for q in queries:
        for term in dict.fromkeys(q.terms):
            counts[term] = counts.get(term, 0) + 1
    return dict(sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])))


def _outbreed_partner(
    anchor_index: int, population: Sequence[QueryGenotype], order: Sequence[int]
) -> QueryGenotype:
    """The individual whose term set differs most from the anchor's.

    Distance is the size of the symmetric difference of term sets; ties go
    to the fitter candidate.  Pairing unlike parents keeps the small
    population from collapsing onto one term combination.
    """
    anchor_terms = set(population[anchor_index].terms)
    best_key = None
    best = None
    for position, idx in enumerate(order):
        if idx == anchor_index:
            continue
        distance = len(anchor_terms ^ set(population[idx].terms))
        key = (-distance, position)
        if best_key is None or key < best_key:
            best_key = key
            best = population[idx]
    return best if best is not None else population[anchor_index]


def evolve(
    reference_terms: Sequence[str],
    synonyms: Mapping[str, Sequence[str]],
    engine,
    config: EvolverConfig,
) -> EvolvedModel:
    """Run the generational loop and return the evolved model.

    Each generation carries the elite fraction over unchanged (genotype and
    recorded fitness), fills the rest with mutated crossover children of
    outbred parent pairs, and re-scores newcomers in the context of the
    current population.  A genotype's fitness is computed once, at first
    appearance, which keeps the best recorded fitness nondecreasing.  The
    loop stops once the best fitness has moved less than epsilon for the
    configured number of consecutive generations, or at the generation cap.
    With crossover "none" the non-elite slots carry over too, so a run with
    zero mutation probability is a fixed point.
    """
    terms = tuple(reference_terms)
    rng = random.Random(f"{config.seed}|init")
    population = init_population(terms, synonyms, config, rng)
    elite_n = _elite_count(config)

    result_cache: dict[tuple[str, ...], tuple] = {}
    fitness_memo: dict[tuple[str, ...], float] = {}

    def results_for(genotype: QueryGenotype):
        key = genotype.terms
        if key not in result_cache:
            result_cache[key] = tuple(
                engine.search(list(key), limit=config.results_per_query)
            )
        return result_cache[key]

    def evaluate(pop: Sequence[QueryGenotype]) -> list[float]:
        id_lists = [tuple(doc.id for doc in results_for(g)) for g in pop]
        scores = []
        for i, genotype in enumerate(pop):
            key = genotype.terms
            if key not in fitness_memo:
                others = [ids for j, ids in enumerate(id_lists) if j != i]
                fitness_memo[key] = query_fitness(
                    genotype,
                    engine,
                    config,
                    terms,
                    other_results=others,
                    results=results_for(genotype),
                )
            scores.append(fitness_memo[key])
        return scores

    fitness = evaluate(population)
    history = [max(fitness)]
    generations_run = 0
    terminated_by = "max_generations"
    stable = 0

    for gen in range(1, config.max_generations + 1):
        order = sorted(range(len(population)), key=lambda i: (-fitness[i], population[i].terms))
        survivors = [population[i] for i in order[:elite_n]]
        needed = len(population) - elite_n
        if config.crossover == "none":
            children = [population[i] for i in order[elite_n:]]
        else:
            children = []
            cursor = 0
            while len(children) < needed:
                anchor_index = order[cursor % len(order)]
                parent_a = population[anchor_index]
                parent_b = _outbreed_partner(anchor_index, population, order)
                pair_rng = random.Random(f"{config.seed}|x|{gen}|{cursor}")
                for child in crossover(parent_a, parent_b, config.crossover, pair_rng):
                    if len(children) < needed:
                        children.append(child)
                cursor += 1
        mutated = []
        for slot, child in enumerate(children):
            slot_rng = random.Random(f"{config.seed}|m|{gen}|{slot}")
            mutated.append(mutate(child, config.mutation_prob, slot_rng))
        population = survivors + mutated
        fitness = evaluate(population)
        best = max(fitness)
        history.append(best)
        generations_run = gen
        if abs(best - history[-2]) < config.stability_epsilon:
            stable += 1
        else:
            stable = 0
        if stable >= config.stability_generations:
            terminated_by = "stability"
            break

    final_order = sorted(range(len(population)), key=lambda i: (-fitness[i], population[i].terms))
    elite_idx = final_order[:elite_n]
    queries = tuple(population[i] for i in elite_idx)
    return EvolvedModel(
        terms=model_weights(queries),
        queries=queries,
        fitness=tuple(fitness[i] for i in elite_idx),
        history=tuple(history),
        generations=generations_run,
        terminated_by=terminated_by,
        seed=config.seed,
    )


def derive_model_pattern(model: EvolvedModel, marker: str, size: int) -> SearchPattern:
    """Turn the model's top-weight terms into a search pattern.

    Terms colliding with the marker are skipped; at most ``size`` (and
    never more than the pattern term cap) survive.
    """
    folded_marker = _fold(marker)
    chosen = []
    limit = min(size, MAX_TERMS)
    for term in model.terms:
        if _fold(term) == folded_marker:
            continue
        chosen.append(term)
        if len(chosen) >= limit:
            break
    if not chosen:
        raise PatternError("evolved model has no terms usable with this marker")
    return SearchPattern(marker=marker, terms=tuple(chosen), synonyms={})
