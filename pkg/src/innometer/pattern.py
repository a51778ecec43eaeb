"""Search patterns and deterministic combinatorial query enumeration.

A pattern describes the object under assessment as one marker term plus up
to twelve key terms.  Every nonempty subset of the key terms, always with
the marker in front, is one query.  Queries are numbered 1..S in a fixed
order (ascending subset size, then lexicographic by sorted term indices),
so query k means the same thing on every machine and every run.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

from .errors import ConfigError, PatternError

MAX_TERMS = 12

DIALECTS = ("plain", "conjunctive")

_WHITESPACE = re.compile(r"\s")


def _fold(text: str) -> str:
    """Case-fold and collapse runs of whitespace, for comparisons."""
    return " ".join(text.casefold().split())


def _quote(token: str) -> str:
    return f'"{token}"' if _WHITESPACE.search(token) else token


def render_tokens(tokens: list[str], dialect: str = "plain") -> str:
    """Join already-ordered query tokens, double-quoting multiword ones."""
    if dialect not in DIALECTS:
        raise ConfigError(f"unknown query dialect {dialect!r}; expected one of {', '.join(DIALECTS)}")
    rendered = [_quote(t) for t in tokens]
    separator = " AND " if dialect == "conjunctive" else " "
    return separator.join(rendered)


@dataclass(frozen=True)
class SearchPattern:
    """Linguistic model of an object: marker plus N key terms.

    Terms are meaningful strings (single words or multiword phrases) and
    must be pairwise distinct after case folding; the marker may not be one
    of the terms.  ``synonyms`` maps a term to alternative wordings and is
    only consulted by the query evolver.
    """

    marker: str
    terms: tuple[str, ...]
    synonyms: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "synonyms", {k: tuple(v) for k, v in self.synonyms.items()})
        if not self.marker or not self.marker.strip():
            raise PatternError("marker: must be a nonempty word or phrase")
        n = len(self.terms)
        if not 1 <= n <= MAX_TERMS:
            raise PatternError(f"terms: expected between 1 and {MAX_TERMS} key terms, got {n}")
        folded = []
        for term in self.terms:
            if not term or not term.strip():
                raise PatternError("terms: terms must be nonempty")
            f = _fold(term)
            if f in folded:
                raise PatternError(f"terms: duplicate term {term!r} after case folding")
            folded.append(f)
        if _fold(self.marker) in folded:
            raise PatternError(f"marker: {self.marker!r} also appears among the terms")
        for head, alts in self.synonyms.items():
            if head not in self.terms:
                raise PatternError(f"synonyms: key {head!r} is not one of the pattern terms")
            for alt in alts:
                if not alt or not alt.strip():
                    raise PatternError(f"synonyms: empty synonym under {head!r}")
                if _fold(alt) == _fold(head):
                    raise PatternError(f"synonyms: {head!r} lists itself as a synonym")

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    def digest(self) -> str:
        """Stable hex digest of the pattern content, for manifests and caches."""
        canonical = json.dumps(
            {
                "marker": self.marker,
                "terms": list(self.terms),
                "synonyms": {k: list(v) for k, v in sorted(self.synonyms.items())},
            },
            sort_keys=True,
            ensure_ascii=False,
        )
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class Query:
    """One enumerated query: its 1-based index and the term indices it uses."""

    index: int
    term_subset: frozenset[int]


def count_queries(n_terms: int) -> int:
    """Number of queries a pattern with ``n_terms`` key terms generates.

    Equals the number of nonempty term subsets, 2**N - 1.
    """
    if not 1 <= n_terms <= MAX_TERMS:
        raise PatternError(f"term count must be within [1, {MAX_TERMS}], got {n_terms}")
    return 2**n_terms - 1


def enumerate_queries(pattern: SearchPattern) -> list[Query]:
    """All queries of the pattern in their canonical order.

    Subsets are emitted by ascending size and, within one size, in
    lexicographic order of their sorted term indices, matching what
    ``itertools.combinations`` yields.
    """
    n = pattern.n_terms
    queries = []
    k = 0
    for size in range(1, n + 1):
        for combo in combinations(range(1, n + 1), size):
            k += 1
            queries.append(Query(index=k, term_subset=frozenset(combo)))
    return queries


def render_query(query: Query, pattern: SearchPattern, dialect: str = "plain") -> str:
    """Render one query as an engine-ready string, marker first."""
    n = pattern.n_terms
    if not query.term_subset:
        raise PatternError(f"query {query.index}: empty term subset")
    for i in query.term_subset:
        if not 1 <= i <= n:
            raise PatternError(f"query {query.index}: term index {i} outside [1, {n}]")
    tokens = [pattern.marker] + [pattern.terms[i - 1] for i in sorted(query.term_subset)]
    return render_tokens(tokens, dialect)


def render_marker(pattern: SearchPattern, dialect: str = "plain") -> str:
    """Render the baseline marker-only query."""
    return render_tokens([pattern.marker], dialect)


def parse_pattern(text: str) -> SearchPattern:
    """Parse a pattern from its JSON form: {marker, terms, synonyms?}."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PatternError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise PatternError("pattern file must contain a JSON object")
    unknown = set(raw) - {"marker", "terms", "synonyms"}
    if unknown:
        raise PatternError(f"unknown pattern field(s): {', '.join(sorted(unknown))}")
    marker = raw.get("marker")
    if not isinstance(marker, str):
        raise PatternError("marker: expected a string")
    terms = raw.get("terms")
    if not isinstance(terms, list) or not all(isinstance(t, str) for t in terms):
        raise PatternError("terms: expected a list of strings")
    synonyms_raw = raw.get("synonyms", {})
    if not isinstance(synonyms_raw, dict):
        raise PatternError("synonyms: expected an object mapping term to a list of strings")
    synonyms: dict[str, tuple[str, ...]] = {}
    for head, alts in synonyms_raw.items():
        if not isinstance(alts, list) or not all(isinstance(a, str) for a in alts):
            raise PatternError(f"synonyms: value under {head!r} must be a list of strings")
        synonyms[head] = tuple(alts)
    return SearchPattern(marker=marker, terms=tuple(terms), synonyms=synonyms)


def load_pattern(path: str | Path) -> SearchPattern:
    """Read and parse a pattern JSON file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise PatternError(f"cannot read pattern file {path}: {exc}") from exc
    return parse_pattern(text)
