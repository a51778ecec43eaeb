"""Evidence sources and query observation.

Three source types answer "how many documents match this query":

* :class:`OfflineCorpus` - an in-memory JSONL document collection with
  deterministic conjunctive containment matching.  Counts here are
  monotone: adding a term can only shrink the match set.
* :class:`RecordedEngine` - a table of previously measured counts keyed by
  the rendered query string.  This is the offline stand-in for remote
  engines, whose reported totals are estimates and need not be monotone.
* :class:`RemoteEngine` - a minimal HTTP connector driven by a URL template
  and a dot-path into the JSON response.  Never contacted unless an engine
  config explicitly selects it.

:func:`observe_series` runs the marker-only baseline plus all S queries of
a pattern against one source and returns the ordered count vector, with
optional on-disk caching so an assessment can be replayed byte for byte.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence
from urllib.parse import quote_plus

import httpx

from .errors import ConfigError, SourceError, UnsupportedKindError
from .pattern import Query, SearchPattern, enumerate_queries, render_tokens

YEAR_MIN = 1900
YEAR_MAX = 2100

KINDS = ("hits", "interest")


def _fold_text(text: str) -> str:
    return " ".join(text.casefold().split())


@dataclass(frozen=True)
class CorpusDocument:
    """One document: stable id, publication year, text, and an interest score.

    ``interest`` is a nonnegative engagement signal (views, citations,
    whatever the fixture recorded); it defaults to zero.
    """

    id: str
    year: int
    text: str
    interest: int = 0


@dataclass(frozen=True)
class ObservationSeries:
    """Counts for one (source, pattern, kind, year filter) observation.

    ``values[k-1]`` is the count for query k; ``baseline`` is the count for
    the marker-only query.
    """

    engine_id: str
    kind: str
    baseline: int
    values: tuple[int, ...]
    year_filter: int | None = None

    def to_json_dict(self) -> dict:
        return {
            "engine_id": self.engine_id,
            "kind": self.kind,
            "baseline": self.baseline,
            "values": list(self.values),
            "year_filter": self.year_filter,
        }

    @classmethod
    def from_json_dict(cls, raw: dict) -> "ObservationSeries":
        return cls(
            engine_id=raw["engine_id"],
            kind=raw["kind"],
            baseline=int(raw["baseline"]),
            values=tuple(int(v) for v in raw["values"]),
            year_filter=raw.get("year_filter"),
        )


class OfflineCorpus:
    """Deterministic document collection with conjunctive matching.

    A document matches a query when its whitespace-normalized, case-folded
    text contains every query token as a contiguous substring, so multiword
    phrases match exactly as written.  A year filter keeps only documents
    whose year equals the filter.
    """

    supports_interest = True

    def __init__(self, documents: Sequence[CorpusDocument], engine_id: str | None = None):
        seen: set[str] = set()
        for doc in documents:
            if not doc.id:
                raise ConfigError("corpus document with empty id")
            if doc.id in seen:
                raise ConfigError(f"duplicate corpus document id {doc.id!r}")
            seen.add(doc.id)
            if not YEAR_MIN <= doc.year <= YEAR_MAX:
                raise ConfigError(f"document {doc.id!r}: year {doc.year} outside [{YEAR_MIN}, {YEAR_MAX}]")
            if doc.interest < 0:
                raise ConfigError(f"document {doc.id!r}: negative interest {doc.interest}")
        self.documents = tuple(documents)
        self._folded = tuple(_fold_text(d.text) for d in self.documents)
        if engine_id is None:
            body = "\n".join(f"{d.id}\t{d.year}\t{d.interest}\t{d.text}" for d in self.documents)
            engine_id = "corpus-" + hashlib.sha256(body.encode("utf-8")).hexdigest()[:12]
        self.engine_id = engine_id

    @classmethod
    def from_jsonl(cls, path: str | Path, engine_id: str | None = None) -> "OfflineCorpus":
        path = Path(path)
        try:
            lines = path.read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise ConfigError(f"cannot read corpus file {path}: {exc}") from exc
        documents = []
        for lineno, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}:{lineno}: invalid JSON: {exc.msg}") from exc
            if not isinstance(raw, dict):
                raise ConfigError(f"{path}:{lineno}: expected a JSON object per line")
            for name, kind_ in (("id", str), ("year", int), ("text", str)):
                if name not in raw:
                    raise ConfigError(f"{path}:{lineno}: missing field {name!r}")
                if not isinstance(raw[name], kind_) or isinstance(raw[name], bool):
                    raise ConfigError(f"{path}:{lineno}: field {name!r} must be {kind_.__name__}")
            interest = raw.get("interest", 0)
            if not isinstance(interest, int) or isinstance(interest, bool):
                raise ConfigError(f"{path}:{lineno}: field 'interest' must be an integer")
            if not YEAR_MIN <= raw["year"] <= YEAR_MAX:
                raise ConfigError(
                    f"{path}:{lineno}: year {raw['year']} outside [{YEAR_MIN}, {YEAR_MAX}]"
                )
            if interest < 0:
                raise ConfigError(f"{path}:{lineno}: negative interest {interest}")
            documents.append(
                CorpusDocument(id=raw["id"], year=raw["year"], text=raw["text"], interest=interest)
            )
        corpus = cls.__new__(cls)
        OfflineCorpus.__init__(corpus, documents, engine_id=engine_id)
        return corpus

    def _match_indices(self, tokens: Sequence[str], year: int | None) -> Iterable[int]:
        needles = [_fold_text(t) for t in tokens]
        for i, folded in enumerate(self._folded):
            if year is not None and self.documents[i].year != year:
                continue
            if all(n in folded for n in needles):
                yield i

    def count_hits(self, tokens: Sequence[str], year: int | None = None) -> int:
        return sum(1 for _ in self._match_indices(tokens, year))

    def count_interest(self, tokens: Sequence[str], year: int | None = None) -> int:
        return sum(self.documents[i].interest for i in self._match_indices(tokens, year))

    def search(self, tokens: Sequence[str], limit: int | None = None, year: int | None = None) -> list[CorpusDocument]:
        """Matching documents in corpus order, optionally truncated to ``limit``."""
        out = []
        for i in self._match_indices(tokens, year):
            out.append(self.documents[i])
            if limit is not None and len(out) >= limit:
                break
        return out


class RecordedEngine:
    """Replays previously measured counts from a JSON table.

    Table keys are rendered plain-dialect queries (marker first), so a
    recorded fixture is human-readable and diffs cleanly.  Optional per-year
    tables live under ``by_year``.  Missing entries raise
    :class:`SourceError`, never zero: a recording that lacks a query is a
    broken recording, not an empty result.
    """

    def __init__(
        self,
        engine_id: str,
        hits: dict[str, int] | None = None,
        interest: dict[str, int] | None = None,
        by_year: dict[str, dict] | None = None,
    ):
        if not engine_id:
            raise ConfigError("recorded engine needs a nonempty engine_id")
        self.engine_id = engine_id
        self._hits = dict(hits or {})
        self._interest = dict(interest or {})
        self._by_year = {str(y): dict(tables) for y, tables in (by_year or {}).items()}

    @classmethod
    def from_dict(cls, raw: dict) -> "RecordedEngine":
        return cls(
            engine_id=raw.get("engine_id", ""),
            hits=raw.get("hits"),
            interest=raw.get("interest"),
            by_year=raw.get("by_year"),
        )

    @property
    def supports_interest(self) -> bool:
        if self._interest:
            return True
        return any("interest" in tables for tables in self._by_year.values())

    def _lookup(self, kind: str, tokens: Sequence[str], year: int | None) -> int:
        key = render_tokens(list(tokens), "plain")
        if year is None:
            table = self._hits if kind == "hits" else self._interest
        else:
            year_tables = self._by_year.get(str(year))
            if year_tables is None:
                raise SourceError(
                    f"no recorded counts for year {year}", engine_id=self.engine_id
                )
            table = year_tables.get(kind, {})
        if key not in table:
            raise SourceError(
                f"no recorded {kind} count for query: {key}", engine_id=self.engine_id
            )
        return int(table[key])

    def count_hits(self, tokens: Sequence[str], year: int | None = None) -> int:
        return self._lookup("hits", tokens, year)

    def count_interest(self, tokens: Sequence[str], year: int | None = None) -> int:
        if not self.supports_interest:
            raise UnsupportedKindError(f"engine {self.engine_id!r} recorded no interest counts")
        return self._lookup("interest", tokens, year)


class RemoteEngine:
    """Generic hit-count HTTP connector.

    The URL template carries ``{query}`` and optionally ``{year}``
    placeholders; ``count_path`` is a dot-separated path into the JSON
    response (list indices allowed as bare digits).  Timeouts, transport
    failures, and unparseable responses all surface as :class:`SourceError`
    tagged with the engine id.
    """

    supports_interest = False

    def __init__(
        self,
        engine_id: str,
        url_template: str,
        count_path: str,
        timeout_ms: int = 5000,
        transport: httpx.BaseTransport | None = None,
    ):
        if not engine_id:
            raise ConfigError("remote engine needs a nonempty engine_id")
        if "{query}" not in url_template:
            raise ConfigError(f"engine {engine_id!r}: url_template has no {{query}} placeholder")
        if not count_path:
            raise ConfigError(f"engine {engine_id!r}: empty count_path")
        if timeout_ms <= 0:
            raise ConfigError(f"engine {engine_id!r}: timeout_ms must be positive")
        self.engine_id = engine_id
        self.url_template = url_template
        self.count_path = count_path
        self.timeout_ms = timeout_ms
        self._transport = transport

    @classmethod
    def from_dict(cls, raw: dict, transport: httpx.BaseTransport | None = None) -> "RemoteEngine":
        return cls(
            engine_id=raw.get("engine_id", ""),
            url_template=raw.get("url_template", ""),
            count_path=raw.get("count_path", ""),
            timeout_ms=int(raw.get("timeout_ms", 5000)),
            transport=transport,
        )

    def _dig(self, payload, path: str):
        node = payload
        for part in path.split("."):
            if isinstance(node, dict) and part in node:
                node = node[part]
            elif isinstance(node, list) and part.isdigit() and int(part) < len(node):
                node = node[int(part)]
            else:
                raise SourceError(
                    f"count_path {path!r} not found in response", engine_id=self.engine_id
                )
        return node

    def count_hits(self, tokens: Sequence[str], year: int | None = None) -> int:
        rendered = render_tokens(list(tokens), "plain")
        url = self.url_template.replace("{query}", quote_plus(rendered))
        url = url.replace("{year}", "" if year is None else str(year))
        try:
            with httpx.Client(transport=self._transport, timeout=self.timeout_ms / 1000.0) as client:
                response = client.get(url)
                response.raise_for_status()
                payload = response.json()
        except httpx.HTTPError as exc:
            raise SourceError(f"request failed: {exc}", engine_id=self.engine_id) from exc
        except ValueError as exc:
            raise SourceError(f"response is not JSON: {exc}", engine_id=self.engine_id) from exc
        value = self._dig(payload, self.count_path)
        try:
            count = int(value)
        except (TypeError, ValueError) as exc:
            raise SourceError(
                f"count at {self.count_path!r} is not an integer: {value!r}",
                engine_id=self.engine_id,
            ) from exc
        if count < 0:
            raise SourceError(f"negative count {count}", engine_id=self.engine_id)
        return count

    def count_interest(self, tokens: Sequence[str], year: int | None = None) -> int:
        raise UnsupportedKindError(f"engine {self.engine_id!r} measures hit counts only")


def load_corpus_jsonl(path: str | Path, engine_id: str | None = None) -> OfflineCorpus:
    """Load an offline corpus from a JSONL fixture file."""
    return OfflineCorpus.from_jsonl(path, engine_id=engine_id)


def load_engine_config(path: str | Path) -> OfflineCorpus | RecordedEngine | RemoteEngine:
    """Build an engine from a JSON config file.

    Dispatch honors an explicit ``kind`` field ("corpus" | "recorded" |
    "remote") and otherwise sniffs the shape: a ``url_template`` means
    remote, count tables mean recorded, a ``path`` means corpus.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read engine config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: engine config must be a JSON object")
    kind = raw.get("kind")
    if kind is None:
        if "url_template" in raw:
            kind = "remote"
        elif "hits" in raw or "interest" in raw or "by_year" in raw:
            kind = "recorded"
        elif "path" in raw:
            kind = "corpus"
        else:
            raise ConfigError(f"{path}: cannot tell the engine kind; add a 'kind' field")
    if kind == "remote":
        return RemoteEngine.from_dict(raw)
    if kind == "recorded":
        return RecordedEngine.from_dict(raw)
    if kind == "corpus":
        corpus_path = Path(raw.get("path", ""))
        if not corpus_path.is_absolute():
            corpus_path = path.parent / corpus_path
        return OfflineCorpus.from_jsonl(corpus_path, engine_id=raw.get("engine_id"))
    raise ConfigError(f"{path}: unknown engine kind {kind!r}")


def _query_tokens(pattern: SearchPattern, query: Query) -> list[str]:
    return [pattern.marker] + [pattern.terms[i - 1] for i in sorted(query.term_subset)]


def hit_count(source, query: Query, pattern: SearchPattern, year_filter: int | None = None) -> int:
    """Documents matching the marker plus the query's terms."""
    return source.count_hits(_query_tokens(pattern, query), year_filter)


def marker_count(source, pattern: SearchPattern, year_filter: int | None = None) -> int:
    """Documents matching the marker alone: the scaling baseline."""
    return source.count_hits([pattern.marker], year_filter)


def interest_count(source, query: Query, pattern: SearchPattern, year_filter: int | None = None) -> int:
    """Summed interest of the documents matching the query."""
    if not getattr(source, "supports_interest", False):
        raise UnsupportedKindError(
            f"engine {getattr(source, 'engine_id', '?')!r} has no interest signal"
        )
    return source.count_interest(_query_tokens(pattern, query), year_filter)


def default_cache_dir() -> Path:
    """Cache directory: $INNOMETER_CACHE_DIR, else ~/.cache/innometer."""
    override = os.environ.get("INNOMETER_CACHE_DIR")
    if override:
        return Path(override).expanduser()
    return Path.home() / ".cache" / "innometer"


class ObservationCache:
    """Content-addressed store of observed series, one JSON file per key.

    The file name is the digest of the key (engine id, pattern digest,
    kind, year filter), so distinct observations never collide and eviction
    is a manual ``rm``.  Writes are serialized; concurrent observers of the
    same key simply overwrite each other with identical content.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    @staticmethod
    def _key(engine_id: str, pattern_digest: str, kind: str, year_filter: int | None) -> dict:
        return {
            "engine_id": engine_id,
            "pattern_digest": pattern_digest,
            "kind": kind,
            "year_filter": year_filter,
        }

    def _path(self, key: dict) -> Path:
        canonical = json.dumps(key, sort_keys=True, ensure_ascii=False)
        return self.root / (hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:32] + ".json")

    def get(self, engine_id: str, pattern_digest: str, kind: str, year_filter: int | None) -> ObservationSeries | None:
        path = self._path(self._key(engine_id, pattern_digest, kind, year_filter))
        if not path.exists():
            return None
        raw = json.loads(path.read_text(encoding="utf-8"))
        return ObservationSeries.from_json_dict(raw["series"])

    def put(self, pattern_digest: str, series: ObservationSeries) -> None:
        key = self._key(series.engine_id, pattern_digest, series.kind, series.year_filter)
        payload = json.dumps({"key": key, "series": series.to_json_dict()}, indent=2) + "\n"
        with self._lock:
            self._path(key).write_text(payload, encoding="utf-8")


def observe_series(
    source,
    pattern: SearchPattern,
    kind: str = "hits",
    year_filter: int | None = None,
    cache: ObservationCache | None = None,
    parallelism: int = 1,
) -> ObservationSeries:
    """Observe the baseline and all S query counts for one pattern.

    Results come back in query order regardless of ``parallelism``.  Source
    failures are re-raised annotated with the failing query index (0 means
    the marker-only baseline).  When a cache is given, a cached series is
    returned without touching the source, and fresh observations are stored.
    """
    if kind not in KINDS:
        raise ConfigError(f"unknown observation kind {kind!r}; expected one of {', '.join(KINDS)}")
    if parallelism < 1:
        raise ConfigError(f"parallelism must be >= 1, got {parallelism}")
    engine_id = getattr(source, "engine_id", "")
    digest = pattern.digest()
    if cache is not None:
        cached = cache.get(engine_id, digest, kind, year_filter)
        if cached is not None:
            return cached
    if kind == "interest" and not getattr(source, "supports_interest", False):
        raise UnsupportedKindError(f"engine {engine_id!r} has no interest signal")
    count = source.count_hits if kind == "hits" else source.count_interest

    def observe_one(index: int, tokens: list[str]) -> int:
        try:
            return count(tokens, year_filter)
        except SourceError as exc:
            raise SourceError(
                f"query {index}: {exc}", engine_id=engine_id, query_index=index
            ) from exc

    baseline = observe_one(0, [pattern.marker])
    queries = enumerate_queries(pattern)
    jobs = [(q.index, _query_tokens(pattern, q)) for q in queries]
    if parallelism == 1 or len(jobs) < 2:
        values = [observe_one(i, tokens) for i, tokens in jobs]
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            values = list(pool.map(lambda job: observe_one(*job), jobs))
    series = ObservationSeries(
        engine_id=engine_id,
        kind=kind,
        baseline=baseline,
        values=tuple(values),
        year_filter=year_filter,
    )
    if cache is not None:
        cache.put(digest, series)
    return series
