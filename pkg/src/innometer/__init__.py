"""Innovation indicators from search-query evidence.

Build a combinatorial family of queries from a marker term and key terms,
observe hit and interest counts across engines, normalize them into
novelty and relevance indicators, and fuse evidence from independent
engines with belief functions.  A small genetic evolver refines the key
terms against a document corpus.
"""

__version__ = "0.1.0"

from .corpus import (
    CorpusDocument,
    ObservationCache,
    ObservationSeries,
    OfflineCorpus,
    RecordedEngine,
    RemoteEngine,
    default_cache_dir,
    load_corpus_jsonl,
    load_engine_config,
    observe_series,
)
from .errors import (
    ConfigError,
    EvidenceError,
    InnometerError,
    PatternError,
    SourceError,
    TotalConflictError,
    UndefinedStatisticError,
    UnsupportedKindError,
    UnusablePatternError,
)
from .evidence import (
    FusionResult,
    MassAssignment,
    base_probability,
    belief,
    combine,
    conflict,
    discount,
    plausibility,
    vacuous,
)
from .evolver import (
    Component,
    EvolvedModel,
    EvolverConfig,
    QueryGenotype,
    derive_model_pattern,
    evolve,
)
from .indicators import (
    IndicatorReport,
    IntervalGrouping,
    IntervalPartition,
    NormalizedSeries,
    bin_count,
    build_report,
    cohort_stats,
    group_by_interval,
    make_partition,
    normalize_count,
    normalize_series,
    novelty,
    relevance,
)
from .pattern import (
    Query,
    SearchPattern,
    count_queries,
    enumerate_queries,
    load_pattern,
    parse_pattern,
    render_query,
)

__all__ = [
    "__version__",
    "CorpusDocument",
    "ObservationCache",
    "ObservationSeries",
    "OfflineCorpus",
    "RecordedEngine",
    "RemoteEngine",
    "default_cache_dir",
    "load_corpus_jsonl",
    "load_engine_config",
    "observe_series",
    "ConfigError",
    "EvidenceError",
    "InnometerError",
    "PatternError",
    "SourceError",
    "TotalConflictError",
    "UndefinedStatisticError",
    "UnsupportedKindError",
    "UnusablePatternError",
    "FusionResult",
    "MassAssignment",
    "base_probability",
    "belief",
    "combine",
    "conflict",
    "discount",
    "plausibility",
    "vacuous",
    "Component",
    "EvolvedModel",
    "EvolverConfig",
    "QueryGenotype",
    "derive_model_pattern",
    "evolve",
    "IndicatorReport",
    "IntervalGrouping",
    "IntervalPartition",
    "NormalizedSeries",
    "bin_count",
    "build_report",
    "cohort_stats",
    "group_by_interval",
    "make_partition",
    "normalize_count",
    "normalize_series",
    "novelty",
    "relevance",
    "Query",
    "SearchPattern",
    "count_queries",
    "enumerate_queries",
    "load_pattern",
    "parse_pattern",
    "render_query",
]
