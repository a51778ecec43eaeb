"""Command-line front end: assess, combine, evolve, trend.

Every run embeds a manifest (inputs, flags, seed, tool version) in the
reports it writes, and identical inputs produce byte-identical outputs.
The timestamp honors SOURCE_DATE_EPOCH so replays can match exactly.
Exit codes: 0 success, 2 bad input or configuration, 3 source failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import re
import sys
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .corpus import (
    ObservationCache,
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
    UndefinedStatisticError,
    UnusablePatternError,
)
from .evidence import FusionResult, base_probability, combine, discount
from .evolver import EvolverConfig, derive_model_pattern, evolve
from .indicators import (
    IndicatorReport,
    IntervalGrouping,
    build_report,
    cohort_stats,
    novelty,
    relevance,
    report_csv_rows,
    report_to_json_dict,
)
from .pattern import SearchPattern, load_pattern

FORMATS = ("table", "json", "csv")


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch:
        moment = datetime.fromtimestamp(int(epoch), tz=timezone.utc)
    else:
        moment = datetime.now(tz=timezone.utc)
    return moment.isoformat(timespec="seconds")


@dataclass(frozen=True)
class RunManifest:
    """What produced a report: command, inputs, flags, seed, version, when."""

    command: str
    version: str
    pattern_digests: tuple[str, ...]
    engine_ids: tuple[str, ...]
    kind: str | None = None
    mode: str | None = None
    partition_strategy: str | None = None
    year_filter: int | None = None
    discounts: tuple[tuple[str, float], ...] = ()
    discount_style: str | None = None
    seed: int | None = None
    timestamp: str = ""

    def to_json_dict(self) -> dict:
        return {
            "command": self.command,
            "version": self.version,
            "pattern_digests": list(self.pattern_digests),
            "engine_ids": list(self.engine_ids),
            "kind": self.kind,
            "mode": self.mode,
            "partition_strategy": self.partition_strategy,
            "year_filter": self.year_filter,
            "discounts": {engine: alpha for engine, alpha in self.discounts},
            "discount_style": self.discount_style,
            "seed": self.seed,
            "timestamp": self.timestamp,
        }


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Pearson correlation of two equal-length series.

    Raises :class:`UndefinedStatisticError` for fewer than two pairs or a
    zero-variance series, instead of quietly returning NaN.
    """
    if len(xs) != len(ys):
        raise UndefinedStatisticError(f"series lengths differ: {len(xs)} vs {len(ys)}")
    n = len(xs)
    if n < 2:
        raise UndefinedStatisticError("need at least two paired observations")
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    dx = [x - mean_x for x in xs]
    dy = [y - mean_y for y in ys]
    var_x = sum(d * d for d in dx)
    var_y = sum(d * d for d in dy)
    if var_x == 0.0 or var_y == 0.0:
        raise UndefinedStatisticError("a series has zero variance; correlation is undefined")
    r = sum(a * b for a, b in zip(dx, dy)) / math.sqrt(var_x * var_y)
    return min(max(r, -1.0), 1.0)


@dataclass(frozen=True)
class TrendSeries:
    """Yearly novelty and relevance, with linear fits and their correlation.

    Missing observations (zero marker hits, or no interest baseline) are
    None, never zero.  Fits need at least two observed years; the
    correlation additionally needs variance in both series.
    """

    years: tuple[int, ...]
    nv_values: tuple[float | None, ...]
    rl_values: tuple[float | None, ...]
    nv_fit: tuple[float, float] | None
    rl_fit: tuple[float, float] | None
    pearson_r: float | None

    def to_json_dict(self) -> dict:
        def fit_dict(fit):
            return None if fit is None else {"slope": fit[0], "intercept": fit[1]}

        return {
            "years": list(self.years),
            "nv": list(self.nv_values),
            "rl": list(self.rl_values),
            "nv_fit": fit_dict(self.nv_fit),
            "rl_fit": fit_dict(self.rl_fit),
            "pearson_r": self.pearson_r,
        }

    def to_csv_rows(self) -> list[list]:
        rows: list[list] = [["year", "nv", "rl"]]
        for year, nv, rl in zip(self.years, self.nv_values, self.rl_values):
            rows.append([year, "" if nv is None else nv, "" if rl is None else rl])
        return rows


def _linear_fit(years: Sequence[int], values: Sequence[float | None]) -> tuple[float, float] | None:
    points = [(y, v) for y, v in zip(years, values) if v is not None]
    if len(points) < 2:
        return None
    xs = np.array([p[0] for p in points], dtype=float)
    ys = np.array([p[1] for p in points], dtype=float)
    slope, intercept = np.polyfit(xs, ys, 1)
    return float(slope), float(intercept)


def fit_trend(
    years: Sequence[int],
    nv_values: Sequence[float | None],
    rl_values: Sequence[float | None],
) -> TrendSeries:
    """Assemble a trend from per-year indicator values."""
    paired = [(nv, rl) for nv, rl in zip(nv_values, rl_values) if nv is not None and rl is not None]
    try:
        r = pearson([p[0] for p in paired], [p[1] for p in paired])
    except UndefinedStatisticError:
        r = None
    return TrendSeries(
        years=tuple(years),
        nv_values=tuple(nv_values),
        rl_values=tuple(rl_values),
        nv_fit=_linear_fit(years, nv_values),
        rl_fit=_linear_fit(years, rl_values),
        pearson_r=r,
    )


def trend_series(
    source,
    pattern: SearchPattern,
    year_from: int,
    year_to: int,
    mode: str = "saturating",
    cache: ObservationCache | None = None,
) -> TrendSeries:
    """Observe the pattern year by year and fit the indicator trends."""
    if year_from > year_to:
        raise ConfigError(f"empty year range: {year_from}..{year_to}")
    years = list(range(year_from, year_to + 1))
    nv_values: list[float | None] = []
    rl_values: list[float | None] = []
    for year in years:
        hits = observe_series(source, pattern, kind="hits", year_filter=year, cache=cache)
        try:
            nv_values.append(novelty(hits, mode))
        except UnusablePatternError:
            nv_values.append(None)
        if getattr(source, "supports_interest", False):
            interest = observe_series(source, pattern, kind="interest", year_filter=year, cache=cache)
            try:
                rl_values.append(relevance(interest, mode))
            except UnusablePatternError:
                rl_values.append(None)
        else:
            rl_values.append(None)
    return fit_trend(years, nv_values, rl_values)


def _safe_name(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "_", name) or "unnamed"


def _read_json(path: str | Path) -> dict:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    return raw


def _write_json(path: Path, doc: dict) -> None:
    path.write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def _write_csv(path: Path, rows: list[list]) -> None:
    with path.open("w", encoding="utf-8", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)


def _print_csv(rows: list[list]) -> None:
    csv.writer(sys.stdout, lineterminator="\n").writerows(rows)


def _out_dir(args) -> Path | None:
    if args.out is None:
        return None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _build_engines(args) -> list:
    engines = []
    if getattr(args, "corpus", None):
        engines.append(load_corpus_jsonl(args.corpus))
    for engine_path in getattr(args, "engine", None) or []:
        engines.append(load_engine_config(engine_path))
    if not engines:
        raise ConfigError("no evidence source; give --corpus and/or --engine")
    return engines


def _report_doc(manifest: RunManifest, pattern_path: Path, pattern: SearchPattern, report: IndicatorReport) -> dict:
    return {
        "manifest": manifest.to_json_dict(),
        "pattern": {
            "file": pattern_path.name,
            "marker": pattern.marker,
            "terms": list(pattern.terms),
            "digest": pattern.digest(),
        },
        "report": report_to_json_dict(report),
    }


def _print_assess_table(pattern_path: Path, report: IndicatorReport) -> None:
    name = "Nv" if report.kind == "novelty" else "Rl"
    print(
        f"pattern {pattern_path.stem}  engine {report.engine_id}  kind {report.kind}"
        + (f"  year {report.year_filter}" if report.year_filter is not None else "")
    )
    print(f"  S = {report.grouping.frame_size} queries, baseline = {report.baseline}, mode = {report.series.mode}")
    width = max(len(label) for label in report.partition.labels)
    print(f"  {'interval':<{width + 4}} {'q_k':>4} {'m(A_k)':>7}")
    for i, group in enumerate(report.grouping.groups):
        label = f"{i + 1} {report.partition.labels[i]}"
        mass = len(group) / report.grouping.frame_size
        print(f"  {label:<{width + 4}} {len(group):>4} {mass:>7.2f}")
    print(f"  {name} = {report.value:.2f}   p({report.kind}) = {report.probability:.2f}")


def cmd_assess(args) -> int:
    patterns = [(Path(p), load_pattern(p)) for p in args.patterns]
    engines = _build_engines(args)
    kinds = ("novelty", "relevance") if args.kind == "both" else (args.kind,)
    cache = ObservationCache(default_cache_dir())
    manifest = RunManifest(
        command="assess",
        version=__version__,
        pattern_digests=tuple(p.digest() for _, p in patterns),
        engine_ids=tuple(e.engine_id for e in engines),
        kind=args.kind,
        mode=args.mode,
        partition_strategy=args.partition,
        year_filter=args.year,
        seed=args.seed,
        timestamp=_timestamp(),
    )
    produced: list[tuple[Path, SearchPattern, IndicatorReport]] = []
    for path, pattern in patterns:
        for engine in engines:
            for kind in kinds:
                series_kind = "hits" if kind == "novelty" else "interest"
                series = observe_series(
                    engine, pattern, kind=series_kind, year_filter=args.year, cache=cache
                )
                produced.append((path, pattern, build_report(series, mode=args.mode, strategy=args.partition)))
    summary = None
    if len(patterns) > 1:
        cohorts = []
        for engine in engines:
            for kind in kinds:
                values = [
                    r.value
                    for _, _, r in produced
                    if r.engine_id == engine.engine_id and r.kind == kind
                ]
                mean, std = cohort_stats(values)
                cohorts.append(
                    {
                        "engine_id": engine.engine_id,
                        "kind": kind,
                        "count": len(values),
                        "mean": mean,
                        "std": std,
                    }
                )
        summary = {"manifest": manifest.to_json_dict(), "cohort": cohorts}
    out = _out_dir(args)
    if out is not None:
        for path, pattern, report in produced:
            stem = f"assess_{_safe_name(path.stem)}_{_safe_name(report.engine_id)}_{report.kind}"
            _write_json(out / f"{stem}.json", _report_doc(manifest, path, pattern, report))
            _write_csv(out / f"{stem}.csv", report_csv_rows(report))
        if summary is not None:
            _write_json(out / "assess_summary.json", summary)
    if args.format == "json":
        doc = {
            "manifest": manifest.to_json_dict(),
            "reports": [_report_doc(manifest, p, pat, r) for p, pat, r in produced],
        }
        if summary is not None:
            doc["summary"] = summary["cohort"]
        print(json.dumps(doc, indent=2, ensure_ascii=False))
    elif args.format == "csv":
        rows: list[list] = [["pattern", "engine", "kind", "k", "raw", "normalized", "interval"]]
        for path, _, report in produced:
            for row in report_csv_rows(report)[1:]:
                rows.append([path.stem, report.engine_id, report.kind, *row])
        _print_csv(rows)
    else:
        for i, (path, _, report) in enumerate(produced):
            if i:
                print()
            _print_assess_table(path, report)
        if summary is not None:
            print()
            for row in summary["cohort"]:
                print(
                    f"cohort {row['engine_id']} {row['kind']}: n = {row['count']}, "
                    f"mean = {row['mean']:.2f}, std = {row['std']:.2f}"
                )
    return 0


def _grouping_from_report(report: dict) -> IntervalGrouping:
    rows = sorted(report["intervals"], key=lambda r: r["interval"])
    groups = tuple(frozenset(r["queries"]) for r in rows)
    return IntervalGrouping(groups=groups, frame_size=int(report["frame_size"]))


def _parse_alphas(items: Sequence[str], known: set[str]) -> dict[str, float]:
    alphas: dict[str, float] = {}
    for item in items or []:
        if "=" not in item:
            raise ConfigError(f"--alpha expects ENGINE=VALUE, got {item!r}")
        engine, _, value = item.partition("=")
        if engine not in known:
            raise ConfigError(f"--alpha names unknown engine {engine!r}; reports are from {sorted(known)}")
        if engine in alphas:
            raise ConfigError(f"--alpha given twice for engine {engine!r}")
        try:
            alphas[engine] = float(value)
        except ValueError as exc:
            raise ConfigError(f"--alpha {item!r}: not a number") from exc
    return alphas


def cmd_combine(args) -> int:
    doc_a = _read_json(args.reports[0])
    doc_b = _read_json(args.reports[1])
    for name, doc in ((args.reports[0], doc_a), (args.reports[1], doc_b)):
        if "report" not in doc:
            raise ConfigError(f"{name}: not an assessment report")
    rep_a, rep_b = doc_a["report"], doc_b["report"]
    kind = rep_a["kind"]
    if rep_b["kind"] != kind:
        raise ConfigError(f"reports measure different indicators: {kind} vs {rep_b['kind']}")
    if rep_a["frame_size"] != rep_b["frame_size"]:
        raise ConfigError(
            f"reports cover different query frames: S = {rep_a['frame_size']} vs {rep_b['frame_size']}"
        )
    if rep_a["partition"]["boundaries"] != rep_b["partition"]["boundaries"]:
        raise ConfigError("reports use different interval partitions")
    id_a, id_b = rep_a["engine_id"], rep_b["engine_id"]
    if id_a == id_b:
        raise ConfigError(f"both reports come from engine {id_a!r}; nothing independent to fuse")
    alphas = _parse_alphas(args.alpha, {id_a, id_b})
    m_a = base_probability(_grouping_from_report(rep_a), origin=id_a)
    m_b = base_probability(_grouping_from_report(rep_b), origin=id_b)
    m_a = discount(m_a, alphas.get(id_a, 0.0), style=args.style)
    m_b = discount(m_b, alphas.get(id_b, 0.0), style=args.style)
    fused: FusionResult = combine(m_a, m_b)
    probability = None
    if fused.interval_masses is not None:
        half = len(fused.interval_masses) // 2
        if kind == "novelty":
            probability = fused.belief_lower_half
        else:
            probability = sum(fused.interval_masses[len(fused.interval_masses) - half :])
    manifest = RunManifest(
        command="combine",
        version=__version__,
        pattern_digests=tuple(
            d.get("pattern", {}).get("digest", "") for d in (doc_a, doc_b)
        ),
        engine_ids=(id_a, id_b),
        kind=kind,
        discounts=tuple(sorted(alphas.items())),
        discount_style=args.style,
        seed=args.seed,
        timestamp=_timestamp(),
    )
    doc = {
        "manifest": manifest.to_json_dict(),
        "kind": kind,
        "frame_size": rep_a["frame_size"],
        "inputs": [
            {"engine_id": id_a, "alpha": alphas.get(id_a, 0.0)},
            {"engine_id": id_b, "alpha": alphas.get(id_b, 0.0)},
        ],
        "partition": rep_a["partition"],
        "conflict": fused.conflict,
        "interval_masses": None if fused.interval_masses is None else list(fused.interval_masses),
        "probability": probability,
        "combined": fused.combined.to_json_dict(),
    }
    csv_rows: list[list] = [["interval", "mass"]]
    if fused.interval_masses is not None:
        for i, mass in enumerate(fused.interval_masses, start=1):
            csv_rows.append([i, mass])
    out = _out_dir(args)
    if out is not None:
        _write_json(out / "fusion.json", doc)
        _write_csv(out / "fusion.csv", csv_rows)
    if args.format == "json":
        print(json.dumps(doc, indent=2, ensure_ascii=False))
    elif args.format == "csv":
        _print_csv(csv_rows)
    else:
        print(f"fusing {id_a} + {id_b}  kind {kind}  S = {rep_a['frame_size']}")
        print(f"  conflict K = {fused.conflict:.4f}")
        if fused.interval_masses is not None:
            labels = rep_a["partition"]["labels"]
            width = max(len(label) for label in labels)
            print(f"  {'interval':<{width + 4}} {'m12(A_k)':>9}")
            for i, mass in enumerate(fused.interval_masses):
                print(f"  {i + 1} {labels[i]:<{width + 2}} {mass:>9.2f}")
        if probability is not None:
            print(f"  p({kind}) = {probability:.2f}")
        else:
            print(f"  p({kind}) unavailable: interval projection was lost in discounting")
    return 0


def cmd_evolve(args) -> int:
    reference = load_pattern(args.reference)
    if not getattr(args, "corpus", None):
        raise ConfigError("evolve needs --corpus: a document source with result texts")
    corpus = load_corpus_jsonl(args.corpus)
    config = EvolverConfig.from_dict(_read_json(args.config))
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    model = evolve(reference.terms, reference.synonyms, corpus, config)
    derived = derive_model_pattern(
        model, reference.marker, config.model_terms or config.population_size
    )
    manifest = RunManifest(
        command="evolve",
        version=__version__,
        pattern_digests=(reference.digest(),),
        engine_ids=(corpus.engine_id,),
        seed=config.seed,
        timestamp=_timestamp(),
    )
    model_doc = {
        "manifest": manifest.to_json_dict(),
        "reference": {"marker": reference.marker, "terms": list(reference.terms)},
        "config": {
            "population_size": config.population_size,
            "weights": list(config.weights),
            "crossover": config.crossover,
            "mutation_prob": config.mutation_prob,
            "elite_fraction": config.elite_fraction,
            "stability_epsilon": config.stability_epsilon,
            "stability_generations": config.stability_generations,
            "max_generations": config.max_generations,
            "seed": config.seed,
            "results_per_query": config.results_per_query,
            "model_terms": config.model_terms,
        },
        "model": model.to_json_dict(),
    }
    pattern_doc = {
        "marker": derived.marker,
        "terms": list(derived.terms),
        "synonyms": {},
    }
    out = _out_dir(args)
    if out is not None:
        _write_json(out / "model.json", model_doc)
        _write_json(out / "evolved_pattern.json", pattern_doc)
    if args.format == "json":
        print(json.dumps({**model_doc, "derived_pattern": pattern_doc}, indent=2, ensure_ascii=False))
    elif args.format == "csv":
        rows: list[list] = [["term", "weight"]]
        rows.extend([term, weight] for term, weight in model.terms.items())
        _print_csv(rows)
    else:
        print(
            f"evolved {len(model.queries)} surviving queries in {model.generations} "
            f"generations ({model.terminated_by}), best fitness {model.history[-1]:.4f}"
        )
        width = max(len(t) for t in model.terms)
        print(f"  {'term':<{width + 2}} weight")
        for term, weight in model.terms.items():
            print(f"  {term:<{width + 2}} {weight}")
        print(f"derived pattern: {derived.marker} + {len(derived.terms)} terms")
    return 0


def cmd_trend(args) -> int:
    pattern = load_pattern(args.pattern)
    engines = _build_engines(args)
    if len(engines) != 1:
        raise ConfigError("trend reads exactly one source; give --corpus or one --engine")
    source = engines[0]
    cache = ObservationCache(default_cache_dir())
    trend = trend_series(
        source, pattern, args.year_from, args.year_to, mode=args.mode, cache=cache
    )
    manifest = RunManifest(
        command="trend",
        version=__version__,
        pattern_digests=(pattern.digest(),),
        engine_ids=(source.engine_id,),
        mode=args.mode,
        seed=args.seed,
        timestamp=_timestamp(),
    )
    doc = {
        "manifest": manifest.to_json_dict(),
        "pattern": {"marker": pattern.marker, "terms": list(pattern.terms), "digest": pattern.digest()},
        "year_from": args.year_from,
        "year_to": args.year_to,
        "trend": trend.to_json_dict(),
    }
    out = _out_dir(args)
    if out is not None:
        _write_json(out / "trend.json", doc)
        _write_csv(out / "trend.csv", trend.to_csv_rows())
    if args.format == "json":
        print(json.dumps(doc, indent=2, ensure_ascii=False))
    elif args.format == "csv":
        _print_csv(trend.to_csv_rows())
    else:
        print(f"trend for {pattern.marker!r} on {source.engine_id}, {args.year_from}..{args.year_to}")
        print(f"  {'year':<6} {'Nv':>8} {'Rl':>8}")
        for year, nv, rl in zip(trend.years, trend.nv_values, trend.rl_values):
            nv_text = "   -" if nv is None else f"{nv:.2f}"
            rl_text = "   -" if rl is None else f"{rl:.2f}"
            print(f"  {year:<6} {nv_text:>8} {rl_text:>8}")
        for name, fit in (("Nv", trend.nv_fit), ("Rl", trend.rl_fit)):
            if fit is None:
                print(f"  {name} fit: not enough observed years")
            else:
                print(f"  {name} fit: slope {fit[0]:+.4f} per year, intercept {fit[1]:.2f}")
        if trend.pearson_r is None:
            print("  corr(Nv, Rl): undefined")
        else:
            print(f"  corr(Nv, Rl) = {trend.pearson_r:.2f}")
    return 0


def _add_shared(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--engine", action="append", metavar="CONFIG.json", help="engine config file; repeatable")
    sub.add_argument("--corpus", metavar="CORPUS.jsonl", help="offline document corpus")
    sub.add_argument("--mode", choices=("saturating", "verbatim"), default="saturating", help="count normalization mode")
    sub.add_argument("--partition", choices=("equal", "quantile"), default="equal", help="interval partition strategy")
    sub.add_argument("--kind", choices=("novelty", "relevance", "both"), default="novelty", help="which indicator to compute")
    sub.add_argument("--year", type=int, default=None, help="restrict observations to one publication year")
    sub.add_argument("--seed", type=int, default=None, help="random seed (evolve; recorded in manifests)")
    sub.add_argument("--out", metavar="DIR", default=None, help="directory for JSON/CSV reports")
    sub.add_argument("--format", choices=FORMATS, default="table", help="stdout format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="innometer",
        description="Assess how novel and how relevant an object is from search-query evidence.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    p_assess = subparsers.add_parser("assess", help="observe a pattern and report indicators")
    p_assess.add_argument("patterns", nargs="+", metavar="PATTERN.json")
    _add_shared(p_assess)
    p_assess.set_defaults(func=cmd_assess)

    p_combine = subparsers.add_parser("combine", help="fuse two assessment reports")
    p_combine.add_argument("reports", nargs=2, metavar="REPORT.json")
    p_combine.add_argument(
        "--alpha", action="append", metavar="ENGINE=A", help="discount factor for one engine; repeatable"
    )
    p_combine.add_argument(
        "--style", choices=("paper", "shafer"), default="paper", help="where discounted mass goes"
    )
    _add_shared(p_combine)
    p_combine.set_defaults(func=cmd_combine)

    p_evolve = subparsers.add_parser("evolve", help="evolve a linguistic model from reference terms")
    p_evolve.add_argument("reference", metavar="REFERENCE.json")
    p_evolve.add_argument("--config", required=True, metavar="CONFIG.json", help="evolver configuration")
    _add_shared(p_evolve)
    p_evolve.set_defaults(func=cmd_evolve)

    p_trend = subparsers.add_parser("trend", help="indicator trend over a span of years")
    p_trend.add_argument("pattern", metavar="PATTERN.json")
    p_trend.add_argument("--from", dest="year_from", type=int, required=True, metavar="YEAR")
    p_trend.add_argument("--to", dest="year_to", type=int, required=True, metavar="YEAR")
    _add_shared(p_trend)
    p_trend.set_defaults(func=cmd_trend)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (PatternError, ConfigError, EvidenceError, UndefinedStatisticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SourceError as exc:
        tag = f" [{exc.engine_id}]" if exc.engine_id else ""
        print(f"source error{tag}: {exc}", file=sys.stderr)
        return 3
    except InnometerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    raise SystemExit(main())
