import json
import math
import subprocess
import sys

import pytest

from innometer.cli import fit_trend, main, pearson, trend_series
from innometer.corpus import load_corpus_jsonl
from innometer.errors import ConfigError, UndefinedStatisticError
from innometer.pattern import load_pattern


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def frozen_clock(monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")


# --- pearson and trend fitting (plain functions) ---------------------------


def test_pearson_hand_value():
    assert pearson((1, 2, 3), (1, 3, 2)) == pytest.approx(0.5, abs=1e-9)
    assert pearson((1, 2, 3), (2, 4, 6)) == pytest.approx(1.0)
    assert pearson((1, 2, 3), (6, 4, 2)) == pytest.approx(-1.0)


def test_pearson_refuses_degenerate_input():
    with pytest.raises(UndefinedStatisticError):
        pearson((1, 2), (1, 2, 3))
    with pytest.raises(UndefinedStatisticError):
        pearson((1,), (2,))
    with pytest.raises(UndefinedStatisticError):
        pearson((1, 1, 1), (1, 2, 3))


def test_fit_trend_skips_missing_years():
    trend = fit_trend([2000, 2001, 2002], [None, 0.4, 0.2], [0.1, None, 0.3])
    assert trend.nv_fit == pytest.approx((-0.2, 400.6), abs=1e-6)
    assert trend.pearson_r is None  # only one fully observed year
    assert trend.to_csv_rows()[1] == [2000, "", 0.1]


def test_trend_series_rejects_empty_range(fixtures):
    corpus = load_corpus_jsonl(fixtures / "corpus_trend.jsonl")
    pattern = load_pattern(fixtures / "pattern_trend.json")
    with pytest.raises(ConfigError, match="empty year range"):
        trend_series(corpus, pattern, 2004, 2000)


# --- assess ------------------------------------------------------------------


def test_assess_table_output(capsys, fixtures):
    code, out, err = run_cli(
        capsys,
        "assess",
        str(fixtures / "pattern_eye.json"),
        "--engine",
        str(fixtures / "engine_se1.json"),
    )
    assert code == 0 and err == ""
    assert "engine se1" in out
    assert "S = 15 queries, baseline = 100" in out
    assert "0.20" in out and "0.27" in out and "0.47" in out and "0.07" in out
    assert "Nv = 0.51   p(novelty) = 0.47" in out


def test_assess_json_output(capsys, fixtures):
    code, out, _ = run_cli(
        capsys,
        "assess",
        str(fixtures / "pattern_eye.json"),
        "--engine",
        str(fixtures / "engine_se2.json"),
        "--format",
        "json",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["manifest"]["command"] == "assess"
    assert doc["manifest"]["engine_ids"] == ["se2"]
    report = doc["reports"][0]["report"]
    masses = [row["mass"] for row in report["intervals"]]
    assert masses == pytest.approx([0.4, 0.4, 1 / 15, 2 / 15])
    assert report["probability"] == pytest.approx(0.8)


def test_assess_csv_output(capsys, fixtures):
    code, out, _ = run_cli(
        capsys,
        "assess",
        str(fixtures / "pattern_eye.json"),
        "--engine",
        str(fixtures / "engine_se1.json"),
        "--format",
        "csv",
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "pattern,engine,kind,k,raw,normalized,interval"
    assert len(lines) == 16
    assert lines[1].startswith("pattern_eye,se1,novelty,1,10,")


def test_assess_both_kinds_against_corpus(capsys, fixtures):
    code, out, _ = run_cli(
        capsys,
        "assess",
        str(fixtures / "pattern_trend.json"),
        "--corpus",
        str(fixtures / "corpus_trend.jsonl"),
        "--kind",
        "both",
        "--year",
        "2002",
        "--format",
        "json",
    )
    assert code == 0
    doc = json.loads(out)
    by_kind = {r["report"]["kind"]: r["report"] for r in doc["reports"]}
    assert by_kind["novelty"]["indicator"]["value"] == pytest.approx(math.exp(-0.5), abs=1e-12)
    assert by_kind["relevance"]["indicator"]["value"] == pytest.approx(1 - math.exp(-10 / 15), abs=1e-12)
    assert by_kind["novelty"]["year_filter"] == 2002


def test_assess_cohort_summary(capsys, fixtures, tmp_path):
    sub = tmp_path / "pattern_sub.json"
    sub.write_text(json.dumps({"marker": "eye", "terms": ["optic nerve", "treatment"]}))
    out_dir = tmp_path / "out"
    code, out, _ = run_cli(
        capsys,
        "assess",
        str(fixtures / "pattern_eye.json"),
        str(sub),
        "--engine",
        str(fixtures / "engine_se1.json"),
        "--out",
        str(out_dir),
    )
    assert code == 0
    assert "cohort se1 novelty: n = 2," in out
    summary = json.loads((out_dir / "assess_summary.json").read_text())
    assert summary["cohort"][0]["count"] == 2
    assert 0.0 <= summary["cohort"][0]["std"] <= 1.0
    written = sorted(p.name for p in out_dir.iterdir())
    assert "assess_pattern_eye_se1_novelty.json" in written
    assert "assess_pattern_sub_se1_novelty.csv" in written


def test_assess_outputs_are_byte_identical_across_runs(capsys, fixtures, tmp_path, frozen_clock):
    def run_once(name):
        out_dir = tmp_path / name
        code, _, _ = run_cli(
            capsys,
            "assess",
            str(fixtures / "pattern_eye.json"),
            "--engine",
            str(fixtures / "engine_se1.json"),
            "--out",
            str(out_dir),
        )
        assert code == 0
        return {p.name: p.read_bytes() for p in out_dir.iterdir()}

    assert run_once("first") == run_once("second")


def test_assess_needs_a_source(capsys, fixtures):
    code, _, err = run_cli(capsys, "assess", str(fixtures / "pattern_eye.json"))
    assert code == 2
    assert "error: no evidence source" in err


def test_assess_missing_pattern_file(capsys, tmp_path):
    code, _, err = run_cli(
        capsys, "assess", str(tmp_path / "nope.json"), "--corpus", str(tmp_path / "c.jsonl")
    )
    assert code == 2
    assert err.startswith("error:")


def test_assess_unrecorded_queries_exit_3(capsys, fixtures):
    code, _, err = run_cli(
        capsys,
        "assess",
        str(fixtures / "pattern_blockchain.json"),
        "--engine",
        str(fixtures / "engine_se1.json"),
    )
    assert code == 3
    assert err.startswith("source error [se1]:")
    assert "query 0" in err  # the baseline probe is the first to fail


def test_assess_zero_baseline_exit_3(capsys, tmp_path):
    pattern = tmp_path / "p.json"
    pattern.write_text(json.dumps({"marker": "m", "terms": ["a", "b"]}))
    engine = tmp_path / "e.json"
    engine.write_text(
        json.dumps(
            {
                "kind": "recorded",
                "engine_id": "dead",
                "hits": {"m": 0, "m a": 1, "m b": 0, "m a b": 0},
            }
        )
    )
    code, _, err = run_cli(capsys, "assess", str(pattern), "--engine", str(engine))
    assert code == 3
    assert err.startswith("source error")
    assert "marker-only query" in err


def test_unknown_flag_exits_2(capsys, fixtures):
    code, _, err = run_cli(
        capsys, "assess", str(fixtures / "pattern_eye.json"), "--bogus"
    )
    assert code == 2
    assert "usage:" in err


# --- combine ---------------------------------------------------------------------


@pytest.fixture
def fused_inputs(capsys, fixtures, tmp_path, frozen_clock):
    paths = []
    for engine in ("engine_se1.json", "engine_se2.json"):
        out_dir = tmp_path / engine.removesuffix(".json")
        code, _, _ = run_cli(
            capsys,
            "assess",
            str(fixtures / "pattern_eye.json"),
            "--engine",
            str(fixtures / engine),
            "--out",
            str(out_dir),
        )
        assert code == 0
        paths.append(next(out_dir.glob("assess_*.json")))
    return paths


def test_combine_table_and_files(capsys, tmp_path, fused_inputs):
    out_dir = tmp_path / "fused"
    code, out, _ = run_cli(
        capsys, "combine", *map(str, fused_inputs), "--out", str(out_dir)
    )
    assert code == 0
    assert "conflict K = 0.2311" in out
    assert "p(novelty) = 0.48" in out
    doc = json.loads((out_dir / "fusion.json").read_text())
    assert doc["conflict"] == pytest.approx(52 / 225, abs=1e-12)
    assert doc["interval_masses"] == pytest.approx([27 / 173, 56 / 173, 84 / 173, 6 / 173])
    assert doc["probability"] == pytest.approx(83 / 173, abs=1e-12)
    csv_lines = (out_dir / "fusion.csv").read_text().splitlines()
    assert csv_lines[0] == "interval,mass"
    assert len(csv_lines) == 5


def test_combine_with_discount(capsys, tmp_path, fused_inputs):
    out_dir = tmp_path / "fused-alpha"
    code, out, _ = run_cli(
        capsys,
        "combine",
        *map(str, fused_inputs),
        "--alpha",
        "se2=0.2",
        "--out",
        str(out_dir),
    )
    assert code == 0
    doc = json.loads((out_dir / "fusion.json").read_text())
    assert doc["conflict"] == pytest.approx(41.6 / 225, abs=1e-12)
    assert doc["probability"] == pytest.approx(0.36205, abs=5e-4)
    assert doc["manifest"]["discounts"] == {"se2": 0.2}
    assert sum(doc["interval_masses"]) < 1.0  # discounted mass leaves the frame


def test_combine_shafer_style_keeps_projection(capsys, fused_inputs):
    code, out, _ = run_cli(
        capsys, "combine", *map(str, fused_inputs), "--alpha", "se2=0.2", "--style", "shafer"
    )
    assert code == 0
    assert "conflict K = 0.1849" in out
    assert "p(novelty) = " in out


def test_combine_is_byte_identical_across_runs(capsys, tmp_path, fused_inputs):
    blobs = []
    for name in ("one", "two"):
        out_dir = tmp_path / name
        code, _, _ = run_cli(
            capsys, "combine", *map(str, fused_inputs), "--out", str(out_dir)
        )
        assert code == 0
        blobs.append({p.name: p.read_bytes() for p in out_dir.iterdir()})
    assert blobs[0] == blobs[1]


def test_combine_rejects_same_engine(capsys, fused_inputs):
    code, _, err = run_cli(capsys, "combine", str(fused_inputs[0]), str(fused_inputs[0]))
    assert code == 2
    assert "nothing independent to fuse" in err


def test_combine_rejects_kind_mismatch(capsys, tmp_path, fused_inputs):
    doc = json.loads(fused_inputs[1].read_text())
    doc["report"]["kind"] = "relevance"
    twisted = tmp_path / "twisted.json"
    twisted.write_text(json.dumps(doc))
    code, _, err = run_cli(capsys, "combine", str(fused_inputs[0]), str(twisted))
    assert code == 2
    assert "different indicators" in err


def test_combine_rejects_frame_mismatch(capsys, tmp_path, fused_inputs):
    doc = json.loads(fused_inputs[1].read_text())
    doc["report"]["frame_size"] = 7
    twisted = tmp_path / "twisted.json"
    twisted.write_text(json.dumps(doc))
    code, _, err = run_cli(capsys, "combine", str(fused_inputs[0]), str(twisted))
    assert code == 2
    assert "different query frames" in err


def test_combine_rejects_non_report_json(capsys, tmp_path, fused_inputs):
    other = tmp_path / "other.json"
    other.write_text("{}")
    code, _, err = run_cli(capsys, "combine", str(fused_inputs[0]), str(other))
    assert code == 2
    assert "not an assessment report" in err


@pytest.mark.parametrize(
    "alpha",
    ["se2", "mystery=0.2", "se2=abc"],
    ids=["no-equals", "unknown-engine", "not-a-number"],
)
def test_combine_rejects_bad_alpha(capsys, fused_inputs, alpha):
    code, _, err = run_cli(
        capsys, "combine", *map(str, fused_inputs), "--alpha", alpha
    )
    assert code == 2
    assert "--alpha" in err


def test_combine_rejects_duplicate_alpha(capsys, fused_inputs):
    code, _, err = run_cli(
        capsys, "combine", *map(str, fused_inputs), "--alpha", "se2=0.1", "--alpha", "se2=0.2"
    )
    assert code == 2
    assert "twice" in err


# --- evolve ----------------------------------------------------------------------


def test_evolve_writes_model_and_pattern(capsys, fixtures, tmp_path, frozen_clock):
    out_dir = tmp_path / "evolved"
    code, out, _ = run_cli(
        capsys,
        "evolve",
        str(fixtures / "reference_dominance.json"),
        "--corpus",
        str(fixtures / "corpus_dominance.jsonl"),
        "--config",
        str(fixtures / "evolver_config.json"),
        "--out",
        str(out_dir),
    )
    assert code == 0
    assert "stability" in out
    model = json.loads((out_dir / "model.json").read_text())
    assert model["model"]["terms"] == {"nitride": 2, "plasma": 2}
    assert model["manifest"]["seed"] == 279
    derived = load_pattern(out_dir / "evolved_pattern.json")
    assert derived.marker == "coating"
    assert set(derived.terms) == {"nitride", "plasma"}


def test_evolve_seed_flag_overrides_config(capsys, fixtures, tmp_path):
    out_dir = tmp_path / "seeded"
    code, _, _ = run_cli(
        capsys,
        "evolve",
        str(fixtures / "reference_dominance.json"),
        "--corpus",
        str(fixtures / "corpus_dominance.jsonl"),
        "--config",
        str(fixtures / "evolver_config.json"),
        "--seed",
        "7",
        "--out",
        str(out_dir),
    )
    assert code == 0
    model = json.loads((out_dir / "model.json").read_text())
    assert model["manifest"]["seed"] == 7
    assert model["config"]["seed"] == 7


def test_evolve_csv_lists_term_weights(capsys, fixtures):
    code, out, _ = run_cli(
        capsys,
        "evolve",
        str(fixtures / "reference_dominance.json"),
        "--corpus",
        str(fixtures / "corpus_dominance.jsonl"),
        "--config",
        str(fixtures / "evolver_config.json"),
        "--format",
        "csv",
    )
    assert code == 0
    assert out.splitlines() == ["term,weight", "nitride,2", "plasma,2"]


def test_evolve_requires_corpus(capsys, fixtures):
    code, _, err = run_cli(
        capsys,
        "evolve",
        str(fixtures / "reference_dominance.json"),
        "--config",
        str(fixtures / "evolver_config.json"),
    )
    assert code == 2
    assert "evolve needs --corpus" in err


# --- trend -----------------------------------------------------------------------


def test_trend_full_run(capsys, fixtures, tmp_path, frozen_clock):
    out_dir = tmp_path / "trend"
    code, out, _ = run_cli(
        capsys,
        "trend",
        str(fixtures / "pattern_trend.json"),
        "--corpus",
        str(fixtures / "corpus_trend.jsonl"),
        "--from",
        "1999",
        "--to",
        "2004",
        "--out",
        str(out_dir),
    )
    assert code == 0
    blank_year = next(line for line in out.splitlines() if line.lstrip().startswith("1999"))
    assert blank_year.split() == ["1999", "-", "-"]
    assert "slope -0." in out and "slope +0." in out
    doc = json.loads((out_dir / "trend.json").read_text())
    trend = doc["trend"]
    assert trend["years"] == list(range(1999, 2005))
    assert trend["nv"][0] is None and trend["rl"][0] is None
    expected_nv = [math.exp(-t / 10) for t in (1, 3, 5, 7, 9)]
    expected_rl = [1 - math.exp(-2 * t / (10 + t)) for t in (1, 3, 5, 7, 9)]
    assert trend["nv"][1:] == pytest.approx(expected_nv, abs=1e-12)
    assert trend["rl"][1:] == pytest.approx(expected_rl, abs=1e-12)
    assert trend["nv_fit"]["slope"] < 0 < trend["rl_fit"]["slope"]
    assert trend["pearson_r"] == pytest.approx(-0.99, abs=0.01)
    csv_lines = (out_dir / "trend.csv").read_text().splitlines()
    assert csv_lines[0] == "year,nv,rl"
    assert csv_lines[1] == "1999,,"
    assert len(csv_lines) == 7


def test_trend_is_byte_identical_across_runs(capsys, fixtures, tmp_path, frozen_clock):
    blobs = []
    for name in ("one", "two"):
        out_dir = tmp_path / name
        code, _, _ = run_cli(
            capsys,
            "trend",
            str(fixtures / "pattern_trend.json"),
            "--corpus",
            str(fixtures / "corpus_trend.jsonl"),
            "--from",
            "2000",
            "--to",
            "2004",
            "--out",
            str(out_dir),
        )
        assert code == 0
        blobs.append({p.name: p.read_bytes() for p in out_dir.iterdir()})
    assert blobs[0] == blobs[1]


def test_trend_rejects_reversed_range(capsys, fixtures):
    code, _, err = run_cli(
        capsys,
        "trend",
        str(fixtures / "pattern_trend.json"),
        "--corpus",
        str(fixtures / "corpus_trend.jsonl"),
        "--from",
        "2004",
        "--to",
        "2000",
    )
    assert code == 2
    assert "empty year range" in err


def test_trend_wants_exactly_one_source(capsys, fixtures):
    code, _, err = run_cli(
        capsys,
        "trend",
        str(fixtures / "pattern_trend.json"),
        "--corpus",
        str(fixtures / "corpus_trend.jsonl"),
        "--engine",
        str(fixtures / "engine_se1.json"),
        "--from",
        "2000",
        "--to",
        "2004",
    )
    assert code == 2
    assert "exactly one source" in err


# --- packaging glue ---------------------------------------------------------------


def test_version_flag_exits_zero(capsys):
    code, out, _ = run_cli(capsys, "--version")
    assert code == 0
    assert out.startswith("innometer ")


def test_module_entrypoint_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "innometer", "--version"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("innometer ")
