import json

import pytest

from lexrag.bundled import eval_samples_path, mini_corpus_path
from lexrag.service.cli import main


@pytest.fixture(scope="module")
def built_index(tmp_path_factory):
    out = tmp_path_factory.mktemp("cli-index")
    code = main([
        "ingest",
        "--corpus", str(mini_corpus_path()),
        "--out", str(out),
        "--dim", "256",
    ])
    assert code == 0
    return out


class TestIngestAndQuery:
    def test_ingest_summary_reports_counts(self, tmp_path, capsys):
        out = tmp_path / "fresh-index"
        code = main([
            "ingest", "--corpus", str(mini_corpus_path()),
            "--out", str(out), "--dim", "128",
        ])
        assert code == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["documents"] >= 50
        assert summary["chunks_created"] >= summary["documents"]
        assert len(summary["partitions"]) >= 3
        assert (out / "manifest.json").exists()
        assert (out / "chunks.jsonl").exists()

    def test_query_returns_json_answer_with_sources(self, built_index, capsys):
        code = main([
            "query", "--index", str(built_index),
            "--text", "What is the punishment for IPC Section 420?",
            "--k", "5",
        ])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["decision"] == "answered"
        assert len(payload["sources"]) >= 1
        assert payload["sources"][0]["chunk_id"]

    def test_domain_filtered_query(self, built_index, capsys):
        code = main([
            "query", "--index", str(built_index),
            "--text", "remedies for breach of contract",
            "--k", "3", "--domains", "ContractLaw",
        ])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["decision"] == "answered"


class TestBuildIndex:
    def test_hnsw_agrees_with_flat_on_easy_corpus(self, built_index, capsys):
        question = "What is the punishment for IPC Section 420?"
        code = main(["query", "--index", str(built_index), "--text", question])
        assert code == 0
        flat_top = json.loads(capsys.readouterr().out)["sources"][0]["chunk_id"]

        code = main([
            "build-index", "--index", str(built_index), "--kind", "hnsw",
            "--hnsw-m", "8", "--ef-construction", "64", "--ef-search", "64",
        ])
        assert code == 0
        capsys.readouterr()

        code = main(["query", "--index", str(built_index), "--text", question])
        assert code == 0
        hnsw_top = json.loads(capsys.readouterr().out)["sources"][0]["chunk_id"]
        assert hnsw_top == flat_top


class TestEvalAndBench:
    def test_eval_writes_reports(self, built_index, tmp_path, capsys):
        base = tmp_path / "report"
        code = main([
            "eval", "--index", str(built_index),
            "--dataset", str(eval_samples_path()),
            "--out", str(base),
        ])
        assert code == 0
        assert (tmp_path / "report.json").exists()
        assert (tmp_path / "report.csv").exists()
        aggregates = json.loads((tmp_path / "report.json").read_text())["aggregates"]
        assert 0.0 <= aggregates["mrr"] <= 1.0

    def test_eval_missing_dataset_exits_one_and_names_path(self, built_index, capsys):
        code = main([
            "eval", "--index", str(built_index), "--dataset", "missing.jsonl",
        ])
        assert code == 1
        assert "missing.jsonl" in capsys.readouterr().err

    def test_bench_emits_latency_csv(self, built_index, tmp_path, capsys):
        out = tmp_path / "latency.csv"
        code = main([
            "bench", "--index", str(built_index),
            "--dataset", str(eval_samples_path()),
            "--repetitions", "10", "--warmup", "0", "--out", str(out),
        ])
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "QueryComplexityLevel,ProcessingTime"
        assert len(lines) > 10

    def test_compare_indexes_table(self, built_index, tmp_path, capsys):
        out = tmp_path / "cmp.json"
        code = main([
            "compare-indexes", "--index", str(built_index),
            "--k", "5", "--queries", "20", "--out", str(out),
        ])
        assert code == 0
        rows = json.loads(out.read_text())
        kinds = {row["kind"] for row in rows}
        assert {"flat", "ivf", "ivf_pq", "hnsw"} <= kinds
        flat_row = next(r for r in rows if r["kind"] == "flat")
        assert flat_row["recall_at_k"] == pytest.approx(1.0)


class TestExitCodes:
    def test_unknown_subcommand_exits_two(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["frobnicate"])
        assert excinfo.value.code == 2

    def test_missing_corpus_exits_one(self, tmp_path, capsys):
        code = main([
            "ingest", "--corpus", str(tmp_path / "nope.jsonl"),
            "--out", str(tmp_path / "idx"),
        ])
        assert code == 1
        assert "error" in capsys.readouterr().err
