import pytest

from conftest import make_records, random_unit_vectors
from lexrag.evalkit import (
    Complexity,
    IndexConfig,
    LATENCY_CSV_HEADER,
    compare_indexes,
    default_comparison_configs,
    evaluate_pipeline,
    latency_benchmark,
    load_eval_samples,
)
from lexrag.bundled import eval_samples_path
from lexrag.rag import Query
from lexrag.vindex import IvfParams


@pytest.fixture(scope="module")
def comparison():
    records = make_records(600, 32, seed=1)
    queries = list(random_unit_vectors(30, 32, seed=2))
    return compare_indexes(default_comparison_configs(seed=0), records, queries, k=10)


class TestCompareIndexes:

    def test_flat_row_recall_exactly_one(self, comparison):
        flat_rows = [r for r in comparison if r["kind"] == "flat"]
        assert flat_rows and flat_rows[0]["recall_at_k"] == pytest.approx(1.0)

    def test_all_rows_populated_with_valid_recall(self, comparison):
        names = {r["name"] for r in comparison}
        assert any("hnsw-only" in n for n in names)
        assert any("suite" in n for n in names)
        for row in comparison:
            assert 0.0 <= row["recall_at_k"] <= 1.0
            assert row["p50_ms"] >= 0.0
            assert row["p95_ms"] >= row["p50_ms"] - 1e-9
            assert row["memory_bytes"] > 0

    def test_increasing_nprobe_non_decreasing_recall(self):
        records = make_records(800, 16, seed=3)
        queries = list(random_unit_vectors(40, 16, seed=4))
        configs = [
            IndexConfig(kind="ivf", name=f"ivf nprobe={p}",
                        ivf_params=IvfParams(nlist=16, nprobe=p, seed=0))
            for p in (1, 2, 4, 8, 16)
        ]
        rows = compare_indexes(configs, records, queries, k=10)
        recalls = [r["recall_at_k"] for r in rows]
        assert all(b >= a - 1e-12 for a, b in zip(recalls, recalls[1:]))

    def test_zero_records_rejected(self):
        with pytest.raises(ValueError):
            compare_indexes(default_comparison_configs(), [], [], k=5)


class TestLatencyBenchmark:
    def test_report_structure_and_csv(self, desk_engine, tmp_path):
        groups = {
            Complexity.SIMPLE: [Query(text="theft punishment", k=3)],
            Complexity.MODERATE: [Query(text="remedies for breach of contract", k=5)],
            Complexity.COMPLEX: [Query(text="reasonable restrictions on free speech", k=5)],
        }
        report = latency_benchmark(desk_engine.pipeline, groups, repetitions=10, warmup=1)
        for level in ("Simple", "Moderate", "Complex"):
            stats = report.per_level[level]
            assert set(stats) == {"embed", "retrieve", "generate", "total"}
            assert stats["total"].p95 >= stats["total"].p50
        csv_path = report.write_csv(tmp_path / "latency.csv")
        lines = csv_path.read_text().strip().splitlines()
        assert lines[0] == LATENCY_CSV_HEADER
        assert len(lines) == 1 + 3 * 10
        level, value = lines[1].split(",")
        assert level == "Simple"
        float(value)

    def test_phases_put_benchmark_cache_untouched(self, desk_engine):
        desk_engine.pipeline.cache.clear()
        groups = {Complexity.SIMPLE: [Query(text="bail for a bailable offence", k=3)]}
        latency_benchmark(desk_engine.pipeline, groups, repetitions=10, warmup=0)
        assert desk_engine.pipeline.cache.stats["size"] == 0

    def test_repetition_floor_enforced(self, desk_engine):
        with pytest.raises(ValueError):
            latency_benchmark(desk_engine.pipeline, {}, repetitions=5)

    def test_phase_means_account_for_end_to_end_within_ten_percent(self):
        # measured on a corpus large enough that the timed phases dominate
        # the per-query orchestration overhead
        from lexrag.corpus import Chunk, DomainLabel
        from lexrag.embedding import HashEmbeddingProvider
        from lexrag.rag import RagPipeline
        from lexrag.vindex import build_partitioned_index

        n, dim = 20_000, 128
        records = make_records(n, dim, seed=17)
        grouped = {DomainLabel.GENERAL: records}
        pindex = build_partitioned_index(grouped, "flat", dim, "fp")
        chunks = {
            cid: Chunk(chunk_id=cid, doc_id=cid, text=f"text of {cid}",
                       char_start=0, char_end=len(f"text of {cid}"),
                       domain=DomainLabel.GENERAL, seq=0)
            for cid, _ in records
        }
        pipeline = RagPipeline(HashEmbeddingProvider(dim), pindex, chunks)
        groups = {Complexity.SIMPLE: [
            Query(text="a question about statutory interpretation and remedies", k=10),
        ]}
        benchmark = latency_benchmark(pipeline, groups, repetitions=20, warmup=3)
        stats = benchmark.per_level["Simple"]
        phase_sum = stats["embed"].mean + stats["retrieve"].mean + stats["generate"].mean
        assert abs(1.0 - phase_sum / stats["total"].mean) <= 0.10

    def test_empty_group_rejected(self, desk_engine):
        with pytest.raises(ValueError, match="Simple"):
            latency_benchmark(
                desk_engine.pipeline, {Complexity.SIMPLE: []}, repetitions=10
            )


class TestEvaluatePipeline:
    def test_bundled_dataset_report(self, desk_engine):
        samples = load_eval_samples(eval_samples_path())
        report = evaluate_pipeline(desk_engine.pipeline, samples, k=5)
        assert len(report.per_query) == len(samples)
        for name, value in report.aggregates.items():
            assert 0.0 <= value <= 1.0, name
        assert "mrr" in report.aggregates
        assert report.aggregates["precision_at_k"] > 0.0
        assert report.aggregates["lcs_score"] > 0.0
        assert report.aggregates["bleu"] > 0.0

    def test_report_serialization(self, desk_engine, tmp_path):
        samples = load_eval_samples(eval_samples_path())[:3]
        report = evaluate_pipeline(desk_engine.pipeline, samples, k=5)
        json_path = report.write_json(tmp_path / "report.json")
        csv_path = report.write_csv(tmp_path / "report.csv")
        assert json_path.exists() and csv_path.exists()
        header = csv_path.read_text().splitlines()[0]
        assert header.startswith("query,decision,precision_at_k")
