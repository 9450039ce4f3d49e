import numpy as np
import pytest

from conftest import make_records, random_unit_vectors
from lexrag.vindex import FlatIndex, IvfParams, ivf_build


class TestIvfParams:
    def test_nprobe_bounds(self):
        with pytest.raises(ValueError):
            IvfParams(nlist=4, nprobe=0)
        with pytest.raises(ValueError):
            IvfParams(nlist=4, nprobe=5)

    def test_nlist_lower_bound(self):
        with pytest.raises(ValueError):
            IvfParams(nlist=0, nprobe=1)


class TestIvfBuild:
    def test_single_list_holds_everything(self):
        records = make_records(30, 8, seed=0)
        index = ivf_build(records, 8, IvfParams(nlist=1, nprobe=1, seed=0))
        assert len(index.posting_lists) == 1
        assert len(index.posting_lists[0]) == 30

    def test_single_list_search_equals_flat(self):
        records = make_records(60, 8, seed=1)
        ivf = ivf_build(records, 8, IvfParams(nlist=1, nprobe=1, seed=0))
        flat = FlatIndex.build(records, 8)
        q = random_unit_vectors(1, 8, seed=9)[0]
        assert [(h.chunk_id, h.vec_id) for h in ivf.search(q, 10)] == [
            (h.chunk_id, h.vec_id) for h in flat.search(q, 10)
        ]

    def test_two_separated_blobs_split_cleanly(self):
        rng = np.random.Generator(np.random.PCG64(5))
        # 2-D unit vectors in two tight arcs around opposite directions
        angles_a = rng.normal(0.0, 0.02, size=40)
        angles_b = rng.normal(np.pi, 0.02, size=40)
        vecs = np.stack(
            [np.cos(np.concatenate([angles_a, angles_b])),
             np.sin(np.concatenate([angles_a, angles_b]))], axis=1
        ).astype(np.float32)
        records = [(f"c{i}", vecs[i]) for i in range(80)]
        index = ivf_build(records, 2, IvfParams(nlist=2, nprobe=1, seed=0))
        lists = [set(p.tolist()) for p in index.posting_lists]
        blob_a = set(range(40))
        blob_b = set(range(40, 80))
        assert {frozenset(lists[0]), frozenset(lists[1])} == {
            frozenset(blob_a), frozenset(blob_b)
        }

    def test_same_seed_identical_centroids(self):
        records = make_records(100, 8, seed=2)
        a = ivf_build(records, 8, IvfParams(nlist=8, nprobe=2, seed=7))
        b = ivf_build(records, 8, IvfParams(nlist=8, nprobe=2, seed=7))
        np.testing.assert_array_equal(a.centroids, b.centroids)

    def test_nlist_exceeding_count_rejected(self):
        with pytest.raises(ValueError, match="nlist"):
            ivf_build(make_records(3, 8, seed=0), 8, IvfParams(nlist=4, nprobe=1))

    def test_empty_records_rejected(self):
        with pytest.raises(ValueError):
            ivf_build([], 8, IvfParams(nlist=1, nprobe=1))


class TestIvfSearch:
    def test_full_probe_equals_flat(self):
        records = make_records(200, 16, seed=3)
        ivf = ivf_build(records, 16, IvfParams(nlist=8, nprobe=8, seed=0))
        flat = FlatIndex.build(records, 16)
        for q in random_unit_vectors(20, 16, seed=11):
            ivf_hits = ivf.search(q, 10, nprobe=8)
            flat_hits = flat.search(q, 10)
            assert [h.vec_id for h in ivf_hits] == [h.vec_id for h in flat_hits]
            for a, b in zip(ivf_hits, flat_hits):
                assert a.score == pytest.approx(b.score, abs=1e-6)

    def test_recall_non_decreasing_in_nprobe(self):
        records = make_records(1000, 16, seed=4)
        ivf = ivf_build(records, 16, IvfParams(nlist=16, nprobe=1, seed=0))
        flat = FlatIndex.build(records, 16)
        queries = random_unit_vectors(100, 16, seed=13)
        truth = [frozenset(h.chunk_id for h in flat.search(q, 10)) for q in queries]
        recalls = []
        for nprobe in (1, 2, 4, 8, 16):
            total = 0.0
            for q, expected in zip(queries, truth):
                found = frozenset(h.chunk_id for h in ivf.search(q, 10, nprobe=nprobe))
                total += len(found & expected) / len(expected)
            recalls.append(total / len(queries))
        assert all(b >= a for a, b in zip(recalls, recalls[1:]))
        assert recalls[-1] == pytest.approx(1.0)

    def test_nprobe_zero_rejected(self):
        records = make_records(20, 8, seed=5)
        ivf = ivf_build(records, 8, IvfParams(nlist=4, nprobe=2, seed=0))
        with pytest.raises(ValueError, match="nprobe"):
            ivf.search(records[0][1], 5, nprobe=0)

    def test_nprobe_above_nlist_rejected(self):
        records = make_records(20, 8, seed=5)
        ivf = ivf_build(records, 8, IvfParams(nlist=4, nprobe=2, seed=0))
        with pytest.raises(ValueError, match="nprobe"):
            ivf.search(records[0][1], 5, nprobe=5)
