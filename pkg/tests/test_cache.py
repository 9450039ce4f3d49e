import pytest

from lexrag.corpus import DomainLabel
from lexrag.rag import QueryCache, make_cache_key


class TestCacheKey:
    def test_normalizes_case_and_whitespace(self):
        assert make_cache_key("What  IS Theft?", 5, None) == make_cache_key(
            "what is theft?", 5, None
        )

    def test_k_distinguishes_keys(self):
        assert make_cache_key("q", 5, None) != make_cache_key("q", 10, None)

    def test_domains_sorted_into_key(self):
        a = make_cache_key("q", 5, {DomainLabel.CIVIL, DomainLabel.CRIMINAL})
        b = make_cache_key("q", 5, {DomainLabel.CRIMINAL, DomainLabel.CIVIL})
        assert a == b
        assert make_cache_key("q", 5, None) != a


class TestQueryCache:
    def test_store_then_lookup_counts_a_hit(self):
        cache = QueryCache(capacity=4)
        cache.store("k", "result")
        assert cache.lookup("k") == "result"
        assert cache.stats["hits"] == 1
        assert cache.stats["misses"] == 0

    def test_lookup_on_empty_cache_counts_a_miss(self):
        cache = QueryCache(capacity=4)
        assert cache.lookup("absent") is None
        assert cache.stats["misses"] == 1

    def test_capacity_plus_one_evicts_first_stored(self):
        cache = QueryCache(capacity=3)
        for i in range(4):
            cache.store(f"k{i}", i)
        assert cache.lookup("k0") is None
        assert cache.lookup("k1") == 1
        assert cache.lookup("k3") == 3

    def test_lookup_promotes_recency(self):
        cache = QueryCache(capacity=2)
        cache.store("a", 1)
        cache.store("b", 2)
        cache.lookup("a")  # now b is least recently used
        cache.store("c", 3)
        assert cache.lookup("b") is None
        assert cache.lookup("a") == 1

    def test_capacity_validated(self):
        with pytest.raises(ValueError):
            QueryCache(capacity=0)

    def test_clear_resets_counters(self):
        cache = QueryCache(capacity=2)
        cache.store("a", 1)
        cache.lookup("a")
        cache.clear()
        assert cache.stats == {"hits": 0, "misses": 0, "size": 0}
