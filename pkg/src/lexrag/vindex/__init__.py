from .flat import FlatIndex
from .hnsw import HnswIndex, HnswParams, hnsw_build
from .ivf import IvfIndex, IvfParams, ivf_build
from .kmeans import kmeans
from .partition import (
    INDEX_KINDS,
    PartitionedIndex,
    build_partitioned_index,
    partition_search,
)
from .persist import (
    BadMagicError,
    ChecksumError,
    PersistenceError,
    TruncatedFileError,
    VersionMismatchError,
    load_index,
    load_index_bytes,
    dump_index_bytes,
    save_index,
)
from .pq import (
    IvfPqIndex,
    PqParams,
    adc_scores,
    adc_table,
    ivf_pq_build,
    pq_decode,
    pq_encode,
    pq_train,
)
from .similarity import SearchHit, VectorRecord, VectorStore, cosine_similarity

__all__ = [
    "BadMagicError",
    "ChecksumError",
    "FlatIndex",
    "HnswIndex",
    "HnswParams",
    "INDEX_KINDS",
    "IvfIndex",
    "IvfParams",
    "IvfPqIndex",
    "PartitionedIndex",
    "PersistenceError",
    "PqParams",
    "SearchHit",
    "TruncatedFileError",
    "VectorRecord",
    "VectorStore",
    "VersionMismatchError",
    "adc_scores",
    "adc_table",
    "build_partitioned_index",
    "cosine_similarity",
    "dump_index_bytes",
    "hnsw_build",
    "ivf_build",
    "ivf_pq_build",
    "kmeans",
    "load_index",
    "load_index_bytes",
    "partition_search",
    "pq_decode",
    "pq_encode",
    "pq_train",
    "save_index",
]
