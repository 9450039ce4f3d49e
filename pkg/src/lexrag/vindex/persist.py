"""Binary persistence for partitioned indexes.

Per-partition file layout (little-endian): magic "LXIV", format version u16,
index_kind u8, dim u32, count u64, length-prefixed provider fingerprint,
seed u64, a chunk-id table, the kind-specific sections, and a trailing CRC32
of all preceding bytes. A JSON sidecar manifest maps partition labels to
files and records the chunk policy and provider config used at build time.
"""

from __future__ import annotations

import json
import struct
import zlib
from pathlib import Path

import numpy as np

from ..corpus.domains import DomainLabel
from .flat import FlatIndex
from .hnsw import HnswIndex, HnswParams
from .ivf import IvfIndex, IvfParams
from .partition import PartitionedIndex
from .pq import IvfPqIndex, PqParams

MAGIC = b"LXIV"
FORMAT_VERSION = 1
MANIFEST_NAME = "manifest.json"

_KIND_CODES = {"flat": 0, "ivf": 1, "ivf_pq": 2, "hnsw": 3}
_CODE_KINDS = {v: k for k, v in _KIND_CODES.items()}


class PersistenceError(Exception):
    """Base class for index persistence failures."""


class BadMagicError(PersistenceError):
    pass


class VersionMismatchError(PersistenceError):
    def __init__(self, found: int, supported: int):
        super().__init__(
            f"index file format version {found} is not supported "
            f"(reader supports version {supported})"
        )
        self.found = found
        self.supported = supported


class TruncatedFileError(PersistenceError):
    pass


class ChecksumError(PersistenceError):
    pass


class _Writer:
    def __init__(self):
        self._parts: list[bytes] = []

    def u8(self, v: int) -> None:
        self._parts.append(struct.pack("<B", v))

    def u16(self, v: int) -> None:
        self._parts.append(struct.pack("<H", v))

    def u32(self, v: int) -> None:
        self._parts.append(struct.pack("<I", v))

    def u64(self, v: int) -> None:
        self._parts.append(struct.pack("<Q", v))

    def i64(self, v: int) -> None:
        self._parts.append(struct.pack("<q", v))

    def f64(self, v: float) -> None:
        self._parts.append(struct.pack("<d", v))

    def text(self, s: str) -> None:
        raw = s.encode("utf-8")
        self.u32(len(raw))
        self._parts.append(raw)

    def f32_array(self, arr: np.ndarray) -> None:
        self._parts.append(np.ascontiguousarray(arr, dtype="<f4").tobytes())

    def u32_array(self, arr: np.ndarray) -> None:
        self._parts.append(np.ascontiguousarray(arr, dtype="<u4").tobytes())

    def u16_array(self, arr: np.ndarray) -> None:
        self._parts.append(np.ascontiguousarray(arr, dtype="<u2").tobytes())

    def u8_array(self, arr: np.ndarray) -> None:
        self._parts.append(np.ascontiguousarray(arr, dtype="u1").tobytes())

    def finish(self) -> bytes:
        body = b"".join(self._parts)
        return body + struct.pack("<I", zlib.crc32(body))


class _Reader:
    def __init__(self, data: bytes):
        self._data = data
        self._pos = 0

    def _take(self, size: int) -> bytes:
        if self._pos + size > len(self._data):
            raise TruncatedFileError(
                f"index file ends early: needed {size} bytes at offset {self._pos}"
            )
        out = self._data[self._pos : self._pos + size]
        self._pos += size
        return out

    def u8(self) -> int:
        return struct.unpack("<B", self._take(1))[0]

    def u16(self) -> int:
        return struct.unpack("<H", self._take(2))[0]

    def u32(self) -> int:
        return struct.unpack("<I", self._take(4))[0]

    def u64(self) -> int:
        return struct.unpack("<Q", self._take(8))[0]

    def i64(self) -> int:
        return struct.unpack("<q", self._take(8))[0]

    def f64(self) -> float:
        return struct.unpack("<d", self._take(8))[0]

    def text(self) -> str:
        return self._take(self.u32()).decode("utf-8")

    def f32_array(self, count: int) -> np.ndarray:
        return np.frombuffer(self._take(count * 4), dtype="<f4").astype(np.float32)

    def u32_array(self, count: int) -> np.ndarray:
        return np.frombuffer(self._take(count * 4), dtype="<u4")

    def u16_array(self, count: int) -> np.ndarray:
        return np.frombuffer(self._take(count * 2), dtype="<u2")

    def u8_array(self, count: int) -> np.ndarray:
        return np.frombuffer(self._take(count), dtype="u1")


def _index_seed(index) -> int:
    params = getattr(index, "params", None) or getattr(index, "ivf_params", None)
    return getattr(params, "seed", 0)


def dump_index_bytes(index) -> bytes:
    w = _Writer()
    w._parts.append(MAGIC)
    w.u16(FORMAT_VERSION)
    w.u8(_KIND_CODES[index.kind])
    w.u32(index.dim)
    count = len(index)
    w.u64(count)
    w.text(getattr(index, "provider_fingerprint", ""))
    w.u64(_index_seed(index))
    for chunk_id in index.store.chunk_ids:
        w.text(chunk_id)

    if index.kind == "flat":
        w.f32_array(index.store.matrix)
    elif index.kind == "ivf":
        w.u32(index.params.nlist)
        w.u32(index.params.nprobe)
        w.u32(index.params.kmeans_iters)
        w.f32_array(index.centroids)
        for posting in index.posting_lists:
            w.u32(len(posting))
            w.u32_array(posting)
        w.f32_array(index.store.matrix)
    elif index.kind == "ivf_pq":
        w.u32(index.ivf_params.nlist)
        w.u32(index.ivf_params.nprobe)
        w.u32(index.ivf_params.kmeans_iters)
        w.u32(index.pq_params.m)
        w.u32(index.pq_params.bits)
        w.u32(index.pq_params.kmeans_iters)
        w.u64(index.pq_params.seed)
        w.u8(1 if index.keep_raw else 0)
        w.f32_array(index.centroids)
        w.f32_array(index.codebooks)
        if index.pq_params.bits <= 8:
            w.u8_array(index.codes)
        else:
            w.u16_array(index.codes)
        for posting in index.posting_lists:
            w.u32(len(posting))
            w.u32_array(posting)
        if index.keep_raw:
            w.f32_array(index.store.matrix)
    elif index.kind == "hnsw":
        w.u32(index.params.m)
        w.u32(index.params.ef_construction)
        w.u32(index.params.ef_search)
        w.f64(index.params.level_lambda)
        w.i64(index.entry_point)
        w.u16_array(np.asarray(index.levels, dtype=np.uint16))
        for node_layers in index.neighbors:
            for ids in node_layers:
                w.u32(len(ids))
                w.u32_array(np.asarray(ids, dtype=np.uint32))
        w.f32_array(index.store.matrix)
    else:
        raise PersistenceError(f"cannot persist index kind {index.kind!r}")
    return w.finish()


def load_index_bytes(data: bytes):
    if len(data) < len(MAGIC):
        raise TruncatedFileError("file is shorter than the magic header")
    if data[: len(MAGIC)] != MAGIC:
        raise BadMagicError(f"bad magic bytes: {data[:len(MAGIC)]!r}")
    if len(data) < len(MAGIC) + 2:
        raise TruncatedFileError("file ends inside the version field")
    version = struct.unpack("<H", data[4:6])[0]
    if version != FORMAT_VERSION:
        raise VersionMismatchError(version, FORMAT_VERSION)
    if len(data) < len(MAGIC) + 2 + 4:
        raise TruncatedFileError("file ends before the checksum")
    stored_crc = struct.unpack("<I", data[-4:])[0]
    if zlib.crc32(data[:-4]) != stored_crc:
        raise ChecksumError("CRC32 mismatch: file is corrupted")

    r = _Reader(data[:-4])
    r._take(6)  # magic + version, already validated
    kind_code = r.u8()
    if kind_code not in _CODE_KINDS:
        raise PersistenceError(f"unknown index kind code {kind_code}")
    kind = _CODE_KINDS[kind_code]
    dim = r.u32()
    count = r.u64()
    fingerprint = r.text()
    seed = r.u64()
    chunk_ids = [r.text() for _ in range(count)]

    if kind == "flat":
        matrix = r.f32_array(count * dim).reshape(count, dim)
        index = FlatIndex(dim)
        index.insert(list(zip(chunk_ids, matrix)))
    elif kind == "ivf":
        nlist = r.u32()
        nprobe = r.u32()
        kmeans_iters = r.u32()
        centroids = r.f32_array(nlist * dim).reshape(nlist, dim)
        postings = []
        for _ in range(nlist):
            size = r.u32()
            postings.append(r.u32_array(size).astype(np.int64))
        matrix = r.f32_array(count * dim).reshape(count, dim)
        index = IvfIndex(dim, IvfParams(nlist, nprobe, kmeans_iters, seed))
        index.store.add_many(list(zip(chunk_ids, matrix)))
        index.centroids = centroids
        index.posting_lists = postings
    elif kind == "ivf_pq":
        nlist = r.u32()
        nprobe = r.u32()
        kmeans_iters = r.u32()
        m = r.u32()
        bits = r.u32()
        pq_iters = r.u32()
        pq_seed = r.u64()
        keep_raw = bool(r.u8())
        centroids = r.f32_array(nlist * dim).reshape(nlist, dim)
        pq_params = PqParams(m=m, bits=bits, kmeans_iters=pq_iters, seed=pq_seed)
        codebooks = r.f32_array(m * pq_params.ncodes * (dim // m)).reshape(
            m, pq_params.ncodes, dim // m
        )
        if bits <= 8:
            codes = r.u8_array(count * m).reshape(count, m).astype(np.uint16)
        else:
            codes = r.u16_array(count * m).reshape(count, m).astype(np.uint16)
        postings = []
        for _ in range(nlist):
            size = r.u32()
            postings.append(r.u32_array(size).astype(np.int64))
        index = IvfPqIndex(
            dim, IvfParams(nlist, nprobe, kmeans_iters, seed), pq_params, keep_raw
        )
        if keep_raw:
            matrix = r.f32_array(count * dim).reshape(count, dim)
        else:
            # codes-only mode reconstructs approximate vectors for the store
            from .pq import pq_decode

            matrix = pq_decode(codebooks, codes)
        index.store.add_many(list(zip(chunk_ids, matrix)))
        index.centroids = centroids
        index.codebooks = codebooks
        index.codes = codes
        index.posting_lists = postings
        index.trained = True
    elif kind == "hnsw":
        m = r.u32()
        ef_construction = r.u32()
        ef_search = r.u32()
        level_lambda = r.f64()
        entry_point = r.i64()
        levels = r.u16_array(count).astype(int).tolist()
        neighbors = []
        for node in range(count):
            node_layers = []
            for _ in range(levels[node] + 1):
                degree = r.u32()
                node_layers.append(r.u32_array(degree).astype(int).tolist())
            neighbors.append(node_layers)
        matrix = r.f32_array(count * dim).reshape(count, dim)
        index = HnswIndex(
            dim,
            HnswParams(m, ef_construction, ef_search, level_lambda, seed),
        )
        index.store.add_many(list(zip(chunk_ids, matrix)))
        index.levels = levels
        index.neighbors = neighbors
        index.entry_point = entry_point
    index.provider_fingerprint = fingerprint
    return index


def save_index(pindex: PartitionedIndex, path: str | Path) -> Path:
    """Write one .lxiv file per partition and a JSON sidecar manifest."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    partition_files: dict[str, str] = {}
    for label in sorted(pindex.partitions, key=lambda d: d.value):
        index = pindex.partitions[label]
        index.provider_fingerprint = pindex.provider_fingerprint
        filename = f"{label.value}.lxiv"
        (root / filename).write_bytes(dump_index_bytes(index))
        partition_files[label.value] = filename
    manifest = {
        "format_version": FORMAT_VERSION,
        "index_kind": pindex.index_kind,
        "dim": pindex.dim,
        "provider_fingerprint": pindex.provider_fingerprint,
        "partitions": partition_files,
        "chunk_policy": pindex.metadata.get("chunk_policy"),
        "provider_config": pindex.metadata.get("provider_config"),
    }
    (root / MANIFEST_NAME).write_text(
        json.dumps(manifest, indent=2, sort_keys=True), encoding="utf-8"
    )
    return root


def load_index(path: str | Path) -> PartitionedIndex:
    root = Path(path)
    manifest_path = root / MANIFEST_NAME
    if not manifest_path.exists():
        raise PersistenceError(f"no index manifest at {manifest_path}")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    partitions: dict[DomainLabel, object] = {}
    for label_value, filename in manifest["partitions"].items():
        file_path = root / filename
        if not file_path.exists():
            raise PersistenceError(f"partition file missing: {file_path}")
        partitions[DomainLabel(label_value)] = load_index_bytes(file_path.read_bytes())
    metadata = {
        "chunk_policy": manifest.get("chunk_policy"),
        "provider_config": manifest.get("provider_config"),
    }
    return PartitionedIndex(
        manifest["index_kind"],
        manifest["dim"],
        manifest["provider_fingerprint"],
        partitions,
        metadata,
    )
