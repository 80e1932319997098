"""On-disk index format: one manifest plus per-field segment files.

Layout of an index directory:

* ``manifest`` holds the format version, the analyzer fingerprint and symbol
  table, and corpus statistics (JSON).
* ``docs.bin`` stores the full document payloads as dump-format records, one
  block per line with entities nested.
* ``postings.<field>.bin`` stores each field's term dictionary with doc
  ordinals and positions, terms in lexicographic order.
* ``numeric.<field>.bin`` stores the sorted (value, ordinal) pairs of a
  numeric field.
* ``join.bin`` stores the parent ordinal of every document (-1 for blocks).

Two builds of the same dump with the same analyzer produce byte-identical
directories except for the ``created_at`` field of the manifest. Loading
never re-analyzes: postings are read back as written.
"""

from __future__ import annotations

import io
import json
import os
import struct
import time

import numpy as np

from .analysis import AnalyzerConfig, SymbolTable
from .errors import CorruptSegment, FactSearchError, VersionMismatch
from .index import INDEXED_FIELDS, Index, Posting
from .ingest import block_from_record, block_to_record
from .model import Block, FieldName

MANIFEST_MAGIC = "factsearch-index"
_POSTINGS_MAGIC = b"FSPOST01"
_NUMERIC_MAGIC = b"FSNUM001"
_JOIN_MAGIC = b"FSJOIN01"

_U32 = struct.Struct("<I")
_I32 = struct.Struct("<i")


def _write_u32(fh: io.BufferedWriter, value: int) -> None:
    fh.write(_U32.pack(value))


def _read_u32(fh: io.BufferedReader, file: str) -> int:
    raw = fh.read(4)
    if len(raw) != 4:
        raise CorruptSegment(file, "truncated file")
    return _U32.unpack(raw)[0]


def _write_array(fh: io.BufferedWriter, arr: np.ndarray, dtype: str) -> None:
    arr = np.ascontiguousarray(arr.astype(dtype))
    fh.write(arr.tobytes())


def _read_array(fh: io.BufferedReader, count: int, dtype: str, file: str) -> np.ndarray:
    itemsize = np.dtype(dtype).itemsize
    raw = fh.read(count * itemsize)
    if len(raw) != count * itemsize:
        raise CorruptSegment(file, "truncated array")
    return np.frombuffer(raw, dtype=dtype).copy()


def _write_str(fh: io.BufferedWriter, text: str) -> None:
    data = text.encode("utf-8")
    _write_u32(fh, len(data))
    fh.write(data)


def _read_str(fh: io.BufferedReader, file: str) -> str:
    length = _read_u32(fh, file)
    raw = fh.read(length)
    if len(raw) != length:
        raise CorruptSegment(file, "truncated string")
    return raw.decode("utf-8")


def _postings_path(directory: str, name: FieldName) -> str:
    return os.path.join(directory, f"postings.{name.value}.bin")


def _numeric_path(directory: str, name: FieldName) -> str:
    return os.path.join(directory, f"numeric.{name.value}.bin")


def save(index: Index, directory: str) -> None:
    """Write ``index`` into ``directory`` (created if missing)."""
    os.makedirs(directory, exist_ok=True)
    docs, parent, postings, numeric = index.raw_parts

    with open(os.path.join(directory, "docs.bin"), "w", encoding="utf-8") as fh:
        for doc in docs:
            if isinstance(doc, Block):
                fh.write(json.dumps(block_to_record(doc), ensure_ascii=False))
                fh.write("\n")

    for name, field_postings in postings.items():
        with open(_postings_path(directory, name), "wb") as fh:
            fh.write(_POSTINGS_MAGIC)
            _write_str(fh, name.value)
            _write_u32(fh, len(field_postings))
            for term in sorted(field_postings):
                posting = field_postings[term]
                _write_str(fh, term)
                _write_u32(fh, len(posting.docs))
                _write_array(fh, posting.docs, "<i4")
                counts = np.diff(posting.pos_offsets)
                _write_array(fh, counts, "<i4")
                _write_u32(fh, len(posting.pos_flat))
                _write_array(fh, posting.pos_flat, "<i4")

    for name, (values, value_docs) in numeric.items():
        with open(_numeric_path(directory, name), "wb") as fh:
            fh.write(_NUMERIC_MAGIC)
            _write_str(fh, name.value)
            _write_u32(fh, len(values))
            _write_array(fh, values, "<i8")
            _write_array(fh, value_docs, "<i4")

    with open(os.path.join(directory, "join.bin"), "wb") as fh:
        fh.write(_JOIN_MAGIC)
        _write_u32(fh, len(parent))
        _write_array(fh, parent, "<i4")

    manifest = {
        "magic": MANIFEST_MAGIC,
        "version": Index.FORMAT_VERSION,
        "created_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "analyzer_fingerprint": index.config.fingerprint(),
        "symbols": [[c, list(a)] for c, a in index.config.groups_sorted()],
        **index.stats(),
    }
    with open(os.path.join(directory, "manifest"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, ensure_ascii=False, sort_keys=True, indent=1)
        fh.write("\n")


def _load_postings(directory: str, name: FieldName) -> dict[str, Posting]:
    path = _postings_path(directory, name)
    fname = os.path.basename(path)
    if not os.path.exists(path):
        raise CorruptSegment(fname, "missing")
    out: dict[str, Posting] = {}
    with open(path, "rb") as fh:
        if fh.read(len(_POSTINGS_MAGIC)) != _POSTINGS_MAGIC:
            raise CorruptSegment(fname, "bad magic")
        stored_name = _read_str(fh, fname)
        if stored_name != name.value:
            raise CorruptSegment(fname, f"field mismatch: {stored_name!r}")
        n_terms = _read_u32(fh, fname)
        for _ in range(n_terms):
            term = _read_str(fh, fname)
            n_docs = _read_u32(fh, fname)
            doc_arr = _read_array(fh, n_docs, "<i4", fname)
            counts = _read_array(fh, n_docs, "<i4", fname)
            n_flat = _read_u32(fh, fname)
            flat = _read_array(fh, n_flat, "<i4", fname)
            offsets = np.zeros(n_docs + 1, dtype=np.int64)
            np.cumsum(counts, out=offsets[1:])
            if int(offsets[-1]) != n_flat:
                raise CorruptSegment(fname, f"position count mismatch for {term!r}")
            out[term] = Posting(docs=doc_arr, pos_offsets=offsets, pos_flat=flat)
    return out


def load(directory: str) -> Index:
    """Load an index directory written by :func:`save`."""
    manifest_path = os.path.join(directory, "manifest")
    if not os.path.exists(manifest_path):
        raise CorruptSegment("manifest", "missing")
    try:
        with open(manifest_path, encoding="utf-8") as fh:
            manifest = json.load(fh)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CorruptSegment("manifest", f"unreadable: {exc}") from None
    if manifest.get("magic") != MANIFEST_MAGIC:
        raise CorruptSegment("manifest", "bad magic")
    if manifest.get("version") != Index.FORMAT_VERSION:
        raise VersionMismatch(manifest.get("version"), Index.FORMAT_VERSION)

    symbols = SymbolTable.from_groups({c: tuple(a) for c, a in manifest["symbols"]})
    config = AnalyzerConfig(symbols=symbols)
    if config.fingerprint() != manifest.get("analyzer_fingerprint"):
        raise CorruptSegment("manifest", "analyzer fingerprint mismatch")

    docs_path = os.path.join(directory, "docs.bin")
    if not os.path.exists(docs_path):
        raise CorruptSegment("docs.bin", "missing")
    docs: list = []
    with open(docs_path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                block = block_from_record(json.loads(line), lineno)
            except (json.JSONDecodeError, ValueError, FactSearchError) as exc:
                raise CorruptSegment("docs.bin", f"line {lineno}: {exc}") from None
            docs.append(block)
            docs.extend(block.entities)

    join_path = os.path.join(directory, "join.bin")
    if not os.path.exists(join_path):
        raise CorruptSegment("join.bin", "missing")
    with open(join_path, "rb") as fh:
        if fh.read(len(_JOIN_MAGIC)) != _JOIN_MAGIC:
            raise CorruptSegment("join.bin", "bad magic")
        n_docs = _read_u32(fh, "join.bin")
        parent = _read_array(fh, n_docs, "<i4", "join.bin")
    if n_docs != len(docs):
        raise CorruptSegment("join.bin", f"doc count {n_docs}, docs.bin has {len(docs)}")

    postings = {}
    for name in INDEXED_FIELDS:
        postings[name] = _load_postings(directory, name)

    num_path = _numeric_path(directory, FieldName.START_LINE)
    if not os.path.exists(num_path):
        raise CorruptSegment(os.path.basename(num_path), "missing")
    fname = os.path.basename(num_path)
    with open(num_path, "rb") as fh:
        if fh.read(len(_NUMERIC_MAGIC)) != _NUMERIC_MAGIC:
            raise CorruptSegment(fname, "bad magic")
        _read_str(fh, fname)
        count = _read_u32(fh, fname)
        values = _read_array(fh, count, "<i8", fname)
        value_docs = _read_array(fh, count, "<i4", fname)

    return Index(
        config=config,
        docs=docs,
        parent=parent,
        postings=postings,
        numeric={FieldName.START_LINE: (values, value_docs)},
    )
