"""Immutable searchable index over block and entity documents.

Blocks and entities share one ordinal space: each block is assigned an
ordinal, immediately followed by the ordinals of its entities, so the
children of a block are always a contiguous range. The index holds

* positional posting lists per field (text fields analyzed, facet and
  identifier fields verbatim),
* a sorted numeric index for the start-line field,
* per-document verbatim values used for facet counting and sub-query value
  extraction,
* the parent/child join (entity ordinal to block ordinal and back),
* the full document payloads, so search results can be served without a
  separate store.

An :class:`Index` is sealed on construction and never mutated afterwards;
any number of threads may query it concurrently. Document sets flowing
through the engine are sorted, duplicate-free ``numpy`` int32 arrays.
"""

from __future__ import annotations

import bisect
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .analysis import AnalyzerConfig
from .errors import DuplicateId, EmptyRange, NotFacetable, NotNumeric
from .model import (
    Block,
    DocClass,
    EntityKind,
    FieldClass,
    FieldName,
    TheoryEntity,
    doc_class,
    facet_companion,
    field_class,
    raw_field_values,
)

DocArray = np.ndarray  # sorted unique int32 ordinals

_EMPTY = np.empty(0, dtype=np.int32)

# Fields whose verbatim per-document values are materialized as code arrays.
_SINGLE_VALUE_FIELDS = (
    FieldName.ID,
    FieldName.CHILD_ID,
    FieldName.COMMAND,
    FieldName.SOURCE_THEORY_FACET,
    FieldName.KIND,
    FieldName.NAME_FACET,
    FieldName.CONSTANT_TYPE_FACET,
)


def ds_intersect(a: DocArray, b: DocArray) -> DocArray:
    return np.intersect1d(a, b, assume_unique=True)


def ds_union(a: DocArray, b: DocArray) -> DocArray:
    return np.union1d(a, b)


def ds_complement(universe: DocArray, a: DocArray) -> DocArray:
    return np.setdiff1d(universe, a, assume_unique=True)


def ds_union_all(arrays: list[DocArray]) -> DocArray:
    arrays = [a for a in arrays if len(a)]
    if not arrays:
        return _EMPTY
    if len(arrays) == 1:
        return arrays[0]
    return np.unique(np.concatenate(arrays))


def _gather_ranges(starts: np.ndarray, counts: np.ndarray) -> np.ndarray:
    """Concatenate ``arange(s, s + c)`` for every (s, c) pair, vectorized."""
    total = int(counts.sum())
    if total == 0:
        return _EMPTY
    cum = np.cumsum(counts)
    offsets = np.concatenate(([0], cum[:-1]))
    out = np.arange(total, dtype=np.int32)
    out += np.repeat(starts.astype(np.int32) - offsets.astype(np.int32), counts)
    return out


class Posting(NamedTuple):
    """All occurrences of one term: parallel doc ordinals and CSR positions."""

    docs: np.ndarray
    pos_offsets: np.ndarray
    pos_flat: np.ndarray

    def positions_for(self, slot: int) -> np.ndarray:
        return self.pos_flat[self.pos_offsets[slot] : self.pos_offsets[slot + 1]]


@dataclass(frozen=True)
class FacetResult:
    """Distinct verbatim values with counts, most frequent first."""

    values: tuple[tuple[str, int], ...]
    truncated: bool


@dataclass
class _SingleValues:
    codes: np.ndarray  # per ordinal, -1 when absent
    values: list[str]


@dataclass
class _MultiValues:
    offsets: np.ndarray  # len ndocs + 1
    flat: np.ndarray
    values: list[str]


def wildcard_regex(pattern: str) -> re.Pattern:
    return re.compile(".*".join(re.escape(part) for part in pattern.split("*")) + r"\Z")


class Index:
    """Sealed search structure; see the module docstring for the layout."""

    FORMAT_VERSION = 1

    def __init__(
        self,
        *,
        config: AnalyzerConfig,
        docs: list[Block | TheoryEntity],
        parent: np.ndarray,
        postings: dict[FieldName, dict[str, Posting]],
        numeric: dict[FieldName, tuple[np.ndarray, np.ndarray]],
    ):
        self._config = config
        self._docs = docs
        self._parent = parent
        self._postings = postings
        self._numeric = numeric

        is_block = parent < 0
        self._block_ords = np.flatnonzero(is_block).astype(np.int32)
        self._entity_ords = np.flatnonzero(~is_block).astype(np.int32)

        ent_count = np.zeros(len(docs), dtype=np.int32)
        if len(self._entity_ords):
            np.add.at(ent_count, parent[self._entity_ords], 1)
        self._ent_count = ent_count

        self._block_by_id: dict[str, int] = {}
        self._entity_by_id: dict[str, int] = {}
        for ord_, doc in enumerate(docs):
            if isinstance(doc, Block):
                self._block_by_id[doc.id] = ord_
            else:
                self._entity_by_id[doc.child_id] = ord_

        # rank of each block's id in lexicographic order; the ranking
        # tie-break, so result order is independent of dump record order
        self._id_rank = np.zeros(len(docs), dtype=np.int32)
        for rank, ord_ in enumerate(
            sorted(self._block_ords.tolist(), key=lambda o: docs[o].id)
        ):
            self._id_rank[ord_] = rank

        self._sorted_terms: dict[FieldName, list[str]] = {
            name: sorted(terms) for name, terms in postings.items()
        }
        self._any_docs: dict[FieldName, DocArray] = {}
        self._doc_values = _build_doc_values(docs)
        self._global_facets: dict[FieldName, list[tuple[str, int]]] = {}

    # --- basic accessors ---

    @property
    def config(self) -> AnalyzerConfig:
        return self._config

    def __len__(self) -> int:
        return len(self._docs)

    @property
    def block_ords(self) -> DocArray:
        return self._block_ords

    @property
    def entity_ords(self) -> DocArray:
        return self._entity_ords

    def universe(self, cls: DocClass) -> DocArray:
        return self._block_ords if cls is DocClass.BLOCK else self._entity_ords

    def doc(self, ord_: int) -> Block | TheoryEntity:
        return self._docs[ord_]

    def doc_id(self, ord_: int) -> str:
        doc = self._docs[ord_]
        return doc.id if isinstance(doc, Block) else doc.child_id

    def is_block(self, ord_: int) -> bool:
        return self._parent[ord_] < 0

    def block_ord(self, block_id: str) -> int | None:
        return self._block_by_id.get(block_id)

    def entity_ord(self, child_id: str) -> int | None:
        return self._entity_by_id.get(child_id)

    def id_rank(self, ords: DocArray) -> np.ndarray:
        return self._id_rank[ords]

    # --- join map ---

    def parent_of(self, ord_: int) -> int:
        return int(self._parent[ord_])

    def parents_of(self, docs: DocArray) -> DocArray:
        if not len(docs):
            return _EMPTY
        return np.unique(self._parent[docs]).astype(np.int32)

    def entity_count(self, ord_: int) -> int:
        return int(self._ent_count[ord_])

    def entities_of_block(self, ord_: int) -> DocArray:
        count = int(self._ent_count[ord_])
        return np.arange(ord_ + 1, ord_ + 1 + count, dtype=np.int32)

    def gather_entities(self, blocks: DocArray) -> DocArray:
        """All entity ordinals of the given blocks, globally sorted."""
        if not len(blocks):
            return _EMPTY
        return _gather_ranges(blocks + 1, self._ent_count[blocks])

    # --- postings ---

    def term_docs(self, name: FieldName, term: str) -> DocArray:
        posting = self._postings.get(name, {}).get(term)
        return posting.docs if posting is not None else _EMPTY

    def posting(self, name: FieldName, term: str) -> Posting | None:
        return self._postings.get(name, {}).get(term)

    def postings(self, name: FieldName, term: str) -> list[tuple[int, tuple[int, ...]]]:
        """Public posting list: (doc ordinal, positions) pairs in doc order.

        Text-field terms are looked up after the same normalization used at
        index time; facet and identifier terms are verbatim.
        """
        if field_class(name) is FieldClass.TEXT:
            term = self._config.symbols.normalize(term).lower()
        posting = self.posting(name, term)
        if posting is None:
            return []
        return [
            (int(doc), tuple(int(p) for p in posting.positions_for(slot)))
            for slot, doc in enumerate(posting.docs)
        ]

    def terms(self, name: FieldName) -> list[str]:
        return self._sorted_terms.get(name, [])

    def expand_pattern(self, name: FieldName, pattern: str) -> list[str]:
        """Indexed terms of ``name`` matching a ``*`` wildcard pattern."""
        terms = self._sorted_terms.get(name, [])
        prefix = pattern.split("*", 1)[0]
        rx = wildcard_regex(pattern)
        if not prefix:
            return [t for t in terms if rx.match(t)]
        out = []
        for i in range(bisect.bisect_left(terms, prefix), len(terms)):
            if not terms[i].startswith(prefix):
                break
            if rx.match(terms[i]):
                out.append(terms[i])
        return out

    def any_docs(self, name: FieldName) -> DocArray:
        """Documents with at least one token in ``name``."""
        cached = self._any_docs.get(name)
        if cached is None:
            postings = self._postings.get(name, {})
            cached = ds_union_all([p.docs for p in postings.values()])
            self._any_docs[name] = cached
        return cached

    # --- numeric index ---

    def numeric_range(self, name: FieldName, lo: int, hi: int) -> DocArray:
        if name not in self._numeric:
            raise NotNumeric(name.value)
        if lo > hi:
            raise EmptyRange(lo, hi)
        values, docs = self._numeric[name]
        left = int(np.searchsorted(values, lo, side="left"))
        right = int(np.searchsorted(values, hi, side="right"))
        return np.sort(docs[left:right])

    # --- facets and doc values ---

    def facet_counts(self, name: FieldName, over: DocArray, max_values: int) -> FacetResult:
        companion = facet_companion(name)
        if companion is None:
            raise NotFacetable(name.value)
        pairs = self._count_values(companion, over)
        return FacetResult(values=tuple(pairs[:max_values]), truncated=len(pairs) > max_values)

    def _count_values(self, companion: FieldName, over: DocArray) -> list[tuple[str, int]]:
        store = self._doc_values[companion]
        class_size = len(self.universe(doc_class(companion)))
        if len(over) == class_size:
            cached = self._global_facets.get(companion)
            if cached is None:
                cached = self._sorted_pairs(store, over)
                self._global_facets[companion] = cached
            return cached
        return self._sorted_pairs(store, over)

    @staticmethod
    def _sorted_pairs(store: _SingleValues, over: DocArray) -> list[tuple[str, int]]:
        if not len(over):
            return []
        sel = store.codes[over]
        sel = sel[sel >= 0]
        if not len(sel):
            return []
        counts = np.bincount(sel, minlength=len(store.values))
        present = np.flatnonzero(counts)
        pairs = [(store.values[c], int(counts[c])) for c in present]
        pairs.sort(key=lambda vc: (-vc[1], vc[0]))
        return pairs

    def extract_values(self, name: FieldName, docs: DocArray) -> list[str]:
        """Distinct verbatim values of ``name`` over ``docs``."""
        store = self._doc_values[name]
        if isinstance(store, _MultiValues):
            if not len(docs):
                return []
            spans = [store.flat[store.offsets[d] : store.offsets[d + 1]] for d in docs]
            codes = np.unique(np.concatenate(spans))
        else:
            codes = np.unique(store.codes[docs]) if len(docs) else _EMPTY
            codes = codes[codes >= 0]
        return [store.values[c] for c in codes]

    # --- stats ---

    def stats(self) -> dict:
        kind_counts = Counter(
            doc.kind.value for doc in self._docs if isinstance(doc, TheoryEntity)
        )
        return {
            "doc_count": len(self._docs),
            "block_count": int(len(self._block_ords)),
            "entity_count": int(len(self._entity_ords)),
            "entity_kind_counts": {k.value: kind_counts.get(k.value, 0) for k in EntityKind},
            "field_term_counts": {
                name.value: len(terms) for name, terms in self._sorted_terms.items()
            },
        }

    # internal: used by persistence
    @property
    def raw_parts(self) -> tuple:
        return self._docs, self._parent, self._postings, self._numeric


def _build_doc_values(
    docs: list[Block | TheoryEntity],
) -> dict[FieldName, _SingleValues | _MultiValues]:
    out: dict[FieldName, _SingleValues | _MultiValues] = {}
    for name in _SINGLE_VALUE_FIELDS:
        codes = np.full(len(docs), -1, dtype=np.int32)
        values: list[str] = []
        interned: dict[str, int] = {}
        wanted = doc_class(name)
        for ord_, doc in enumerate(docs):
            if (wanted is DocClass.BLOCK) != isinstance(doc, Block):
                continue
            vals = raw_field_values(doc, name)
            if not vals:
                continue
            code = interned.get(vals[0])
            if code is None:
                code = interned[vals[0]] = len(values)
                values.append(vals[0])
            codes[ord_] = code
        out[name] = _SingleValues(codes=codes, values=values)

    offsets = np.zeros(len(docs) + 1, dtype=np.int64)
    flat: list[int] = []
    values = []
    interned = {}
    for ord_, doc in enumerate(docs):
        if isinstance(doc, TheoryEntity):
            for target in doc.uses:
                code = interned.get(target)
                if code is None:
                    code = interned[target] = len(values)
                    values.append(target)
                flat.append(code)
        offsets[ord_ + 1] = len(flat)
    out[FieldName.USES] = _MultiValues(
        offsets=offsets, flat=np.asarray(flat, dtype=np.int32), values=values
    )
    return out


class _PostingAcc:
    """Append-only posting accumulator used during the build."""

    __slots__ = ("docs", "counts", "flat")

    def __init__(self) -> None:
        self.docs: list[int] = []
        self.counts: list[int] = []
        self.flat: list[int] = []

    def add(self, ord_: int, positions: list[int]) -> None:
        self.docs.append(ord_)
        self.counts.append(len(positions))
        self.flat.extend(positions)

    def seal(self) -> Posting:
        counts = np.asarray(self.counts, dtype=np.int64)
        offsets = np.zeros(len(counts) + 1, dtype=np.int64)
        np.cumsum(counts, out=offsets[1:])
        return Posting(
            docs=np.asarray(self.docs, dtype=np.int32),
            pos_offsets=offsets,
            pos_flat=np.asarray(self.flat, dtype=np.int32),
        )


_BLOCK_INDEXED = (
    FieldName.ID,
    FieldName.COMMAND,
    FieldName.SOURCE_CODE,
    FieldName.SOURCE_THEORY,
    FieldName.SOURCE_THEORY_FACET,
)
_ENTITY_INDEXED = (
    FieldName.CHILD_ID,
    FieldName.KIND,
    FieldName.NAME,
    FieldName.NAME_FACET,
    FieldName.CONSTANT_TYPE,
    FieldName.CONSTANT_TYPE_FACET,
    FieldName.USES,
)

INDEXED_FIELDS = (*_BLOCK_INDEXED, *_ENTITY_INDEXED)


class IndexBuilder:
    """Single-writer builder; call :meth:`add` per block, then :meth:`seal`."""

    def __init__(self, config: AnalyzerConfig | None = None):
        self.config = config or AnalyzerConfig.default()
        self._docs: list[Block | TheoryEntity] = []
        self._parent: list[int] = []
        self._acc: dict[FieldName, dict[str, _PostingAcc]] = {
            name: {} for name in (*_BLOCK_INDEXED, *_ENTITY_INDEXED)
        }
        self._numeric_pairs: list[tuple[int, int]] = []
        self._seen_ids: set[str] = set()
        self._sealed = False

    def _post_fields(self, ord_: int, doc: Block | TheoryEntity, names: tuple) -> None:
        for name in names:
            values = raw_field_values(doc, name)
            if not values:
                continue
            per_term: dict[str, list[int]] = {}
            offset = 0
            for value in values:
                tokens = self.config.analyze(name, value)
                for term, position in tokens:
                    per_term.setdefault(term, []).append(offset + position)
                offset += len(tokens)
            field_acc = self._acc[name]
            for term, positions in per_term.items():
                acc = field_acc.get(term)
                if acc is None:
                    acc = field_acc[term] = _PostingAcc()
                acc.add(ord_, positions)

    def add(self, block: Block) -> None:
        if self._sealed:
            raise RuntimeError("builder already sealed")
        if block.id in self._seen_ids:
            raise DuplicateId(block.id)
        self._seen_ids.add(block.id)
        ord_ = len(self._docs)
        self._docs.append(block)
        self._parent.append(-1)
        self._post_fields(ord_, block, _BLOCK_INDEXED)
        self._numeric_pairs.append((block.start_line, ord_))
        for ent in block.entities:
            if ent.child_id in self._seen_ids:
                raise DuplicateId(ent.child_id)
            self._seen_ids.add(ent.child_id)
            ent_ord = len(self._docs)
            self._docs.append(ent)
            self._parent.append(ord_)
            self._post_fields(ent_ord, ent, _ENTITY_INDEXED)

    def seal(self) -> Index:
        self._sealed = True
        postings = {
            name: {term: acc.seal() for term, acc in field_acc.items()}
            for name, field_acc in self._acc.items()
        }
        self._numeric_pairs.sort()
        values = np.asarray([v for v, _ in self._numeric_pairs], dtype=np.int64)
        docs = np.asarray([d for _, d in self._numeric_pairs], dtype=np.int32)
        return Index(
            config=self.config,
            docs=self._docs,
            parent=np.asarray(self._parent, dtype=np.int32),
            postings=postings,
            numeric={FieldName.START_LINE: (values, docs)},
        )


def build(blocks: Iterable[Block], config: AnalyzerConfig | None = None) -> Index:
    """Index a corpus. Input must be free of duplicate identifiers."""
    builder = IndexBuilder(config)
    for block in blocks:
        builder.add(block)
    return builder.seal()
