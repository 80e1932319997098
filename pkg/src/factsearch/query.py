"""Filter algebra: AST, evaluation, scoring, facets, and paging.

A query is a list of (field, filter) clauses whose results are intersected.
Filters evaluate to document sets within the field's document class (block
or entity); entity-level sets are lifted to the blocks that own at least one
matching entity, so searches always return blocks.

Filter semantics:

* ``Term`` matches a document when at least one analyzed term of the query
  string occurs in the field; a term may contain ``*`` wildcards matching
  any run of characters within a single indexed term.
* ``Exact`` matches when the analyzed phrase occurs as an in-order
  subsequence of the field's terms within a window of at most
  ``len(phrase) + slop`` positions.
* ``InRange`` is an inclusive numeric range and only applies to numeric
  fields.
* ``Not`` complements within the field's document class; ``And`` and ``Or``
  intersect and unite their members.
* ``InResult`` runs a sub-query, collects the distinct verbatim values of
  one field from its matches, and behaves as a disjunction of ``Term``
  filters over those values.

Scores count how many distinct query terms of each ``Term`` clause a block
matched, plus a proximity bonus per ``Exact`` clause that decays with the
width of the tightest matching window. ``And`` sums its members, ``Or``
takes the best member, everything else scores zero. Ties are broken by
block id, so ranking does not depend on dump record order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import (
    ExpansionOverflow,
    IncompatibleFieldFilter,
    InvalidRange,
    LimitOutOfRange,
    NotFacetable,
    QueryError,
)
from .index import (
    DocArray,
    FacetResult,
    Index,
    ds_complement,
    ds_intersect,
    ds_union_all,
)
from .model import DocClass, FieldClass, FieldName, doc_class, facet_companion, field_class

DEFAULT_SLOP = 2
DEFAULT_MAX_EXPANSION = 1000
DEFAULT_FACET_VALUES = 100
MAX_LIMIT = 1000

_EMPTY = np.empty(0, dtype=np.int32)


@dataclass(frozen=True)
class Term:
    query: str


@dataclass(frozen=True)
class Exact:
    phrase: str


@dataclass(frozen=True)
class InRange:
    lo: int
    hi: int


@dataclass(frozen=True)
class Not:
    filter: "Filter"


@dataclass(frozen=True)
class And:
    filters: tuple["Filter", ...]

    def __post_init__(self):
        object.__setattr__(self, "filters", tuple(self.filters))
        if not self.filters:
            raise ValueError("And requires at least one member")


@dataclass(frozen=True)
class Or:
    filters: tuple["Filter", ...]

    def __post_init__(self):
        object.__setattr__(self, "filters", tuple(self.filters))
        if not self.filters:
            raise ValueError("Or requires at least one member")


@dataclass(frozen=True)
class InResult:
    extract_field: FieldName
    sub_query: tuple[tuple[FieldName, "Filter"], ...]

    def __post_init__(self):
        object.__setattr__(self, "sub_query", tuple(tuple(c) for c in self.sub_query))
        if field_class(self.extract_field) not in (FieldClass.IDENTIFIER, FieldClass.FACET):
            raise ValueError(
                f"InResult extract field must be identifier or facet class, "
                f"got {self.extract_field}"
            )


Filter = Union[Term, Exact, InRange, Not, And, Or, InResult]
Clause = tuple[FieldName, Filter]


@dataclass(frozen=True)
class ScoredResult:
    block_ordinal: int
    score: float
    matched_entities: tuple[int, ...]


@dataclass(frozen=True)
class ResultPage:
    total: int
    offset: int
    limit: int
    results: tuple[ScoredResult, ...]
    facets: dict[FieldName, FacetResult]


@dataclass(frozen=True)
class EvalOptions:
    slop: int = DEFAULT_SLOP
    max_expansion: int = DEFAULT_MAX_EXPANSION


def _analyzed_terms(index: Index, field: FieldName, text: str) -> list[str]:
    return [tok.term for tok in index.config.analyze(field, text)]


def _term_docsets(index: Index, field: FieldName, terms: list[str]) -> list[DocArray]:
    """Posting doc arrays for each term, expanding wildcards."""
    arrays: list[DocArray] = []
    for term in terms:
        if "*" in term:
            if set(term) == {"*"}:
                arrays.append(index.any_docs(field))
            else:
                arrays.extend(
                    index.term_docs(field, t) for t in index.expand_pattern(field, term)
                )
        else:
            arrays.append(index.term_docs(field, term))
    return arrays


def _check_textual(field: FieldName, label: str) -> None:
    if field_class(field) is FieldClass.NUMERIC:
        raise IncompatibleFieldFilter(field.value, f"{label} requires a tokenized field")


def _min_ordered_span(pos_lists: list[np.ndarray]) -> int | None:
    """Smallest window containing one position from each list, in order.

    Positions must be strictly increasing across the phrase. Returns the
    window width (last - first + 1) or None when no in-order assignment
    exists.
    """
    first = pos_lists[0]
    best: int | None = None
    for start in first:
        cur = int(start)
        ok = True
        for positions in pos_lists[1:]:
            idx = int(np.searchsorted(positions, cur, side="right"))
            if idx == len(positions):
                ok = False
                break
            cur = int(positions[idx])
        if not ok:
            break  # later starts only make it harder for the same suffix lists
        width = cur - int(start) + 1
        if best is None or width < best:
            best = width
        if best == len(pos_lists):
            break
    return best


def _exact_matches(
    index: Index, field: FieldName, terms: list[str], slop: int
) -> tuple[DocArray, dict[int, int] | None]:
    """Documents matching the phrase, plus each match's minimal window.

    The window map is None for single-term phrases, where every match
    trivially has width 1.
    """
    postings = [index.posting(field, term) for term in terms]
    if any(p is None for p in postings):
        return _EMPTY, {}
    candidates = postings[0].docs
    for p in postings[1:]:
        candidates = ds_intersect(candidates, p.docs)
        if not len(candidates):
            return _EMPTY, {}
    if len(terms) == 1:
        return candidates, None
    matched: list[int] = []
    spans: dict[int, int] = {}
    limit = len(terms) + slop
    slot_arrays = [np.searchsorted(p.docs, candidates) for p in postings]
    for i, doc in enumerate(candidates):
        pos_lists = [
            p.positions_for(int(slots[i])) for p, slots in zip(postings, slot_arrays)
        ]
        width = _min_ordered_span(pos_lists)
        if width is not None and width <= limit:
            matched.append(int(doc))
            spans[int(doc)] = width
    return np.asarray(matched, dtype=np.int32), spans


def eval_filter(
    index: Index,
    field: FieldName,
    f: Filter,
    *,
    slop: int = DEFAULT_SLOP,
    max_expansion: int = DEFAULT_MAX_EXPANSION,
) -> DocArray:
    """Evaluate one filter to a document set within the field's doc class."""
    opts = EvalOptions(slop=slop, max_expansion=max_expansion)
    return _eval(index, field, f, opts)


def _eval(index: Index, field: FieldName, f: Filter, opts: EvalOptions) -> DocArray:
    if isinstance(f, Term):
        _check_textual(field, "Term")
        terms = _analyzed_terms(index, field, f.query)
        return ds_union_all(_term_docsets(index, field, terms))
    if isinstance(f, Exact):
        _check_textual(field, "Exact")
        terms = _analyzed_terms(index, field, f.phrase)
        if any("*" in t for t in terms):
            raise IncompatibleFieldFilter(field.value, "wildcards are not allowed in Exact")
        if not terms:
            return _EMPTY
        docs, _ = _exact_matches(index, field, terms, opts.slop)
        return docs
    if isinstance(f, InRange):
        if field_class(field) is not FieldClass.NUMERIC:
            raise IncompatibleFieldFilter(field.value, "InRange requires a numeric field")
        if f.lo > f.hi:
            raise InvalidRange(f.lo, f.hi)
        return index.numeric_range(field, f.lo, f.hi)
    if isinstance(f, Not):
        inner = _eval(index, field, f.filter, opts)
        return ds_complement(index.universe(doc_class(field)), inner)
    if isinstance(f, And):
        result = _eval(index, field, f.filters[0], opts)
        for member in f.filters[1:]:
            result = ds_intersect(result, _eval(index, field, member, opts))
        return result
    if isinstance(f, Or):
        return ds_union_all([_eval(index, field, member, opts) for member in f.filters])
    if isinstance(f, InResult):
        _check_textual(field, "InResult")
        values = _expand_in_result(index, f, opts)
        arrays: list[DocArray] = []
        for value in values:
            terms = _analyzed_terms(index, field, value)
            arrays.extend(_term_docsets(index, field, terms))
        return ds_union_all(arrays)
    raise TypeError(f"unknown filter {f!r}")


def _expand_in_result(index: Index, f: InResult, opts: EvalOptions) -> list[str]:
    blocks, joint = _match(index, f.sub_query, opts)
    if doc_class(f.extract_field) is DocClass.BLOCK:
        docs = blocks
    else:
        docs = index.gather_entities(blocks)
        if joint is not None:
            docs = ds_intersect(docs, joint)
    values = index.extract_values(f.extract_field, docs)
    if len(values) > opts.max_expansion:
        raise ExpansionOverflow(len(values), opts.max_expansion)
    return values


def _match(
    index: Index, clauses: Sequence[Clause], opts: EvalOptions
) -> tuple[DocArray, DocArray | None]:
    """Matched blocks and the joint entity set over all entity-field clauses.

    ``joint`` is None when the query has no entity-field clauses, which
    means every entity of a matched block counts as matched.
    """
    blocks = index.block_ords
    joint: DocArray | None = None
    for i, (field, f) in enumerate(clauses):
        try:
            docs = _eval(index, field, f, opts)
        except QueryError as exc:
            exc.clause = i  # outermost clause wins for nested sub-queries
            raise
        if doc_class(field) is DocClass.ENTITY:
            joint = docs if joint is None else ds_intersect(joint, docs)
            lifted = index.parents_of(docs)
        else:
            lifted = docs
        blocks = ds_intersect(blocks, lifted)
    return blocks, joint


def _matched_entities_global(
    index: Index, blocks: DocArray, joint: DocArray | None
) -> DocArray:
    """Union of matched entities over all result blocks, sorted.

    ``blocks`` must be sorted (i.e. taken before ranking).
    """
    ents = index.gather_entities(blocks)
    if joint is None:
        return ents
    return ds_intersect(ents, joint)


def _split_per_block(index: Index, blocks: DocArray, matched: DocArray) -> list[np.ndarray]:
    """Slice the globally matched (sorted) entity set into per-block runs."""
    out = []
    for b in blocks:
        lo = int(np.searchsorted(matched, b + 1))
        hi = int(np.searchsorted(matched, b + 1 + index.entity_count(int(b))))
        out.append(matched[lo:hi])
    return out


def _lift(index: Index, field: FieldName, docs: DocArray) -> DocArray:
    if doc_class(field) is DocClass.ENTITY:
        return index.parents_of(docs)
    return docs


def _score_filter(
    index: Index, field: FieldName, f: Filter, blocks: DocArray, opts: EvalOptions
) -> np.ndarray:
    scores = np.zeros(len(blocks), dtype=np.float64)
    if not len(blocks):
        return scores
    if isinstance(f, Term):
        seen: set[str] = set()
        for term in _analyzed_terms(index, field, f.query):
            if term in seen:
                continue  # repeated query terms count once
            seen.add(term)
            docs = ds_union_all(_term_docsets(index, field, [term]))
            lifted = _lift(index, field, docs)
            scores += np.isin(blocks, lifted, assume_unique=True)
        return scores
    if isinstance(f, Exact):
        terms = _analyzed_terms(index, field, f.phrase)
        if not terms or any("*" in t for t in terms):
            return scores
        docs, spans = _exact_matches(index, field, terms, opts.slop)
        if not len(docs):
            return scores
        k = len(terms)
        if spans is None:
            # single-term phrase: every match has window 1, contribution k/1
            lifted = _lift(index, field, docs)
            return np.isin(blocks, lifted, assume_unique=True) * float(k)
        if doc_class(field) is DocClass.ENTITY:
            best_by_block: dict[int, int] = {}
            for doc, width in spans.items():
                parent = index.parent_of(doc)
                prev = best_by_block.get(parent)
                if prev is None or width < prev:
                    best_by_block[parent] = width
        else:
            best_by_block = spans
        for i, b in enumerate(blocks):
            width = best_by_block.get(int(b))
            if width is not None:
                scores[i] = k / (1 + width - k)
        return scores
    if isinstance(f, And):
        for member in f.filters:
            scores += _score_filter(index, field, member, blocks, opts)
        return scores
    if isinstance(f, Or):
        member_scores = [
            _score_filter(index, field, member, blocks, opts) for member in f.filters
        ]
        return np.maximum.reduce(member_scores)
    # Not, InRange and InResult do not contribute to ranking
    return scores


def _score_blocks(
    index: Index, clauses: Sequence[Clause], blocks: DocArray, opts: EvalOptions
) -> np.ndarray:
    total = np.zeros(len(blocks), dtype=np.float64)
    for field, f in clauses:
        total += _score_filter(index, field, f, blocks, opts)
    return total


def score_result(
    index: Index,
    clauses: Sequence[Clause],
    block_ordinal: int,
    *,
    slop: int = DEFAULT_SLOP,
    max_expansion: int = DEFAULT_MAX_EXPANSION,
) -> float:
    """Ranking score of one matched block for the given query."""
    opts = EvalOptions(slop=slop, max_expansion=max_expansion)
    blocks = np.asarray([block_ordinal], dtype=np.int32)
    return float(_score_blocks(index, clauses, blocks, opts)[0])


def _ranked(
    index: Index, blocks: DocArray, scores: np.ndarray
) -> tuple[DocArray, np.ndarray]:
    order = np.lexsort((index.id_rank(blocks), -scores))
    return blocks[order], scores[order]


def eval_query(
    index: Index,
    clauses: Sequence[Clause],
    *,
    slop: int = DEFAULT_SLOP,
    max_expansion: int = DEFAULT_MAX_EXPANSION,
) -> list[ScoredResult]:
    """Evaluate a clause list to ranked, scored blocks with matched entities.

    An empty clause list matches every block with score zero.
    """
    opts = EvalOptions(slop=slop, max_expansion=max_expansion)
    blocks, joint = _match(index, clauses, opts)
    matched_global = _matched_entities_global(index, blocks, joint)
    scores = _score_blocks(index, clauses, blocks, opts)
    blocks, scores = _ranked(index, blocks, scores)
    per_block = _split_per_block(index, blocks, matched_global)
    return [
        ScoredResult(
            block_ordinal=int(b),
            score=float(s),
            matched_entities=tuple(int(e) for e in ents),
        )
        for b, s, ents in zip(blocks, scores, per_block)
    ]


def run(
    index: Index,
    clauses: Sequence[Clause],
    facet_fields: Sequence[FieldName] = (),
    offset: int = 0,
    limit: int = 10,
    *,
    slop: int = DEFAULT_SLOP,
    max_expansion: int = DEFAULT_MAX_EXPANSION,
    facet_max_values: int = DEFAULT_FACET_VALUES,
) -> ResultPage:
    """Run a query: rank all matches, page the result, facet the full set."""
    if limit < 1 or limit > MAX_LIMIT:
        raise LimitOutOfRange(limit)
    if offset < 0:
        raise LimitOutOfRange(offset)
    opts = EvalOptions(slop=slop, max_expansion=max_expansion)
    blocks, joint = _match(index, clauses, opts)
    matched_global = _matched_entities_global(index, blocks, joint)
    scores = _score_blocks(index, clauses, blocks, opts)
    blocks, scores = _ranked(index, blocks, scores)

    page_blocks = blocks[offset : offset + limit]
    page_scores = scores[offset : offset + limit]
    page_matched = _split_per_block(index, page_blocks, matched_global)
    results = tuple(
        ScoredResult(
            block_ordinal=int(b),
            score=float(s),
            matched_entities=tuple(int(e) for e in ents),
        )
        for b, s, ents in zip(page_blocks, page_scores, page_matched)
    )

    facets: dict[FieldName, FacetResult] = {}
    for field in facet_fields:
        companion = facet_companion(field)
        if companion is None:
            raise NotFacetable(field.value)
        over = matched_global if doc_class(companion) is DocClass.ENTITY else blocks
        facets[field] = index.facet_counts(field, over, facet_max_values)

    return ResultPage(
        total=int(len(blocks)),
        offset=offset,
        limit=limit,
        results=results,
        facets=facets,
    )
