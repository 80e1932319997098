"""Embedded faceted search engine for theorem-prover theory corpora.

Typical flow: parse a dump, build an index, run drill-down queries.

    from factsearch import build, parse_dump_file, run, FieldName, Term

    index = build(parse_dump_file("corpus.jsonl"))
    page = run(index, [(FieldName.SOURCE_CODE, Term("prime"))],
               facet_fields=[FieldName.KIND])
"""

from .analysis import (
    AnalyzerConfig,
    SymbolTable,
    Token,
    analyze,
    default_symbol_table,
    load_symbol_table,
    normalize_symbol,
)
from .errors import FactSearchError
from .index import FacetResult, Index, IndexBuilder, build
from .ingest import (
    ValidationReport,
    parse_dump,
    parse_dump_file,
    split_spans,
    validate_corpus,
    write_dump,
    write_dump_file,
)
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
)
from .query import (
    And,
    Exact,
    Filter,
    InRange,
    InResult,
    Not,
    Or,
    ResultPage,
    ScoredResult,
    Term,
    eval_filter,
    eval_query,
    run,
    score_result,
)
from .storage import load, save

__version__ = "0.1.0"

__all__ = [
    "AnalyzerConfig",
    "And",
    "Block",
    "DocClass",
    "EntityKind",
    "Exact",
    "FacetResult",
    "FactSearchError",
    "FieldClass",
    "FieldName",
    "Filter",
    "InRange",
    "InResult",
    "Index",
    "IndexBuilder",
    "Not",
    "Or",
    "ResultPage",
    "ScoredResult",
    "SymbolTable",
    "Term",
    "TheoryEntity",
    "Token",
    "ValidationReport",
    "analyze",
    "build",
    "default_symbol_table",
    "doc_class",
    "eval_filter",
    "eval_query",
    "facet_companion",
    "field_class",
    "load",
    "load_symbol_table",
    "normalize_symbol",
    "parse_dump",
    "parse_dump_file",
    "run",
    "save",
    "score_result",
    "split_spans",
    "validate_corpus",
    "write_dump",
    "write_dump_file",
]
