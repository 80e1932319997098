"""Exception types raised across the engine.

Everything derives from :class:`FactSearchError` so callers (notably the CLI)
can map library failures onto exit codes without enumerating modules.
"""

from __future__ import annotations


class FactSearchError(Exception):
    """Base class for all errors raised by this package."""


# --- dump ingestion ---


class MalformedRecord(FactSearchError):
    """A dump line could not be parsed into a block record."""

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


# --- symbol table loading ---


class MalformedLine(FactSearchError):
    """A symbol table line does not follow the canonical<TAB>aliases format."""

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class OverlappingGroups(FactSearchError):
    """A symbol appears in more than one synonym group."""

    def __init__(self, symbol: str):
        super().__init__(f"symbol {symbol!r} belongs to more than one group")
        self.symbol = symbol


# --- analysis ---


class NumericFieldNotAnalyzable(FactSearchError):
    """Tokenization was requested for a numeric field."""

    def __init__(self, field: str):
        super().__init__(f"field {field} is numeric and has no token stream")
        self.field = field


# --- index build and access ---


class DuplicateId(FactSearchError):
    """Two documents share an identifier."""

    def __init__(self, doc_id: str):
        super().__init__(f"duplicate document id {doc_id!r}")
        self.doc_id = doc_id


class NotNumeric(FactSearchError):
    def __init__(self, field: str):
        super().__init__(f"field {field} has no numeric index")
        self.field = field


class EmptyRange(FactSearchError):
    def __init__(self, lo: int, hi: int):
        super().__init__(f"empty range: lo {lo} > hi {hi}")
        self.lo = lo
        self.hi = hi


class NotFacetable(FactSearchError):
    def __init__(self, field: str):
        super().__init__(f"field {field} has no facet companion")
        self.field = field


# --- persistence ---


class VersionMismatch(FactSearchError):
    """Index directory was written by an incompatible format version."""

    def __init__(self, found: object, expected: object):
        super().__init__(f"index format version {found!r}, expected {expected!r}")
        self.found = found
        self.expected = expected


class CorruptSegment(FactSearchError):
    """An index segment file is missing or unreadable."""

    def __init__(self, file: str, reason: str):
        super().__init__(f"{file}: {reason}")
        self.file = file
        self.reason = reason


# --- query evaluation ---


class QueryError(FactSearchError):
    """Base class for errors raised while evaluating a query.

    ``clause`` is filled in by the query runner so API callers can point at
    the offending clause index; it is None for errors raised outside a
    clause context.
    """

    clause: int | None = None


class IncompatibleFieldFilter(QueryError):
    def __init__(self, field: str, reason: str):
        super().__init__(f"filter not applicable to field {field}: {reason}")
        self.field = field
        self.reason = reason


class InvalidRange(QueryError):
    def __init__(self, lo: int, hi: int):
        super().__init__(f"invalid range: lo {lo} > hi {hi}")
        self.lo = lo
        self.hi = hi


class ExpansionOverflow(QueryError):
    """An InResult sub-query produced more distinct values than allowed."""

    def __init__(self, count: int, cap: int):
        super().__init__(f"sub-query expanded to more than {cap} values ({count}+)")
        self.count = count
        self.cap = cap


class LimitOutOfRange(QueryError):
    def __init__(self, limit: int):
        super().__init__(f"limit {limit} outside [1, 1000]")
        self.limit = limit
