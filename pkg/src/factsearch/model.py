"""Document model shared by ingestion, indexing, querying, and the API.

A corpus consists of *blocks* (contiguous source spans, one per top-level
command) and *theory entities* (constants, facts, and types defined inside a
block). Both are indexed as individual documents; entity documents are
children of their block. Searchable fields are enumerated in
:class:`FieldName`, and every field has a fixed analysis class and document
class that the rest of the engine relies on.

All values here are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


class FieldName(str, enum.Enum):
    """The queryable fields. The enum value is the stable wire name."""

    ID = "Id"
    CHILD_ID = "ChildId"
    COMMAND = "Command"
    SOURCE_CODE = "SourceCode"
    SOURCE_THEORY = "SourceTheory"
    SOURCE_THEORY_FACET = "SourceTheoryFacet"
    START_LINE = "StartLine"
    KIND = "Kind"
    NAME = "Name"
    NAME_FACET = "NameFacet"
    CONSTANT_TYPE = "ConstantType"
    CONSTANT_TYPE_FACET = "ConstantTypeFacet"
    USES = "Uses"

    def __str__(self) -> str:  # keep error messages readable
        return self.value


class FieldClass(enum.Enum):
    """How a field's values are analyzed and matched."""

    TEXT = "text"
    FACET = "facet"
    NUMERIC = "numeric"
    IDENTIFIER = "identifier"


class DocClass(enum.Enum):
    """Which document type carries a field."""

    BLOCK = "block"
    ENTITY = "entity"


class EntityKind(str, enum.Enum):
    CONSTANT = "Constant"
    FACT = "Fact"
    TYPE = "Type"

    def __str__(self) -> str:
        return self.value


_FIELD_CLASS: dict[FieldName, FieldClass] = {
    FieldName.ID: FieldClass.IDENTIFIER,
    FieldName.CHILD_ID: FieldClass.IDENTIFIER,
    FieldName.COMMAND: FieldClass.TEXT,
    FieldName.SOURCE_CODE: FieldClass.TEXT,
    FieldName.SOURCE_THEORY: FieldClass.TEXT,
    FieldName.SOURCE_THEORY_FACET: FieldClass.FACET,
    FieldName.START_LINE: FieldClass.NUMERIC,
    FieldName.KIND: FieldClass.FACET,
    FieldName.NAME: FieldClass.TEXT,
    FieldName.NAME_FACET: FieldClass.FACET,
    FieldName.CONSTANT_TYPE: FieldClass.TEXT,
    FieldName.CONSTANT_TYPE_FACET: FieldClass.FACET,
    FieldName.USES: FieldClass.IDENTIFIER,
}

# Text fields are paired with a verbatim companion used for facet counting
# and value extraction. Facet-class fields act as their own companion.
_FACET_COMPANION: dict[FieldName, FieldName] = {
    FieldName.SOURCE_THEORY: FieldName.SOURCE_THEORY_FACET,
    FieldName.NAME: FieldName.NAME_FACET,
    FieldName.CONSTANT_TYPE: FieldName.CONSTANT_TYPE_FACET,
    FieldName.KIND: FieldName.KIND,
    FieldName.COMMAND: FieldName.COMMAND,
    FieldName.SOURCE_THEORY_FACET: FieldName.SOURCE_THEORY_FACET,
    FieldName.NAME_FACET: FieldName.NAME_FACET,
    FieldName.CONSTANT_TYPE_FACET: FieldName.CONSTANT_TYPE_FACET,
}

BLOCK_FIELDS: frozenset[FieldName] = frozenset(
    {
        FieldName.ID,
        FieldName.COMMAND,
        FieldName.SOURCE_CODE,
        FieldName.SOURCE_THEORY,
        FieldName.SOURCE_THEORY_FACET,
        FieldName.START_LINE,
    }
)

ENTITY_FIELDS: frozenset[FieldName] = frozenset(
    {
        FieldName.CHILD_ID,
        FieldName.KIND,
        FieldName.NAME,
        FieldName.NAME_FACET,
        FieldName.CONSTANT_TYPE,
        FieldName.CONSTANT_TYPE_FACET,
        FieldName.USES,
    }
)


def field_class(name: FieldName) -> FieldClass:
    """Return the analysis class of a field."""
    return _FIELD_CLASS[name]


def facet_companion(name: FieldName) -> FieldName | None:
    """Return the verbatim field used when faceting on ``name``, if any."""
    return _FACET_COMPANION.get(name)


def doc_class(name: FieldName) -> DocClass:
    """Return whether ``name`` lives on block or entity documents."""
    return DocClass.BLOCK if name in BLOCK_FIELDS else DocClass.ENTITY


@dataclass(frozen=True, slots=True)
class TheoryEntity:
    """A named semantic object (constant, fact, or type) defined in a block.

    ``constant_type`` is set only for constants; ``uses`` lists the child ids
    of other entities this one refers to (dangling references are allowed and
    surfaced by corpus validation).
    """

    child_id: str
    parent_id: str
    kind: EntityKind
    name: str
    constant_type: str | None = None
    uses: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.child_id:
            raise ValueError("entity child_id must be non-empty")
        if self.kind is not EntityKind.CONSTANT and self.constant_type is not None:
            raise ValueError(
                f"entity {self.child_id!r}: constant_type given for kind {self.kind}"
            )


@dataclass(frozen=True, slots=True)
class Block:
    """One source-code span plus the entities it defines."""

    id: str
    source_theory: str
    start_line: int
    command: str
    source_code: str
    entities: tuple[TheoryEntity, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("block id must be non-empty")
        if self.start_line < 1:
            raise ValueError(f"block {self.id!r}: start_line must be >= 1")
        for ent in self.entities:
            if ent.parent_id != self.id:
                raise ValueError(
                    f"entity {ent.child_id!r} has parent {ent.parent_id!r}, "
                    f"expected {self.id!r}"
                )


def raw_field_values(doc: Block | TheoryEntity, name: FieldName) -> list[str]:
    """Verbatim string values a document carries for a field.

    Returns an empty list when the document class does not carry the field or
    the value is absent (e.g. ConstantType on a fact). StartLine is numeric
    and intentionally not covered here.
    """
    if isinstance(doc, Block):
        if name is FieldName.ID:
            return [doc.id]
        if name is FieldName.COMMAND:
            return [doc.command]
        if name is FieldName.SOURCE_CODE:
            return [doc.source_code]
        if name in (FieldName.SOURCE_THEORY, FieldName.SOURCE_THEORY_FACET):
            return [doc.source_theory]
        return []
    if name is FieldName.CHILD_ID:
        return [doc.child_id]
    if name is FieldName.KIND:
        return [doc.kind.value]
    if name in (FieldName.NAME, FieldName.NAME_FACET):
        return [doc.name]
    if name in (FieldName.CONSTANT_TYPE, FieldName.CONSTANT_TYPE_FACET):
        return [] if doc.constant_type is None else [doc.constant_type]
    if name is FieldName.USES:
        return list(doc.uses)
    return []
