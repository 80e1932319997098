"""Reading and validating theory-dump files.

The dump interchange format is line-delimited JSON: one block per line with
its entities nested, so a corpus can be streamed record by record without
ever holding more than one block in memory. :func:`split_spans` additionally
supports carving raw theory-like text into command-sized spans when no dump
is available.
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator

from .errors import MalformedRecord
from .model import Block, EntityKind, TheoryEntity

logger = logging.getLogger(__name__)

PREAMBLE_COMMAND = "<preamble>"

# Span-splitter default: a small Isabelle-like command vocabulary. Callers
# with other corpora pass their own set.
DEFAULT_COMMAND_KEYWORDS: frozenset[str] = frozenset(
    {"theory", "lemma", "theorem", "definition", "fun", "datatype", "locale", "end"}
)

_BLOCK_KEYS = {"id", "theory", "start_line", "command", "src", "entities"}
_ENTITY_KEYS = {"child_id", "kind", "name", "const_type", "uses"}


@dataclass
class ValidationReport:
    """Outcome of corpus-level checks.

    Duplicate identifiers are errors; dangling ``uses`` references are only
    warnings, because a dump produced in chunks may legitimately refer to
    entities indexed from an earlier chunk.
    """

    errors: list[tuple[int, str]] = field(default_factory=list)
    warnings: list[tuple[int, str]] = field(default_factory=list)
    block_count: int = 0
    entity_counts: Counter = field(default_factory=Counter)

    @property
    def ok(self) -> bool:
        return not self.errors

    def summary_lines(self) -> list[str]:
        lines = [f"blocks: {self.block_count}"]
        for kind in EntityKind:
            lines.append(f"entities[{kind.value}]: {self.entity_counts.get(kind, 0)}")
        for idx, msg in self.errors:
            lines.append(f"error: record {idx}: {msg}")
        for idx, msg in self.warnings:
            lines.append(f"warning: record {idx}: {msg}")
        lines.append(f"result: {'ok' if self.ok else 'invalid'}")
        return lines


def _require(obj: dict, key: str, typ: type, line: int):
    if key not in obj:
        raise MalformedRecord(line, f"missing required key {key!r}")
    value = obj[key]
    if typ is int:
        # bool is an int subclass; reject it explicitly
        if isinstance(value, bool) or not isinstance(value, int):
            raise MalformedRecord(line, f"key {key!r} must be an integer")
        return value
    if not isinstance(value, typ):
        raise MalformedRecord(line, f"key {key!r} must be a {typ.__name__}")
    return value


def _entity_from_record(obj: dict, parent_id: str, line: int) -> TheoryEntity:
    if not isinstance(obj, dict):
        raise MalformedRecord(line, "entity must be an object")
    unknown = set(obj) - _ENTITY_KEYS
    if unknown:
        logger.warning("line %d: ignoring unknown entity keys %s", line, sorted(unknown))
    child_id = _require(obj, "child_id", str, line)
    if not child_id:
        raise MalformedRecord(line, "entity child_id must be non-empty")
    kind_name = _require(obj, "kind", str, line)
    try:
        kind = EntityKind(kind_name)
    except ValueError:
        raise MalformedRecord(line, f"unknown entity kind {kind_name!r}") from None
    name = _require(obj, "name", str, line)
    uses = _require(obj, "uses", list, line)
    if not all(isinstance(u, str) for u in uses):
        raise MalformedRecord(line, "uses must be an array of strings")
    const_type = None
    if "const_type" in obj:
        if kind is not EntityKind.CONSTANT:
            raise MalformedRecord(line, f"const_type given for kind {kind.value}")
        const_type = _require(obj, "const_type", str, line)
    return TheoryEntity(
        child_id=child_id,
        parent_id=parent_id,
        kind=kind,
        name=name,
        constant_type=const_type,
        uses=tuple(uses),
    )


def block_from_record(obj: dict, line: int = 0) -> Block:
    """Build a Block from one decoded dump record."""
    if not isinstance(obj, dict):
        raise MalformedRecord(line, "record must be an object")
    unknown = set(obj) - _BLOCK_KEYS
    if unknown:
        logger.warning("line %d: ignoring unknown keys %s", line, sorted(unknown))
    block_id = _require(obj, "id", str, line)
    if not block_id:
        raise MalformedRecord(line, "block id must be non-empty")
    theory = _require(obj, "theory", str, line)
    start_line = _require(obj, "start_line", int, line)
    if start_line < 1:
        raise MalformedRecord(line, f"start_line must be >= 1, got {start_line}")
    command = _require(obj, "command", str, line)
    src = _require(obj, "src", str, line)
    raw_entities = _require(obj, "entities", list, line)
    entities = tuple(_entity_from_record(e, block_id, line) for e in raw_entities)
    return Block(
        id=block_id,
        source_theory=theory,
        start_line=start_line,
        command=command,
        source_code=src,
        entities=entities,
    )


def block_to_record(block: Block) -> dict:
    """Inverse of :func:`block_from_record`."""
    entities = []
    for ent in block.entities:
        rec: dict = {"child_id": ent.child_id, "kind": ent.kind.value, "name": ent.name}
        if ent.constant_type is not None:
            rec["const_type"] = ent.constant_type
        rec["uses"] = list(ent.uses)
        entities.append(rec)
    return {
        "id": block.id,
        "theory": block.source_theory,
        "start_line": block.start_line,
        "command": block.command,
        "src": block.source_code,
        "entities": entities,
    }


def parse_dump(stream: IO[str] | Iterable[str]) -> Iterator[Block]:
    """Stream blocks out of a line-delimited dump.

    Blocks are yielded in file order and only one record is materialized at a
    time. Malformed lines raise :class:`MalformedRecord` with the offending
    1-based line number.
    """
    for lineno, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedRecord(lineno, f"invalid JSON: {exc.msg}") from None
        try:
            yield block_from_record(obj, lineno)
        except ValueError as exc:
            raise MalformedRecord(lineno, str(exc)) from None


def parse_dump_file(path: str) -> Iterator[Block]:
    with open(path, encoding="utf-8") as fh:
        yield from parse_dump(fh)


def write_dump(blocks: Iterable[Block], stream: IO[str]) -> int:
    """Write blocks in the dump format; returns the record count."""
    count = 0
    for block in blocks:
        stream.write(json.dumps(block_to_record(block), ensure_ascii=False))
        stream.write("\n")
        count += 1
    return count


def write_dump_file(blocks: Iterable[Block], path: str) -> int:
    with open(path, "w", encoding="utf-8") as fh:
        return write_dump(blocks, fh)


def split_spans(
    source_text: str, command_keywords: Iterable[str]
) -> list[tuple[int, str, str]]:
    """Partition raw theory text into (start_line, command, span_text) triples.

    A new span starts at every line whose first whitespace-delimited token is
    one of ``command_keywords``; anything before the first such line becomes a
    span with the pseudo-command ``<preamble>``. The spans concatenate back to
    exactly the input.
    """
    keywords = set(command_keywords)
    if not keywords:
        raise ValueError("command_keywords must be non-empty")
    lines = source_text.splitlines(keepends=True)
    spans: list[tuple[int, str, list[str]]] = []
    for lineno, line in enumerate(lines, start=1):
        parts = line.split(maxsplit=1)
        first = parts[0] if parts else ""
        if first in keywords:
            spans.append((lineno, first, [line]))
        elif spans:
            spans[-1][2].append(line)
        else:
            spans.append((1, PREAMBLE_COMMAND, [line]))
    return [(start, command, "".join(chunk)) for start, command, chunk in spans]


def validate_corpus(blocks: list[Block]) -> ValidationReport:
    """Cross-record checks: id uniqueness, id-space disjointness, uses targets.

    ``recordIndex`` in the report is the 1-based position of the offending
    block in the input (for entity problems, the position of the containing
    block).
    """
    report = ValidationReport()
    block_ids: dict[str, int] = {}
    child_ids: dict[str, int] = {}
    uses_seen: list[tuple[int, str, str]] = []

    for idx, block in enumerate(blocks, start=1):
        report.block_count += 1
        if block.id in block_ids:
            report.errors.append(
                (idx, f"duplicate block id {block.id!r} (first at record {block_ids[block.id]})")
            )
        else:
            block_ids[block.id] = idx
        for ent in block.entities:
            report.entity_counts[ent.kind] += 1
            if ent.child_id in child_ids:
                report.errors.append(
                    (
                        idx,
                        f"duplicate child id {ent.child_id!r} "
                        f"(first at record {child_ids[ent.child_id]})",
                    )
                )
            else:
                child_ids[ent.child_id] = idx
            for target in ent.uses:
                uses_seen.append((idx, ent.child_id, target))

    for block_id, idx in block_ids.items():
        if block_id in child_ids:
            report.errors.append(
                (idx, f"id {block_id!r} used as both block id and child id")
            )
    for idx, child_id, target in uses_seen:
        if target not in child_ids:
            report.warnings.append(
                (idx, f"entity {child_id!r} uses unknown entity {target!r}")
            )
    return report


def validate_dump_file(path: str) -> ValidationReport:
    """Validate a dump file, folding parse failures into the report."""
    blocks: list[Block] = []
    parse_errors: list[tuple[int, str]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                blocks.append(block_from_record(obj, lineno))
            except MalformedRecord as exc:
                parse_errors.append((lineno, str(exc)))
            except (json.JSONDecodeError, ValueError) as exc:
                parse_errors.append((lineno, str(exc)))
    report = validate_corpus(blocks)
    report.errors = parse_errors + report.errors
    return report
