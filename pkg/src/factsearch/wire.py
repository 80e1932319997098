"""JSON wire format for search requests and responses.

Filters travel as a tagged union: ``{"type": "Term", "value": ...}``,
``{"type": "Exact", "value": ...}``, ``{"type": "InRange", "lo":, "hi":}``,
``{"type": "Not", "filter":}``, ``{"type": "And"|"Or", "filters": [...]}``,
``{"type": "InResult", "extractField":, "subQuery": [{"field":, "filter":}]}``.

Responses are encoded here (not by the web framework) so that the CLI
``query`` command and the HTTP endpoint produce byte-identical output for
identical requests.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

from . import query as q
from .errors import FactSearchError
from .index import FacetResult, Index
from .model import Block, FieldName, TheoryEntity
from .query import ResultPage


class WireError(FactSearchError):
    """A request body does not follow the wire schema."""


def parse_field(name: object, where: str) -> FieldName:
    if not isinstance(name, str):
        raise WireError(f"{where}: field name must be a string")
    try:
        return FieldName(name)
    except ValueError:
        raise WireError(f"{where}: unknown field {name!r}") from None


def _require_key(obj: dict, key: str, where: str):
    if key not in obj:
        raise WireError(f"{where}: missing key {key!r}")
    return obj[key]


def _int_value(value: object, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise WireError(f"{where}: expected an integer")
    return value


def parse_filter(obj: object, where: str) -> q.Filter:
    if not isinstance(obj, dict):
        raise WireError(f"{where}: filter must be an object")
    kind = _require_key(obj, "type", where)
    if kind == "Term" or kind == "Exact":
        value = _require_key(obj, "value", where)
        if not isinstance(value, str):
            raise WireError(f"{where}: {kind} value must be a string")
        return q.Term(value) if kind == "Term" else q.Exact(value)
    if kind == "InRange":
        lo = _int_value(_require_key(obj, "lo", where), f"{where}.lo")
        hi = _int_value(_require_key(obj, "hi", where), f"{where}.hi")
        return q.InRange(lo, hi)
    if kind == "Not":
        return q.Not(parse_filter(_require_key(obj, "filter", where), f"{where}.filter"))
    if kind in ("And", "Or"):
        members = _require_key(obj, "filters", where)
        if not isinstance(members, list) or not members:
            raise WireError(f"{where}: {kind} needs a non-empty filters array")
        parsed = tuple(
            parse_filter(m, f"{where}.filters[{i}]") for i, m in enumerate(members)
        )
        return q.And(parsed) if kind == "And" else q.Or(parsed)
    if kind == "InResult":
        extract = parse_field(_require_key(obj, "extractField", where), f"{where}.extractField")
        sub = _require_key(obj, "subQuery", where)
        if not isinstance(sub, list):
            raise WireError(f"{where}: subQuery must be an array")
        sub_clauses = tuple(
            parse_clause(c, f"{where}.subQuery[{i}]") for i, c in enumerate(sub)
        )
        try:
            return q.InResult(extract_field=extract, sub_query=sub_clauses)
        except ValueError as exc:
            raise WireError(f"{where}: {exc}") from None
    raise WireError(f"{where}: unknown filter type {kind!r}")


def parse_clause(obj: object, where: str) -> tuple[FieldName, q.Filter]:
    if not isinstance(obj, dict):
        raise WireError(f"{where}: clause must be an object")
    field = parse_field(_require_key(obj, "field", where), where)
    filt = parse_filter(_require_key(obj, "filter", where), f"{where}.filter")
    return field, filt


def encode_filter(f: q.Filter) -> dict:
    if isinstance(f, q.Term):
        return {"type": "Term", "value": f.query}
    if isinstance(f, q.Exact):
        return {"type": "Exact", "value": f.phrase}
    if isinstance(f, q.InRange):
        return {"type": "InRange", "lo": f.lo, "hi": f.hi}
    if isinstance(f, q.Not):
        return {"type": "Not", "filter": encode_filter(f.filter)}
    if isinstance(f, q.And):
        return {"type": "And", "filters": [encode_filter(m) for m in f.filters]}
    if isinstance(f, q.Or):
        return {"type": "Or", "filters": [encode_filter(m) for m in f.filters]}
    if isinstance(f, q.InResult):
        return {
            "type": "InResult",
            "extractField": f.extract_field.value,
            "subQuery": [
                {"field": fld.value, "filter": encode_filter(flt)}
                for fld, flt in f.sub_query
            ],
        }
    raise TypeError(f"unknown filter {f!r}")


@dataclass
class SearchRequest:
    clauses: list[tuple[FieldName, q.Filter]] = dc_field(default_factory=list)
    facet_fields: list[FieldName] = dc_field(default_factory=list)
    offset: int = 0
    limit: int = 10
    slop: int | None = None

    def to_wire(self) -> dict:
        body: dict = {
            "clauses": [
                {"field": fld.value, "filter": encode_filter(flt)}
                for fld, flt in self.clauses
            ],
            "facetFields": [f.value for f in self.facet_fields],
            "offset": self.offset,
            "limit": self.limit,
        }
        if self.slop is not None:
            body["slop"] = self.slop
        return body


def parse_search_request(obj: object) -> SearchRequest:
    if not isinstance(obj, dict):
        raise WireError("request body must be an object")
    req = SearchRequest()
    raw_clauses = obj.get("clauses", [])
    if not isinstance(raw_clauses, list):
        raise WireError("clauses must be an array")
    req.clauses = [
        parse_clause(c, f"clause {i}") for i, c in enumerate(raw_clauses)
    ]
    raw_facets = obj.get("facetFields", [])
    if not isinstance(raw_facets, list):
        raise WireError("facetFields must be an array")
    req.facet_fields = [
        parse_field(name, f"facetFields[{i}]") for i, name in enumerate(raw_facets)
    ]
    if "offset" in obj:
        req.offset = _int_value(obj["offset"], "offset")
    if "limit" in obj:
        req.limit = _int_value(obj["limit"], "limit")
    if "slop" in obj and obj["slop"] is not None:
        req.slop = _int_value(obj["slop"], "slop")
    return req


def _encode_entity_brief(ent: TheoryEntity) -> dict:
    out = {"childId": ent.child_id, "kind": ent.kind.value, "name": ent.name}
    if ent.constant_type is not None:
        out["constType"] = ent.constant_type
    return out


def encode_facet(facet: FacetResult) -> dict:
    return {
        "values": [{"value": v, "count": c} for v, c in facet.values],
        "truncated": facet.truncated,
    }


def encode_search_response(index: Index, page: ResultPage) -> dict:
    results = []
    for res in page.results:
        block = index.doc(res.block_ordinal)
        results.append(
            {
                "blockId": block.id,
                "score": res.score,
                "theory": block.source_theory,
                "startLine": block.start_line,
                "command": block.command,
                "sourceCode": block.source_code,
                "entities": [_encode_entity_brief(e) for e in block.entities],
                "matchedEntityIds": [
                    index.doc(e).child_id for e in res.matched_entities
                ],
            }
        )
    return {
        "total": page.total,
        "offset": page.offset,
        "limit": page.limit,
        "results": results,
        "facets": {name.value: encode_facet(f) for name, f in page.facets.items()},
    }


def encode_block(block: Block) -> dict:
    return {
        "blockId": block.id,
        "theory": block.source_theory,
        "startLine": block.start_line,
        "command": block.command,
        "sourceCode": block.source_code,
        "entities": [
            {**_encode_entity_brief(e), "uses": list(e.uses)} for e in block.entities
        ],
    }


def encode_entity(ent: TheoryEntity, used_by: list[str]) -> dict:
    out = {
        "childId": ent.child_id,
        "parentId": ent.parent_id,
        "kind": ent.kind.value,
        "name": ent.name,
    }
    if ent.constant_type is not None:
        out["constType"] = ent.constant_type
    out["uses"] = list(ent.uses)
    out["usedBy"] = used_by
    return out


def to_json_bytes(obj: object) -> bytes:
    """Canonical response encoding shared by the CLI and the HTTP service."""
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":")).encode("utf-8")
