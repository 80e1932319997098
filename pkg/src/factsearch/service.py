"""REST API over a loaded index.

The server is stateless apart from the shared immutable index handle, so any
number of requests may run concurrently. Response bodies are produced by the
wire codec, byte-identical to what the ``query`` CLI command prints for the
same request.
"""

from __future__ import annotations

import json

from fastapi import FastAPI, HTTPException, Request, Response

from . import query as q
from . import wire
from .errors import ExpansionOverflow, NotFacetable, QueryError
from .index import Index
from .model import FieldName


def _json_response(payload: dict) -> Response:
    return Response(content=wire.to_json_bytes(payload), media_type="application/json")


def create_app(
    index: Index | None,
    *,
    slop_default: int = q.DEFAULT_SLOP,
    max_expansion: int = q.DEFAULT_MAX_EXPANSION,
    cors_origin: str | None = None,
) -> FastAPI:
    app = FastAPI(title="factsearch", docs_url=None, redoc_url=None)

    if cors_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[cors_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    def _index() -> Index:
        if index is None:
            raise HTTPException(status_code=503, detail="index not loaded")
        return index

    @app.post("/v1/search")
    async def search(request: Request) -> Response:
        idx = _index()
        try:
            body = json.loads(await request.body())
        except json.JSONDecodeError as exc:
            raise HTTPException(status_code=400, detail=f"invalid JSON: {exc.msg}")
        try:
            req = wire.parse_search_request(body)
        except wire.WireError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        try:
            page = q.run(
                idx,
                req.clauses,
                req.facet_fields,
                offset=req.offset,
                limit=req.limit,
                slop=req.slop if req.slop is not None else slop_default,
                max_expansion=max_expansion,
            )
        except ExpansionOverflow as exc:
            raise HTTPException(status_code=422, detail=_clause_message(exc))
        except QueryError as exc:
            raise HTTPException(status_code=400, detail=_clause_message(exc))
        except NotFacetable as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return _json_response(wire.encode_search_response(idx, page))

    @app.get("/v1/blocks/{block_id}")
    async def get_block(block_id: str) -> Response:
        idx = _index()
        ord_ = idx.block_ord(block_id)
        if ord_ is None:
            raise HTTPException(status_code=404, detail=f"no block {block_id!r}")
        return _json_response(wire.encode_block(idx.doc(ord_)))

    @app.get("/v1/entities/{child_id}")
    async def get_entity(child_id: str) -> Response:
        idx = _index()
        ord_ = idx.entity_ord(child_id)
        if ord_ is None:
            raise HTTPException(status_code=404, detail=f"no entity {child_id!r}")
        users = idx.term_docs(FieldName.USES, child_id)
        used_by = [idx.doc(int(u)).child_id for u in users]
        return _json_response(wire.encode_entity(idx.doc(ord_), used_by))

    return app


def _clause_message(exc: QueryError) -> str:
    if exc.clause is not None:
        return f"clause {exc.clause}: {exc}"
    return str(exc)
