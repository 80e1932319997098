import json
import os
import subprocess
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import pytest
from fastapi.testclient import TestClient

from factsearch import query as q
from factsearch import wire
from factsearch.model import FieldName
from factsearch.service import create_app

from conftest import demo_dump_path, demo_scenario_path

F = FieldName

MATCH_ALL = {"clauses": [], "facetFields": ["Kind"], "offset": 0, "limit": 10}


@pytest.fixture(scope="module")
def client(demo_index):
    return TestClient(create_app(demo_index))


def test_search_match_all(client, demo_index, demo_blocks):
    resp = client.post("/v1/search", json=MATCH_ALL)
    assert resp.status_code == 200
    body = resp.json()
    assert body["total"] == len(demo_blocks)
    kind_counts = {v["value"]: v["count"] for v in body["facets"]["Kind"]["values"]}
    assert sum(kind_counts.values()) == 65
    assert len(body["results"]) == 10


def test_search_scenario_requests_match_fixtures(client):
    scenario = json.load(open(demo_scenario_path()))
    for step in scenario["steps"]:
        resp = client.post("/v1/search", json=step["request"])
        assert resp.status_code == 200
        body = resp.json()
        assert body["total"] == step["expectedTotal"], step["name"]
        got = {r["blockId"] for r in body["results"]}
        assert got <= set(step["expectedBlockIds"])


def test_search_bad_filter_names_clause(client):
    req = {
        "clauses": [
            {"field": "SourceCode", "filter": {"type": "Term", "value": "x"}},
            {"field": "SourceCode", "filter": {"type": "InRange", "lo": 1, "hi": 2}},
        ],
        "facetFields": [], "offset": 0, "limit": 10,
    }
    resp = client.post("/v1/search", json=req)
    assert resp.status_code == 400
    assert "clause 1" in resp.json()["detail"]


def test_search_unknown_field_is_400(client):
    req = {"clauses": [{"field": "Nope", "filter": {"type": "Term", "value": "x"}}]}
    resp = client.post("/v1/search", json=req)
    assert resp.status_code == 400
    assert "clause 0" in resp.json()["detail"]


def test_search_malformed_json_is_400(client):
    resp = client.post(
        "/v1/search", content=b"{nope", headers={"content-type": "application/json"}
    )
    assert resp.status_code == 400


def test_search_unfacetable_field_is_400(client):
    req = {"clauses": [], "facetFields": ["SourceCode"]}
    resp = client.post("/v1/search", json=req)
    assert resp.status_code == 400
    assert "facet" in resp.json()["detail"].lower()


def test_search_limit_out_of_range_is_400(client):
    resp = client.post("/v1/search", json={"clauses": [], "limit": 5000})
    assert resp.status_code == 400


def test_search_expansion_overflow_is_422(demo_index):
    app = create_app(demo_index, max_expansion=2)
    local = TestClient(app)
    req = {
        "clauses": [{
            "field": "Uses",
            "filter": {"type": "InResult", "extractField": "ChildId", "subQuery": []},
        }],
    }
    resp = local.post("/v1/search", json=req)
    assert resp.status_code == 422


def test_index_not_loaded_is_503():
    local = TestClient(create_app(None))
    assert local.post("/v1/search", json=MATCH_ALL).status_code == 503
    assert local.get("/v1/blocks/x").status_code == 503


def test_get_block(client, demo_blocks):
    resp = client.get("/v1/blocks/b-primes-01")
    assert resp.status_code == 200
    body = resp.json()
    assert body["blockId"] == "b-primes-01"
    assert body["theory"] == "Demo.Primes"
    assert body["startLine"] == 5
    assert {e["childId"] for e in body["entities"]} == {
        "e-primes-prime", "e-primes-prime-def",
    }
    assert body["entities"][0]["constType"] == "nat ⇒ bool"


def test_get_block_unknown_404(client):
    assert client.get("/v1/blocks/no-such").status_code == 404


def test_get_block_rejects_entity_ids(client):
    assert client.get("/v1/blocks/e-primes-prime").status_code == 404


def test_get_entity_reverse_uses(client, demo_blocks):
    resp = client.get("/v1/entities/e-primes-prime")
    assert resp.status_code == 200
    body = resp.json()
    assert body["parentId"] == "b-primes-01"
    expected = {
        e.child_id
        for b in demo_blocks for e in b.entities
        if "e-primes-prime" in e.uses
    }
    assert set(body["usedBy"]) == expected and expected


def test_get_entity_without_users(client):
    resp = client.get("/v1/entities/e-logic-em")
    assert resp.status_code == 200
    assert resp.json()["usedBy"] == []


def test_get_entity_unknown_404(client):
    assert client.get("/v1/entities/nope").status_code == 404


def test_http_body_byte_equal_to_engine_encoding(client, demo_index):
    scenario = json.load(open(demo_scenario_path()))
    for step in scenario["steps"]:
        req = wire.parse_search_request(step["request"])
        page = q.run(demo_index, req.clauses, req.facet_fields,
                     offset=req.offset, limit=req.limit)
        expected = wire.to_json_bytes(wire.encode_search_response(demo_index, page))
        resp = client.post("/v1/search", json=step["request"])
        assert resp.content == expected


def test_hundred_concurrent_requests_identical(client):
    scenario = json.load(open(demo_scenario_path()))
    request = scenario["steps"][0]["request"]

    def call(_):
        return client.post("/v1/search", json=request).content

    with ThreadPoolExecutor(max_workers=16) as pool:
        bodies = list(pool.map(call, range(100)))
    assert len(set(bodies)) == 1


# --- CLI ----------------------------------------------------------------------

def _cli(*args, env=None):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run(
        [sys.executable, "-m", "factsearch", *args],
        capture_output=True, env=full_env,
    )


def test_cli_validate_clean_corpus_exit_0():
    proc = _cli("validate", demo_dump_path())
    assert proc.returncode == 0
    assert b"result: ok" in proc.stdout


def test_cli_validate_bad_corpus_exit_2(tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"id": "b1"}\n', encoding="utf-8")
    proc = _cli("validate", str(bad))
    assert proc.returncode == 2
    assert b"error" in proc.stdout


def test_cli_usage_error_exit_1():
    proc = _cli("query")  # missing arguments
    assert proc.returncode == 1


def test_cli_missing_index_dir_exit_3(tmp_path):
    proc = _cli("query", str(tmp_path / "noidx"), "{}")
    assert proc.returncode == 3


def test_cli_bad_request_json_exit_2(tmp_path):
    idx_dir = tmp_path / "idx"
    assert _cli("index", demo_dump_path(), str(idx_dir)).returncode == 0
    proc = _cli("query", str(idx_dir), "{nope")
    assert proc.returncode == 2


def test_cli_index_query_round_trip(tmp_path, demo_index):
    idx_dir = str(tmp_path / "idx")
    proc = _cli("index", demo_dump_path(), idx_dir)
    assert proc.returncode == 0, proc.stderr
    scenario = json.load(open(demo_scenario_path()))
    for step in scenario["steps"]:
        req_file = tmp_path / "req.json"
        req_file.write_text(json.dumps(step["request"]), encoding="utf-8")
        proc = _cli("query", idx_dir, str(req_file))
        assert proc.returncode == 0, proc.stderr
        req = wire.parse_search_request(step["request"])
        page = q.run(demo_index, req.clauses, req.facet_fields,
                     offset=req.offset, limit=req.limit)
        expected = wire.to_json_bytes(wire.encode_search_response(demo_index, page))
        assert proc.stdout == expected


def test_cli_query_inline_and_env_fallback(tmp_path):
    idx_dir = str(tmp_path / "idx")
    _cli("index", demo_dump_path(), idx_dir)
    inline = json.dumps(MATCH_ALL)
    via_arg = _cli("query", idx_dir, inline)
    via_env = _cli("query", inline, env={"FACTSEARCH_INDEX": idx_dir})
    assert via_arg.returncode == 0 and via_env.returncode == 0
    assert via_arg.stdout == via_env.stdout
    assert json.loads(via_arg.stdout)["total"] == 40


def test_cli_symbols_export_round_trips(tmp_path):
    proc = _cli("symbols", "export")
    assert proc.returncode == 0
    from factsearch.analysis import default_symbol_table, parse_symbol_table

    table = parse_symbol_table(proc.stdout.decode("utf-8"))
    assert table.mapping == default_symbol_table().mapping


def test_cli_serve_and_post(tmp_path):
    import urllib.request

    idx_dir = str(tmp_path / "idx")
    assert _cli("index", demo_dump_path(), idx_dir).returncode == 0
    port = 18631
    proc = subprocess.Popen(
        [sys.executable, "-m", "factsearch", "serve", idx_dir, "--port", str(port)],
        stdout=subprocess.PIPE, stderr=subprocess.PIPE,
    )
    try:
        body = json.dumps(MATCH_ALL).encode("utf-8")
        request = urllib.request.Request(
            f"http://127.0.0.1:{port}/v1/search",
            data=body, headers={"Content-Type": "application/json"},
        )
        deadline = time.time() + 30
        last_error = None
        while time.time() < deadline:
            try:
                with urllib.request.urlopen(request, timeout=2) as resp:
                    assert resp.status == 200
                    payload = json.loads(resp.read())
                    assert payload["total"] == 40
                    break
            except (ConnectionError, OSError) as exc:
                last_error = exc
                time.sleep(0.3)
        else:
            pytest.fail(f"server never came up: {last_error}")
    finally:
        proc.terminate()
        proc.wait(timeout=10)
