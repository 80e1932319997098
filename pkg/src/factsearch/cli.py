"""Command-line interface: validate, index, query, serve, symbols.

Exit codes: 0 success, 1 usage error, 2 data error (bad dump, bad request,
validation failures), 3 I/O error (missing or corrupt files).
"""

from __future__ import annotations

import json
import os
import sys

import click

from . import query as q
from . import storage, wire
from .analysis import AnalyzerConfig, default_symbol_table, load_symbol_table
from .errors import (
    CorruptSegment,
    FactSearchError,
    QueryError,
    VersionMismatch,
)
from .index import build
from .ingest import parse_dump_file, validate_dump_file

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_IO = 3

_INDEX_DIR_HELP = "Index directory (falls back to $FACTSEARCH_INDEX)."


@click.group()
def cli() -> None:
    """Faceted search over theory-corpus dumps."""


@cli.command()
@click.argument("dump_file", type=click.Path())
def validate(dump_file: str) -> None:
    """Check a dump file and print its validation report."""
    report = validate_dump_file(dump_file)
    for line in report.summary_lines():
        click.echo(line)
    if not report.ok:
        sys.exit(EXIT_DATA)


@cli.command(name="index")
@click.argument("dump_file", type=click.Path())
@click.argument("index_dir", type=click.Path())
@click.option("--symbols", "symbols_file", type=click.Path(), default=None,
              help="Symbol synonym table overriding the built-in one.")
def index_cmd(dump_file: str, index_dir: str, symbols_file: str | None) -> None:
    """Build an index directory from a dump file."""
    report = validate_dump_file(dump_file)
    if not report.ok:
        for line in report.summary_lines():
            click.echo(line, err=True)
        sys.exit(EXIT_DATA)
    table = load_symbol_table(symbols_file) if symbols_file else default_symbol_table()
    config = AnalyzerConfig(symbols=table)
    idx = build(parse_dump_file(dump_file), config)
    storage.save(idx, index_dir)
    stats = idx.stats()
    click.echo(
        f"indexed {stats['block_count']} blocks, "
        f"{stats['entity_count']} entities into {index_dir}"
    )


def _load_index(index_dir: str | None):
    directory = index_dir or os.environ.get("FACTSEARCH_INDEX")
    if not directory:
        raise click.UsageError("no index directory given and FACTSEARCH_INDEX unset")
    return storage.load(directory)


@cli.command(name="query")
@click.argument("index_dir", type=click.Path(), required=False)
@click.argument("request", type=str, required=False)
@click.option("--slop-default", type=int, default=q.DEFAULT_SLOP, show_default=True)
@click.option("--max-expansion", type=int, default=q.DEFAULT_MAX_EXPANSION, show_default=True)
def query_cmd(
    index_dir: str | None, request: str | None, slop_default: int, max_expansion: int
) -> None:
    """Run one search request (a JSON file path or inline JSON).

    Prints the response exactly as the HTTP endpoint would send it. With a
    single argument the index directory comes from $FACTSEARCH_INDEX.
    """
    if request is None:
        index_dir, request = None, index_dir
    if request is None:
        raise click.UsageError("missing REQUEST argument")
    idx = _load_index(index_dir)
    if os.path.exists(request):
        with open(request, encoding="utf-8") as fh:
            raw = fh.read()
    else:
        raw = request
    body = json.loads(raw)
    req = wire.parse_search_request(body)
    page = q.run(
        idx,
        req.clauses,
        req.facet_fields,
        offset=req.offset,
        limit=req.limit,
        slop=req.slop if req.slop is not None else slop_default,
        max_expansion=max_expansion,
    )
    sys.stdout.buffer.write(wire.to_json_bytes(wire.encode_search_response(idx, page)))
    sys.stdout.buffer.flush()


@cli.command()
@click.argument("index_dir", type=click.Path(), required=False)
@click.option("--port", type=int, default=8600, show_default=True)
@click.option("--host", type=str, default="127.0.0.1", show_default=True)
@click.option("--slop-default", type=int, default=q.DEFAULT_SLOP, show_default=True)
@click.option("--max-expansion", type=int, default=q.DEFAULT_MAX_EXPANSION, show_default=True)
@click.option("--cors-origin", type=str, default=None,
              help="Origin allowed to call the API from a browser.")
def serve(
    index_dir: str | None,
    port: int,
    host: str,
    slop_default: int,
    max_expansion: int,
    cors_origin: str | None,
) -> None:
    """Serve the REST API over a loaded index."""
    import uvicorn

    from .service import create_app

    idx = _load_index(index_dir)
    app = create_app(
        idx,
        slop_default=slop_default,
        max_expansion=max_expansion,
        cors_origin=cors_origin,
    )
    uvicorn.run(app, host=host, port=port, log_level="warning")


@cli.group()
def symbols() -> None:
    """Symbol synonym table utilities."""


@symbols.command()
@click.option("--output", type=click.Path(), default=None, help="Write to a file instead of stdout.")
def export(output: str | None) -> None:
    """Print the built-in synonym table in the loadable format."""
    text = default_symbol_table().to_text()
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def main(argv: list[str] | None = None) -> None:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        sys.exit(EXIT_USAGE)
    except click.ClickException as exc:
        exc.show()
        sys.exit(EXIT_USAGE)
    except click.exceptions.Abort:
        sys.exit(EXIT_USAGE)
    except (VersionMismatch, CorruptSegment) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_IO)
    except (QueryError, FactSearchError, json.JSONDecodeError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_DATA)
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_IO)


if __name__ == "__main__":
    main()
