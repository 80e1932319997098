from __future__ import annotations

import importlib.resources

import pytest

import factsearch as fs
from factsearch import synth
from factsearch.analysis import AnalyzerConfig

from oracle import Oracle

_ACCEPTANCE_RESULTS: list[tuple[str, bool]] = []


def record_acceptance(name: str, passed: bool) -> None:
    _ACCEPTANCE_RESULTS.append((name, passed))


def demo_dump_path() -> str:
    return str(importlib.resources.files("factsearch") / "demo" / "demo.jsonl")


def demo_scenario_path() -> str:
    return str(importlib.resources.files("factsearch") / "demo" / "scenario.json")


@pytest.fixture(scope="session")
def config() -> AnalyzerConfig:
    return AnalyzerConfig.default()


@pytest.fixture(scope="session")
def demo_blocks() -> list[fs.Block]:
    return list(fs.parse_dump_file(demo_dump_path()))


@pytest.fixture(scope="session")
def demo_index(demo_blocks, config) -> fs.Index:
    return fs.build(demo_blocks, config)


@pytest.fixture(scope="session")
def demo_oracle(demo_blocks, config) -> Oracle:
    return Oracle(demo_blocks, config)


@pytest.fixture(scope="session")
def small_blocks(config) -> list[fs.Block]:
    return synth.make_corpus(seed=1234, n_blocks=120)


@pytest.fixture(scope="session")
def small_index(small_blocks, config) -> fs.Index:
    return fs.build(small_blocks, config)


@pytest.fixture(scope="session")
def small_oracle(small_blocks, config) -> Oracle:
    return Oracle(small_blocks, config)


def engine_block_ids(index: fs.Index, clauses, **kw) -> set[str]:
    return {index.doc(r.block_ordinal).id for r in fs.eval_query(index, clauses, **kw)}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call" or "test_acceptance" not in item.nodeid:
        return
    doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
    record_acceptance(doc, report.passed)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed in _ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} - {name}")
