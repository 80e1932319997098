"""Random corpus-aware query generation for the equivalence suites."""

from __future__ import annotations

import random

from factsearch.analysis import AnalyzerConfig
from factsearch.model import Block, FieldClass, FieldName, field_class
from factsearch.query import And, Exact, Filter, InRange, InResult, Not, Or, Term

TEXTUAL_FIELDS = [f for f in FieldName if field_class(f) is not FieldClass.NUMERIC]
EXTRACT_FIELDS = [
    f for f in FieldName if field_class(f) in (FieldClass.IDENTIFIER, FieldClass.FACET)
]

ALIAS_SAMPLES = ["==>", "\\<Longrightarrow>", "⟹", "=>", "<=", "~=", "-->", "\\<forall>"]
JUNK = ["zz9qx", "nosuchterm", "", "   ", "∀∀", "::"]


class QueryVocab:
    """Samples of indexed content per field, used to craft hitting queries."""

    def __init__(self, blocks: list[Block], config: AnalyzerConfig, rng: random.Random):
        self.rng = rng
        self.field_terms: dict[FieldName, list[str]] = {f: [] for f in TEXTUAL_FIELDS}
        self.field_token_runs: dict[FieldName, list[list[str]]] = {
            f: [] for f in TEXTUAL_FIELDS
        }
        sample = blocks if len(blocks) <= 300 else rng.sample(blocks, 300)
        for block in sample:
            docs = [(block, True)] + [(e, False) for e in block.entities]
            for doc, is_block in docs:
                for name in TEXTUAL_FIELDS:
                    values = self._values(doc, is_block, name)
                    run: list[str] = []
                    for value in values:
                        run.extend(t.term for t in config.analyze(name, value))
                    if run:
                        self.field_token_runs[name].append(run)
                        self.field_terms[name].extend(run)
        for name in TEXTUAL_FIELDS:
            if not self.field_terms[name]:
                self.field_terms[name] = ["fallback"]

    @staticmethod
    def _values(doc, is_block: bool, name: FieldName) -> list[str]:
        from factsearch.model import raw_field_values

        return raw_field_values(doc, name)

    def term_value(self, name: FieldName) -> str:
        rng = self.rng
        roll = rng.random()
        if roll < 0.45:
            n = rng.randint(1, 3)
            return " ".join(rng.choice(self.field_terms[name]) for _ in range(n))
        if roll < 0.6 and field_class(name) is FieldClass.TEXT:
            return rng.choice(ALIAS_SAMPLES)
        if roll < 0.8:
            base = rng.choice(self.field_terms[name])
            if len(base) >= 2:
                cut = rng.randint(1, len(base) - 1)
                style = rng.random()
                if style < 0.4:
                    return base[:cut] + "*"
                if style < 0.7:
                    return "*" + base[cut:]
                return base[:cut] + "*" + base[cut:]
            return base + "*"
        if roll < 0.9:
            return rng.choice(JUNK)
        return rng.choice(self.field_terms[name]).upper()

    def exact_value(self, name: FieldName) -> str:
        rng = self.rng
        runs = self.field_token_runs[name]
        if runs and rng.random() < 0.8:
            run = rng.choice(runs)
            if len(run) >= 2:
                start = rng.randint(0, len(run) - 2)
                width = rng.randint(2, min(3, len(run) - start))
                picked = run[start : start + width]
                if rng.random() < 0.3:
                    picked = list(reversed(picked))
                return " ".join(picked)
            return run[0]
        return " ".join(
            rng.choice(self.field_terms[name]) for _ in range(rng.randint(1, 3))
        )

    def range_bounds(self, max_line: int) -> tuple[int, int]:
        rng = self.rng
        lo = rng.randint(1, max(1, max_line))
        hi = lo + rng.randint(0, max(1, max_line // 3))
        return lo, hi


def random_filter(
    vocab: QueryVocab, name: FieldName, depth: int, max_line: int
) -> Filter:
    rng = vocab.rng
    numeric = field_class(name) is FieldClass.NUMERIC
    if depth <= 0:
        if numeric:
            lo, hi = vocab.range_bounds(max_line)
            return InRange(lo, hi)
        if rng.random() < 0.75:
            return Term(vocab.term_value(name))
        return Exact(vocab.exact_value(name))
    roll = rng.random()
    if numeric:
        if roll < 0.5:
            lo, hi = vocab.range_bounds(max_line)
            return InRange(lo, hi)
        if roll < 0.7:
            return Not(random_filter(vocab, name, depth - 1, max_line))
        members = tuple(
            random_filter(vocab, name, depth - 1, max_line)
            for _ in range(rng.randint(1, 3))
        )
        return And(members) if roll < 0.85 else Or(members)
    if roll < 0.35:
        return Term(vocab.term_value(name))
    if roll < 0.5:
        return Exact(vocab.exact_value(name))
    if roll < 0.62:
        return Not(random_filter(vocab, name, depth - 1, max_line))
    if roll < 0.74:
        members = tuple(
            random_filter(vocab, name, depth - 1, max_line)
            for _ in range(rng.randint(1, 3))
        )
        return And(members)
    if roll < 0.86:
        members = tuple(
            random_filter(vocab, name, depth - 1, max_line)
            for _ in range(rng.randint(1, 3))
        )
        return Or(members)
    extract = rng.choice(EXTRACT_FIELDS)
    sub = tuple(
        (f, random_filter(vocab, f, max(0, depth - 2), max_line))
        for f in rng.sample(TEXTUAL_FIELDS, rng.randint(1, 2))
    )
    return InResult(extract_field=extract, sub_query=sub)


def random_clauses(
    vocab: QueryVocab, max_line: int, *, max_clauses: int = 3, max_depth: int = 4
) -> list[tuple[FieldName, Filter]]:
    rng = vocab.rng
    weighted_fields = [
        FieldName.SOURCE_CODE,
        FieldName.SOURCE_CODE,
        FieldName.NAME,
        FieldName.NAME,
        FieldName.KIND,
        FieldName.COMMAND,
        FieldName.CONSTANT_TYPE,
        FieldName.SOURCE_THEORY,
        FieldName.START_LINE,
        FieldName.USES,
        FieldName.CHILD_ID,
        FieldName.ID,
        FieldName.SOURCE_THEORY_FACET,
        FieldName.NAME_FACET,
        FieldName.CONSTANT_TYPE_FACET,
    ]
    n = rng.randint(0, max_clauses)
    out = []
    for _ in range(n):
        name = rng.choice(weighted_fields)
        depth = rng.randint(0, max_depth)
        out.append((name, random_filter(vocab, name, depth, max_line)))
    return out
