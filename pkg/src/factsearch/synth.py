"""Deterministic synthetic corpora for tests, benchmarks, and demos.

Generated blocks look loosely like theorem-prover sources: command keyword,
a name, a soup of words, notation (both Unicode and ASCII spellings, so the
synonym machinery gets exercised), occasional markup tags, and entities with
names, types, and usage links back to earlier entities.
"""

from __future__ import annotations

import random
from typing import Iterator

from .model import Block, EntityKind, TheoryEntity

WORDS = (
    "prime nat bool int list set map fold sum mul add zero succ pred even odd "
    "divides gcd lcm sorted distinct length rev append member insert delete "
    "union inter minus subset finite infinite card induct rec wf acc trans "
    "refl sym assoc comm mono anti dense linear total order group ring field "
    "ideal kernel image graph node edge path cycle tree forest leaf root"
).split()

SYMBOLS = (
    "⟹ ==> \\<Longrightarrow> ⟶ --> ⇒ => ∀ \\<forall> "
    "∃ ∧ ∨ ¬ ≤ <= ≠ ~= = < + - ∈ λ"
).split()

COMMANDS = ("definition", "lemma", "theorem", "fun", "datatype", "locale", "inductive")

TYPE_ATOMS = ("nat", "bool", "int", "'a", "'a list", "nat list", "'a set", "real")

MARKUP = ("<b>", "</b>", "<span class=\"keyword\">", "</span>")


def _name(rng: random.Random) -> str:
    base = rng.choice(WORDS)
    style = rng.random()
    if style < 0.5:
        return base
    if style < 0.8:
        return f"{base}_{rng.choice(WORDS)}"
    return f"{rng.choice(WORDS).capitalize()}.{base}"


def _const_type(rng: random.Random) -> str:
    arrow = rng.choice(("⇒", "=>"))
    atoms = [rng.choice(TYPE_ATOMS) for _ in range(rng.randint(1, 3))]
    return f" {arrow} ".join(atoms)


def _source(rng: random.Random, command: str, names: list[str]) -> str:
    parts = [command, *names[:1]]
    if rng.random() < 0.4:
        parts.append(f':: "{_const_type(rng)}"')
    parts.append("where" if command == "definition" else ":")
    body: list[str] = []
    for _ in range(rng.randint(3, 14)):
        roll = rng.random()
        if roll < 0.55:
            body.append(rng.choice(WORDS))
        elif roll < 0.85:
            body.append(rng.choice(SYMBOLS))
        elif roll < 0.93:
            body.append(rng.choice(("(", ")", "[", "]")))
        else:
            body.append(rng.choice(MARKUP))
    lines = [" ".join(parts), "  " + " ".join(body)]
    if rng.random() < 0.5:
        lines.append("  by " + rng.choice(("auto", "simp", "blast", "arith")))
    return "\n".join(lines) + "\n"


def generate_blocks(
    seed: int,
    n_blocks: int,
    *,
    n_theories: int = 12,
    entities_per_block: tuple[int, int] = (0, 4),
    dangling_rate: float = 0.01,
) -> Iterator[Block]:
    """Yield ``n_blocks`` reproducible blocks for the given seed.

    Entity counts are drawn uniformly from ``entities_per_block``; set both
    ends equal for an exact ratio. A small share of ``uses`` references is
    intentionally dangling, mirroring dumps produced chunk by chunk.
    """
    rng = random.Random(seed)
    theories = [f"Synth{i // 26}.T{chr(ord('A') + i % 26)}" for i in range(n_theories)]
    theory_lines = {t: 1 for t in theories}
    known_children: list[str] = []
    ent_seq = 0
    for i in range(n_blocks):
        theory = rng.choice(theories)
        command = rng.choice(COMMANDS)
        n_ents = rng.randint(*entities_per_block)
        names = [_name(rng) for _ in range(max(1, n_ents))]
        entities = []
        block_id = f"b{i:06d}"
        for j in range(n_ents):
            kind = rng.choices(
                (EntityKind.CONSTANT, EntityKind.FACT, EntityKind.TYPE),
                weights=(4, 5, 1),
            )[0]
            uses: list[str] = []
            for _ in range(rng.randint(0, 3)):
                if known_children and rng.random() > dangling_rate:
                    uses.append(rng.choice(known_children))
                else:
                    uses.append(f"missing{rng.randint(0, 999):03d}")
            child_id = f"e{ent_seq:06d}"
            ent_seq += 1
            entities.append(
                TheoryEntity(
                    child_id=child_id,
                    parent_id=block_id,
                    kind=kind,
                    name=names[j % len(names)],
                    constant_type=_const_type(rng) if kind is EntityKind.CONSTANT else None,
                    uses=tuple(uses),
                )
            )
            known_children.append(child_id)
        src = _source(rng, command, names)
        start = theory_lines[theory]
        theory_lines[theory] = start + src.count("\n")
        yield Block(
            id=block_id,
            source_theory=theory,
            start_line=start,
            command=command,
            source_code=src,
            entities=tuple(entities),
        )


def make_corpus(seed: int, n_blocks: int, **kwargs) -> list[Block]:
    return list(generate_blocks(seed, n_blocks, **kwargs))
