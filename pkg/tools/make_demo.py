#!/usr/bin/env python3
"""Author the bundled demo corpus and drill-down scenario fixtures.

Builds the 40-block / 65-entity corpus in code, validates it, computes the
scenario expectations with the naive reference evaluator (tests/oracle.py),
checks the drill-down invariants, and writes:

    src/factsearch/demo/demo.jsonl
    src/factsearch/demo/scenario.json

Run from the repository root: python3 tools/make_demo.py
"""

from __future__ import annotations

import json
import os
import sys

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(ROOT, "src"))
sys.path.insert(0, os.path.join(ROOT, "tests"))

from factsearch.analysis import AnalyzerConfig
from factsearch.ingest import validate_corpus, write_dump_file
from factsearch.model import Block, EntityKind, TheoryEntity
from factsearch.query import InResult, Or, Term
from factsearch.model import FieldName as F

from oracle import Oracle  # tests/oracle.py


def ent(cid, parent, kind, name, ctype=None, uses=()):
    return TheoryEntity(
        child_id=cid,
        parent_id=parent,
        kind=kind,
        name=name,
        constant_type=ctype,
        uses=tuple(uses),
    )


def blk(bid, theory, start, command, src, ents=()):
    return Block(
        id=bid,
        source_theory=theory,
        start_line=start,
        command=command,
        source_code=src,
        entities=tuple(ents),
    )


C, FA, TY = EntityKind.CONSTANT, EntityKind.FACT, EntityKind.TYPE

blocks: list[Block] = []

# --- Demo.Primes ---------------------------------------------------------
T = "Demo.Primes"
blocks += [
    blk("b-primes-00", T, 1, "theory", "theory Primes\n  imports Main\nbegin\n"),
    blk(
        "b-primes-01", T, 5, "definition",
        'definition prime :: "nat ⇒ bool" where\n'
        '  "prime p ⟷ 1 < p ∧ (∀m. m dvd p ⟶ m = 1 ∨ m = p)"\n',
        [
            ent("e-primes-prime", "b-primes-01", C, "prime", "nat ⇒ bool"),
            ent("e-primes-prime-def", "b-primes-01", FA, "prime_def",
                uses=["e-primes-prime"]),
        ],
    ),
    blk(
        "b-primes-02", T, 9, "lemma",
        'lemma prime_gt_1: "prime p ⟹ 1 < p"\n  unfolding prime_def by simp\n',
        [ent("e-primes-gt1", "b-primes-02", FA, "prime_gt_1", uses=["e-primes-prime"])],
    ),
    blk(
        "b-primes-03", T, 12, "lemma",
        'lemma two_is_prime: "prime 2"\n  by (auto simp: prime_def dvd_def)\n',
        [ent("e-primes-two", "b-primes-03", FA, "two_is_prime", uses=["e-primes-prime"])],
    ),
    blk(
        "b-primes-04", T, 15, "definition",
        'definition prime_factor :: "nat ⇒ nat list" where\n'
        '  "prime_factor n = filter prime [2 ..< n]"\n',
        [
            ent("e-primes-factor", "b-primes-04", C, "prime_factor",
                "nat ⇒ nat list", uses=["e-primes-prime"]),
            ent("e-primes-factor-def", "b-primes-04", FA, "prime_factor_def",
                uses=["e-primes-factor", "e-primes-prime"]),
        ],
    ),
    blk(
        "b-primes-05", T, 19, "fun",
        'fun sieve :: "nat ⇒ nat list" where\n'
        '  "sieve n = rev (fold mark [2 ..< n] [])"  (* prime numbers below n *)\n',
        [
            ent("e-primes-sieve", "b-primes-05", C, "sieve", "nat ⇒ nat list"),
            ent("e-primes-sieve-simps", "b-primes-05", FA, "sieve.simps",
                uses=["e-primes-sieve"]),
            ent("e-primes-sieve-induct", "b-primes-05", FA, "sieve.induct",
                uses=["e-primes-sieve"]),
        ],
    ),
    blk(
        "b-primes-06", T, 24, "theorem",
        'theorem primes_infinite: "infinite {p. prime p}"\n'
        "  using prime_gt_1 two_is_prime by (rule topological_argument)\n",
        [
            ent("e-primes-inf", "b-primes-06", FA, "primes_infinite",
                uses=["e-primes-prime", "e-primes-gt1"]),
            ent("e-primes-unbounded", "b-primes-06", FA, "primes_unbounded",
                uses=["e-primes-inf"]),
        ],
    ),
    blk(
        "b-primes-07", T, 28, "lemma",
        'lemma sieve_sound: "p ∈ set (sieve n) ⟹ prime p"\n'
        "  by (induction n) (auto simp: sieve.simps)\n",
        [ent("e-primes-sound", "b-primes-07", FA, "sieve_sound",
             uses=["e-primes-sieve", "e-primes-prime"])],
    ),
    blk(
        "b-primes-08", T, 32, "datatype",
        "datatype parity = Even | Odd\n",
        [
            ent("e-primes-parity", "b-primes-08", TY, "parity"),
            ent("e-primes-even", "b-primes-08", C, "Even", "parity"),
            ent("e-primes-odd", "b-primes-08", C, "Odd", "parity"),
            ent("e-primes-parity-rec", "b-primes-08", C, "parity_rec",
                "'a ⇒ 'a ⇒ parity ⇒ 'a", uses=["e-primes-parity"]),
            ent("e-primes-parity-induct", "b-primes-08", FA, "parity.induct",
                uses=["e-primes-parity"]),
        ],
    ),
    blk("b-primes-09", T, 34, "end", "end\n"),
]

# --- Demo.Primes_ZF ------------------------------------------------------
T = "Demo.Primes_ZF"
blocks += [
    blk("b-zf-00", T, 1, "theory", "theory Primes_ZF\n  imports ZF\nbegin\n"),
    blk(
        "b-zf-01", T, 5, "definition",
        'definition prime :: "i ⇒ o" where\n'
        '  "prime(p) ⟷ 1 < p ∧ (∀m ∈ nat. m dvd p ⟶ m = 1 ∨ m = p)"\n',
        [
            ent("e-zf-prime", "b-zf-01", C, "prime", "i ⇒ o"),
            ent("e-zf-prime-def", "b-zf-01", FA, "prime_def", uses=["e-zf-prime"]),
        ],
    ),
    blk(
        "b-zf-02", T, 9, "lemma",
        'lemma prime_imp_pos: "prime(p) ==> 0 < p"\n  by (simp add: prime_def)\n',
        [
            ent("e-zf-pos", "b-zf-02", FA, "prime_imp_pos", uses=["e-zf-prime"]),
        ],
    ),
    blk(
        "b-zf-03", T, 13, "definition",
        'definition composite :: "i ⇒ o" where\n'
        '  "composite(n) ⟷ 1 < n ∧ ¬ prime(n)"\n',
        [
            ent("e-zf-comp", "b-zf-03", C, "composite", "i ⇒ o",
                uses=["e-zf-prime"]),
            ent("e-zf-comp-def", "b-zf-03", FA, "composite_def",
                uses=["e-zf-comp", "e-zf-prime"]),
            ent("e-zf-comp-not", "b-zf-03", FA, "composite_not_prime",
                uses=["e-zf-comp", "e-zf-prime"]),
        ],
    ),
    blk(
        "b-zf-04", T, 18, "theorem",
        'theorem zf_two_prime: "prime(2)"\n  by (auto simp: prime_def)\n',
        [ent("e-zf-two", "b-zf-04", FA, "zf_two_prime", uses=["e-zf-prime"])],
    ),
    blk("b-zf-05", T, 21, "end", "end\n"),
]

# --- Demo.Nat_Extras -----------------------------------------------------
T = "Demo.Nat_Extras"
blocks += [
    blk("b-natx-00", T, 1, "theory", "theory Nat_Extras\n  imports Main\nbegin\n"),
    blk(
        "b-natx-01", T, 5, "fun",
        'fun prime :: "nat ⇒ bool" where\n'
        '  "prime n = (1 < n ∧ filter (λ m. m dvd n) [2 ..< n] = [])"\n',
        [
            ent("e-natx-prime", "b-natx-01", C, "prime", "nat ⇒ bool"),
            ent("e-natx-prime-simps", "b-natx-01", FA, "prime.simps",
                uses=["e-natx-prime"]),
            ent("e-natx-prime-induct", "b-natx-01", FA, "prime.induct",
                uses=["e-natx-prime"]),
            ent("e-natx-prime-elims", "b-natx-01", FA, "prime.elims",
                uses=["e-natx-prime"]),
        ],
    ),
    blk(
        "b-natx-02", T, 9, "lemma",
        'lemma prime_code [code]: "prime n ⟷ 1 < n ∧ (∀m ∈ {2 ..< n}. ¬ m dvd n)"\n'
        "  by (induction n rule: prime.induct) auto\n",
        [ent("e-natx-code", "b-natx-02", FA, "prime_code", uses=["e-natx-prime"])],
    ),
    blk(
        "b-natx-03", T, 13, "definition",
        'definition twin_primes :: "nat ⇒ bool" where\n'
        '  "twin_primes n ⟷ prime n ∧ prime (n + 2)"\n',
        [
            ent("e-natx-twin", "b-natx-03", C, "twin_primes", "nat ⇒ bool",
                uses=["e-natx-prime"]),
            ent("e-natx-twin-def", "b-natx-03", FA, "twin_primes_def",
                uses=["e-natx-twin", "e-natx-prime"]),
            ent("e-natx-twin-odd", "b-natx-03", FA, "twin_primes_odd",
                uses=["e-natx-twin"]),
        ],
    ),
    blk("b-natx-04", T, 17, "end", "end\n"),
]

# --- Demo.Logic ----------------------------------------------------------
T = "Demo.Logic"
blocks += [
    blk("b-logic-00", T, 1, "theory", "theory Logic\n  imports Main\nbegin\n"),
    blk(
        "b-logic-01", T, 5, "locale",
        'locale prime_order =\n  fixes prime :: "\'a ⇒ bool"\n'
        '  assumes prime_neq: "prime x ⟹ x ≠ bot"\n',
        [
            ent("e-logic-prime", "b-logic-01", C, "prime", "'a ⇒ bool"),
            ent("e-logic-neq", "b-logic-01", FA, "prime_neq", uses=["e-logic-prime"]),
            ent("e-logic-total", "b-logic-01", FA, "prime_total",
                uses=["e-logic-prime"]),
        ],
    ),
    blk(
        "b-logic-02", T, 10, "lemma",
        'lemma de_morgan: "¬ (P ∧ Q) ==> ¬ P ∨ ¬ Q"\n  by blast\n',
        [
            ent("e-logic-dm", "b-logic-02", FA, "de_morgan"),
            ent("e-logic-dm2", "b-logic-02", FA, "de_morgan_disj", uses=["e-logic-dm"]),
        ],
    ),
    blk(
        "b-logic-03", T, 14, "definition",
        'definition implies2 :: "bool ⇒ bool ⇒ bool" where\n'
        '  "implies2 a b ⟷ ¬ a ∨ b"\n',
        [
            ent("e-logic-imp", "b-logic-03", C, "implies2", "bool ⇒ bool ⇒ bool"),
            ent("e-logic-imp-def", "b-logic-03", FA, "implies2_def",
                uses=["e-logic-imp"]),
            ent("e-logic-imp-mono", "b-logic-03", FA, "implies2_mono",
                uses=["e-logic-imp"]),
        ],
    ),
    blk(
        "b-logic-04", T, 18, "theorem",
        'theorem excluded_middle: "P ∨ ¬ P"\n  by blast\n',
        [ent("e-logic-em", "b-logic-04", FA, "excluded_middle")],
    ),
    blk("b-logic-05", T, 21, "end", "end\n"),
]

# --- Demo.Ind ------------------------------------------------------------
T = "Demo.Ind"
blocks += [
    blk("b-ind-00", T, 1, "theory", "theory Ind\n  imports Main\nbegin\n"),
    blk(
        "b-ind-01", T, 5, "inductive",
        'inductive prime :: "nat ⇒ bool" where\n'
        '  intro: "1 < p ⟹ (⋀m. m dvd p ⟹ m = 1 ∨ m = p) ⟹ prime p"\n',
        [
            ent("e-ind-prime", "b-ind-01", C, "prime", "nat ⇒ bool"),
            ent("e-ind-intro", "b-ind-01", FA, "prime_intro", uses=["e-ind-prime"]),
            ent("e-ind-induct", "b-ind-01", FA, "prime_induct", uses=["e-ind-prime"]),
            ent("e-ind-cases", "b-ind-01", FA, "prime_cases", uses=["e-ind-prime"]),
        ],
    ),
    blk(
        "b-ind-02", T, 9, "lemma",
        'lemma ind_agrees: "prime p ⟷ Primes.prime p"\n'
        "  by (auto elim: prime_cases simp: Primes.prime_def intro: prime_intro)\n",
        [ent("e-ind-agrees", "b-ind-02", FA, "ind_agrees",
             uses=["e-ind-prime", "e-primes-prime"])],
    ),
    blk("b-ind-03", T, 12, "end", "end\n"),
]

# --- Demo.Lists ----------------------------------------------------------
T = "Demo.Lists"
blocks += [
    blk("b-lists-00", T, 1, "theory", "theory Lists\n  imports Main\nbegin\n"),
    blk(
        "b-lists-01", T, 5, "datatype",
        "datatype 'a tree = Leaf | Node \"'a tree\" 'a \"'a tree\"\n",
        [
            ent("e-lists-tree", "b-lists-01", TY, "tree"),
            ent("e-lists-leaf", "b-lists-01", C, "Leaf", "'a tree"),
            ent("e-lists-node", "b-lists-01", C, "Node",
                "'a tree ⇒ 'a ⇒ 'a tree ⇒ 'a tree"),
            ent("e-lists-tree-rec", "b-lists-01", C, "tree_rec",
                "'b ⇒ ('a tree ⇒ 'a ⇒ 'a tree ⇒ 'b) ⇒ 'a tree ⇒ 'b",
                uses=["e-lists-tree"]),
            ent("e-lists-tree-induct", "b-lists-01", FA, "tree.induct",
                uses=["e-lists-tree"]),
        ],
    ),
    blk(
        "b-lists-02", T, 8, "fun",
        'fun map2 :: "(\'a ⇒ \'b ⇒ \'c) ⇒ \'a list ⇒ \'b list ⇒ \'c list" where\n'
        '  "map2 f (x # xs) (y # ys) = f x y # map2 f xs ys"\n| "map2 f xs ys = []"\n',
        [
            ent("e-lists-map2", "b-lists-02", C, "map2",
                "('a ⇒ 'b ⇒ 'c) ⇒ 'a list ⇒ 'b list ⇒ 'c list"),
            ent("e-lists-map2-simps", "b-lists-02", FA, "map2.simps",
                uses=["e-lists-map2"]),
            ent("e-lists-map2-induct", "b-lists-02", FA, "map2.induct",
                uses=["e-lists-map2"]),
            ent("e-lists-map2-cong", "b-lists-02", FA, "map2_cong",
                uses=["e-lists-map2"]),
        ],
    ),
    blk(
        "b-lists-03", T, 13, "lemma",
        'lemma map2_len: "length (map2 f xs ys) = min (length xs) (length ys)"\n'
        "  by (induction f xs ys rule: map2.induct) auto\n",
        [ent("e-lists-map2-len", "b-lists-03", FA, "map2_len",
             uses=["e-lists-map2"])],
    ),
    blk(
        "b-lists-04", T, 17, "definition",
        'definition sorted_by :: "(\'a ⇒ \'a ⇒ bool) ⇒ \'a list ⇒ bool" where\n'
        '  "sorted_by ord xs ⟷ (∀i < length xs - 1. <b>ord</b> (xs ! i) (xs ! (i + 1)))"\n',
        [
            ent("e-lists-sortedby", "b-lists-04", C, "sorted_by",
                "('a ⇒ 'a ⇒ bool) ⇒ 'a list ⇒ bool"),
            ent("e-lists-sortedby-def", "b-lists-04", FA, "sorted_by_def",
                uses=["e-lists-sortedby"]),
            ent("e-lists-sortedby-mono", "b-lists-04", FA, "sorted_by_mono",
                uses=["e-lists-sortedby"]),
        ],
    ),
    blk(
        "b-lists-05", T, 21, "lemma",
        'lemma sorted_insert: "sorted_by (≤) xs ⟹ sorted_by (≤) (insort x xs)"\n'
        "  by (induction xs) (auto simp: sorted_by_def)\n",
        [ent("e-lists-sorted-ins", "b-lists-05", FA, "sorted_insert",
             uses=["e-lists-sortedby"])],
    ),
    blk(
        "b-lists-06", T, 25, "fun",
        'fun quicksort :: "nat list ⇒ nat list" where\n'
        '  "quicksort [] = []"\n'
        '| "quicksort (x # xs) = quicksort [y <- xs. y < x] @ [x] @ quicksort [y <- xs. ¬ y < x]"\n',
        [
            ent("e-lists-qs", "b-lists-06", C, "quicksort", "nat list ⇒ nat list"),
            ent("e-lists-qs-simps", "b-lists-06", FA, "quicksort.simps",
                uses=["e-lists-qs"]),
            ent("e-lists-qs-induct", "b-lists-06", FA, "quicksort.induct",
                uses=["e-lists-qs"]),
            ent("e-lists-qs-code", "b-lists-06", FA, "quicksort_code",
                uses=["e-lists-qs"]),
        ],
    ),
    blk(
        "b-lists-07", T, 30, "theorem",
        'theorem quicksort_sorts: "sorted_by (≤) (quicksort xs)"\n'
        "  by (induction xs rule: quicksort.induct) (auto simp: sorted_by_def)\n",
        [ent("e-lists-qs-sorts", "b-lists-07", FA, "quicksort_sorts",
             uses=["e-lists-qs", "e-lists-sortedby"])],
    ),
    blk("b-lists-08", T, 33, "end", "end\n"),
]


# --- scenario ------------------------------------------------------------

FACETS = ["Kind", "Command", "SourceTheoryFacet", "ConstantTypeFacet", "NameFacet"]

STEP_CLAUSES = [
    ("search 'prime' in source code", [(F.SOURCE_CODE, Term("prime"))]),
    ("facet: kind = Constant", [(F.KIND, Term("Constant"))]),
    ("filter entity names by 'prime'", [(F.NAME, Term("prime"))]),
    ("filter constant type by 'nat bool'", [(F.CONSTANT_TYPE, Term("nat bool"))]),
    (
        "facet: command in {definition, inductive}",
        [(F.COMMAND, Or((Term("definition"), Term("inductive"))))],
    ),
]

PIVOT_ENTITY = "e-primes-prime"
PIVOT_CLAUSES = [
    (F.USES, InResult(extract_field=F.CHILD_ID,
                      sub_query=((F.CHILD_ID, Term(PIVOT_ENTITY)),))),
    (F.KIND, Term("Fact")),
]
EXPECTED_PIVOT_BLOCKS = {
    "b-primes-01", "b-primes-02", "b-primes-03", "b-primes-04",
    "b-primes-06", "b-primes-07", "b-ind-02",
}
EXPECTED_PIVOT_FACTS = {
    "e-primes-prime-def", "e-primes-gt1", "e-primes-two", "e-primes-factor-def",
    "e-primes-inf", "e-primes-sound", "e-ind-agrees",
}


def main() -> None:
    n_entities = sum(len(b.entities) for b in blocks)
    assert len(blocks) == 40, f"expected 40 blocks, have {len(blocks)}"
    assert n_entities == 65, f"expected 65 entities, have {n_entities}"

    report = validate_corpus(blocks)
    assert report.ok, report.errors
    assert not report.warnings, report.warnings

    oracle = Oracle(blocks, AnalyzerConfig.default())

    from factsearch.wire import SearchRequest

    steps = []
    clauses: list = []
    prev_total = None
    for name, extra in STEP_CLAUSES:
        clauses = clauses + extra
        matched, joint = oracle.match(clauses)
        total = len(matched)
        assert prev_total is None or total <= prev_total, (name, total, prev_total)
        prev_total = total
        req = SearchRequest(
            clauses=list(clauses),
            facet_fields=[F(f) for f in FACETS],
            offset=0,
            limit=50,
        )
        steps.append(
            {
                "name": name,
                "request": req.to_wire(),
                "expectedTotal": total,
                "expectedBlockIds": sorted(matched),
            }
        )
        print(f"{name}: {total} blocks")
    assert total > 0
    final_ids = set(steps[-1]["expectedBlockIds"])
    assert "b-primes-01" in final_ids, final_ids

    pivot_matched, pivot_joint = oracle.match(PIVOT_CLAUSES)
    assert pivot_matched == EXPECTED_PIVOT_BLOCKS, pivot_matched
    matched_facts = set()
    for b in pivot_matched:
        matched_facts.update(oracle.matched_entities(b, pivot_joint))
    assert matched_facts == EXPECTED_PIVOT_FACTS, matched_facts
    pivot_req = SearchRequest(
        clauses=list(PIVOT_CLAUSES), facet_fields=[F("Kind")], offset=0, limit=50
    )
    print(f"used-by pivot: {len(pivot_matched)} blocks, {len(matched_facts)} facts")

    scenario = {
        "description": "prime-number drill-down over the bundled demo corpus",
        "steps": steps,
        "finalBlockId": "b-primes-01",
        "usedBy": {
            "entityId": PIVOT_ENTITY,
            "request": pivot_req.to_wire(),
            "expectedTotal": len(pivot_matched),
            "expectedBlockIds": sorted(pivot_matched),
            "expectedMatchedEntityIds": sorted(matched_facts),
        },
    }

    demo_dir = os.path.join(ROOT, "src", "factsearch", "demo")
    os.makedirs(demo_dir, exist_ok=True)
    write_dump_file(blocks, os.path.join(demo_dir, "demo.jsonl"))
    with open(os.path.join(demo_dir, "scenario.json"), "w", encoding="utf-8") as fh:
        json.dump(scenario, fh, ensure_ascii=False, indent=1)
        fh.write("\n")
    kind_counts = {k.value: report.entity_counts.get(k, 0) for k in EntityKind}
    print(f"wrote demo corpus: 40 blocks, 65 entities {kind_counts}")


if __name__ == "__main__":
    main()
