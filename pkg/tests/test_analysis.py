import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from factsearch.analysis import (
    DEFAULT_SYMBOL_GROUPS,
    AnalyzerConfig,
    SymbolTable,
    Token,
    analyze,
    default_symbol_table,
    load_symbol_table,
    normalize_symbol,
    parse_symbol_table,
    strip_markup,
)
from factsearch.errors import (
    MalformedLine,
    NumericFieldNotAnalyzable,
    OverlappingGroups,
)
from factsearch.model import FieldName

CFG = AnalyzerConfig.default()


def terms(field: FieldName, value: str) -> list[str]:
    return [t.term for t in analyze(CFG, field, value)]


# Hand-tokenized fixture table: 30 source lines checked against the text
# rule (split on whitespace/punctuation outside \<...> escapes, brackets as
# single tokens, synonym normalization, lowercasing).
HAND_TABLE = [
    ("lemma prime_def:", ["lemma", "prime_def"]),
    ("==> P", ["⟹", "p"]),
    ('definition prime :: "nat ⇒ bool" where',
     ["definition", "prime", "nat", "⇒", "bool", "where"]),
    ("x <= y", ["x", "≤", "y"]),
    ("A \\<Longrightarrow> B", ["a", "⟹", "b"]),
    ("f(x)", ["f", "(", "x", ")"]),
    ("apply (simp add: prime_def)", ["apply", "(", "simp", "add", "prime_def", ")"]),
    ("Nat.nat => HOL.bool", ["nat.nat", "⇒", "hol.bool"]),
    ("∀m. m dvd p ⟶ m = 1",
     ["∀", "m", "m", "dvd", "p", "⟶", "m", "=", "1"]),
    ("by auto.", ["by", "auto"]),
    ("qed", ["qed"]),
    ("{x. x < 2}", ["{", "x", "x", "<", "2", "}"]),
    ("[1, 2, 3]", ["[", "1", "2", "3", "]"]),
    ("case xs of [] ⇒ e", ["case", "xs", "of", "[", "]", "⇒", "e"]),
    ("%x. x + 1", ["λ", "x", "x", "+", "1"]),
    ("P ~= Q", ["p", "≠", "q"]),
    ("a --> b --> c", ["a", "⟶", "b", "⟶", "c"]),
    ("s := t", ["s", "=", "t"]),
    ("theory Primes imports Main begin",
     ["theory", "primes", "imports", "main", "begin"]),
    ("<b>bold</b> text", ["bold", "text"]),
    ('pri<span class="k">me</span>', ["prime"]),
    ("x \\<in> A \\<union> B", ["x", "∈", "a", "∪", "b"]),
    ("f x ≡ g x", ["f", "x", "≡", "g", "x"]),
    ("0 < p ∧ p < q", ["0", "<", "p", "∧", "p", "<", "q"]),
    ("foo_bar' baz2", ["foo_bar'", "baz2"]),
    ("\\<forall>x. \\<exists>y. R x y",
     ["∀", "x", "∃", "y", "r", "x", "y"]),
    ("  indented\ttabs  ", ["indented", "tabs"]),
    ("prime*", ["prime*"]),
    ("== distinct ===", ["≡", "distinct", "==="]),
    ("don't stop", ["don't", "stop"]),
]


@pytest.mark.parametrize("line,expected", HAND_TABLE, ids=range(len(HAND_TABLE)))
def test_hand_tokenized_table(line, expected):
    assert terms(FieldName.SOURCE_CODE, line) == expected


def test_positions_consecutive_from_zero():
    tokens = analyze(CFG, FieldName.SOURCE_CODE, "lemma a: b ==> c")
    assert [t.position for t in tokens] == list(range(len(tokens)))


def test_facet_field_verbatim():
    assert analyze(CFG, FieldName.NAME_FACET, "Prime_Nat.prime") == [
        Token("Prime_Nat.prime", 0)
    ]
    assert analyze(CFG, FieldName.KIND, "Constant") == [Token("Constant", 0)]
    assert analyze(CFG, FieldName.NAME_FACET, "") == []


def test_identifier_field_verbatim_case_sensitive():
    assert analyze(CFG, FieldName.ID, "Blk.01") == [Token("Blk.01", 0)]


def test_numeric_field_not_analyzable():
    with pytest.raises(NumericFieldNotAnalyzable):
        analyze(CFG, FieldName.START_LINE, "5")


def test_synonym_normalization_examples():
    table = default_symbol_table()
    assert normalize_symbol(table, "\\<Longrightarrow>") == "⟹"
    assert normalize_symbol(table, "==>") == "⟹"
    assert normalize_symbol(table, "⟹") == "⟹"
    assert normalize_symbol(table, "foo") == "foo"


@given(st.text(min_size=0, max_size=20))
def test_normalize_idempotent_on_arbitrary_tokens(token):
    table = default_symbol_table()
    once = normalize_symbol(table, token)
    assert normalize_symbol(table, once) == once


def test_normalize_idempotent_on_all_members():
    table = default_symbol_table()
    for canonical, aliases in table.groups:
        for member in (canonical, *aliases):
            once = normalize_symbol(table, member)
            assert once == canonical
            assert normalize_symbol(table, once) == once


def test_default_aliases_tokenize_to_single_token():
    """The tokenizer must never split an alias, including \\<...> escapes."""
    table = default_symbol_table()
    for canonical, aliases in table.groups:
        for member in (canonical, *aliases):
            out = terms(FieldName.SOURCE_CODE, member)
            assert out == [canonical.lower()], (member, out)


def test_case_distinct_escapes_stay_distinct():
    # \<Longrightarrow> and \<longrightarrow> belong to different groups
    a = terms(FieldName.SOURCE_CODE, "\\<Longrightarrow>")
    b = terms(FieldName.SOURCE_CODE, "\\<longrightarrow>")
    assert a == ["⟹"]
    assert b == ["⟶"]


def test_unknown_escape_kept_whole():
    assert terms(FieldName.SOURCE_CODE, "\\<mysym> x") == ["\\<mysym>", "x"]


def test_query_index_symmetry():
    # same function is used on both sides; determinism is what makes Term
    # filters symmetric
    samples = ["prime ==> q", "Nat.nat => bool", "\\<forall>x. P x"]
    for s in samples:
        assert terms(FieldName.SOURCE_CODE, s) == terms(FieldName.SOURCE_CODE, s)


_words = st.lists(
    st.sampled_from(["prime", "nat", "==>", "x", "\\<forall>", "(", "p_q"]),
    min_size=0, max_size=8,
)


@given(_words, st.sampled_from(["<b>", "</b>", '<span class="k">', "</span>", "<i>"]))
@settings(max_examples=60)
def test_markup_stripping_property(words, tag):
    plain = " ".join(words)
    with_tags = tag.join(words) if len(words) > 1 else plain + tag
    assert terms(FieldName.SOURCE_CODE, with_tags) == terms(
        FieldName.SOURCE_CODE, strip_markup(with_tags)
    )


def test_strip_markup_preserves_escapes():
    assert strip_markup("a \\<Longrightarrow> b") == "a \\<Longrightarrow> b"
    assert strip_markup("a <b>c</b> d") == "a c d"
    assert strip_markup("x < y > z") == "x < y > z"


def test_symbol_table_file_round_trip(tmp_path):
    path = tmp_path / "symbols.txt"
    path.write_text(default_symbol_table().to_text(), encoding="utf-8")
    loaded = load_symbol_table(str(path))
    assert loaded.mapping == default_symbol_table().mapping


def test_parse_symbol_table_example():
    table = parse_symbol_table("⟹\t\\<Longrightarrow> ==>\n")
    assert table.normalize("==>") == "⟹"
    assert table.normalize("\\<Longrightarrow>") == "⟹"
    assert len(table.groups) == 1


def test_parse_symbol_table_empty():
    assert parse_symbol_table("").groups == ()


def test_parse_symbol_table_overlap_rejected():
    text = "⟹\t==>\n⟶\t==>\n"
    with pytest.raises(OverlappingGroups):
        parse_symbol_table(text)


def test_parse_symbol_table_malformed_line():
    with pytest.raises(MalformedLine):
        parse_symbol_table("a b\talias\n")  # canonical must be one symbol
    with pytest.raises(MalformedLine):
        parse_symbol_table("\talias\n")


def test_overlapping_groups_constructor():
    with pytest.raises(OverlappingGroups):
        SymbolTable.from_groups({"a": ("x",), "b": ("x",)})


def test_default_table_has_about_twenty_groups():
    assert len(DEFAULT_SYMBOL_GROUPS) >= 20


def test_fingerprint_stable_and_table_sensitive():
    assert CFG.fingerprint() == AnalyzerConfig.default().fingerprint()
    other = AnalyzerConfig(symbols=SymbolTable.from_groups({"z": ("zz",)}))
    assert other.fingerprint() != CFG.fingerprint()
