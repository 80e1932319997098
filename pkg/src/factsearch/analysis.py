"""Per-field tokenization, normalization, and the symbol synonym table.

Text fields are split into terms that are matched symmetrically at index and
query time: the same :func:`analyze` call is used on both sides, which is
what makes Term filters work. Mathematical notation is folded onto a single
canonical Unicode form, so ``==>``, ``\\<Longrightarrow>`` and the arrow
character all produce the same term.

Tokenization rules for text fields:

* backslash escapes of the form ``\\<...>`` are kept as one token and never
  split internally;
* word tokens are runs of letters, digits, ``_``, ``.``, ``'`` and ``*``
  (``.`` is kept so qualified names like ``Nat.nat`` stay searchable, ``*``
  so wildcard queries survive analysis); leading and trailing dots are
  stripped;
* ``( ) [ ] { }`` each form a single-character token;
* other punctuation forms operator tokens by contiguous runs (``==>``,
  ``::``-free since ``:`` ``;`` ``,`` ``"`` and backticks carry no search
  value and are discarded);
* each token is mapped through the symbol table and then lowercased.

Symbol lookup happens before lowercasing: Isabelle-style escape names are
case-sensitive (``\\<Longrightarrow>`` and ``\\<longrightarrow>`` denote
different symbols), so folding case first would merge unrelated groups.

Facet and identifier fields produce a single verbatim token; numeric fields
have no token stream at all.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .errors import MalformedLine, NumericFieldNotAnalyzable, OverlappingGroups
from .model import FieldClass, FieldName, field_class


class Token(NamedTuple):
    term: str
    position: int


# Default synonym groups: canonical Unicode symbol first, Isabelle input
# syntax and common ASCII spellings as aliases.
DEFAULT_SYMBOL_GROUPS: dict[str, tuple[str, ...]] = {
    "\u27f9": ("\\<Longrightarrow>", "==>"),
    "\u27f6": ("\\<longrightarrow>", "-->"),
    "\u21d2": ("\\<Rightarrow>", "=>"),
    "\u2192": ("\\<rightarrow>", "->"),
    "\u21d4": ("\\<Leftrightarrow>", "<=>"),
    "\u27f7": ("\\<longleftrightarrow>", "<->"),
    "\u2200": ("\\<forall>",),
    "\u2203": ("\\<exists>",),
    "\u22c0": ("\\<And>",),
    "\u2227": ("\\<and>",),
    "\u2228": ("\\<or>",),
    "\u00ac": ("\\<not>",),
    "\u2264": ("\\<le>", "<="),
    "\u2265": ("\\<ge>", ">="),
    "\u2260": ("\\<noteq>", "~="),
    "\u2261": ("\\<equiv>", "=="),
    "\u2208": ("\\<in>",),
    "\u2209": ("\\<notin>",),
    "\u03bb": ("\\<lambda>", "%"),
    "\u2286": ("\\<subseteq>",),
    "\u222a": ("\\<union>",),
    "\u2229": ("\\<inter>",),
    "\u00d7": ("\\<times>",),
}


@dataclass(frozen=True)
class SymbolTable:
    """Disjoint synonym groups, each with one canonical form.

    ``mapping`` sends every member of a group (canonical form included) to
    the group's canonical form. Tokens absent from all groups pass through
    :meth:`normalize` unchanged.
    """

    groups: tuple[tuple[str, tuple[str, ...]], ...]
    mapping: dict[str, str]

    @classmethod
    def from_groups(cls, groups: dict[str, Iterable[str]]) -> "SymbolTable":
        mapping: dict[str, str] = {}
        frozen: list[tuple[str, tuple[str, ...]]] = []
        for canonical, aliases in groups.items():
            members = (canonical, *aliases)
            for member in members:
                if member in mapping:
                    raise OverlappingGroups(member)
                mapping[member] = canonical
            frozen.append((canonical, tuple(aliases)))
        return cls(groups=tuple(frozen), mapping=mapping)

    @classmethod
    def empty(cls) -> "SymbolTable":
        return cls.from_groups({})

    def normalize(self, token: str) -> str:
        return self.mapping.get(token, token)

    def to_text(self) -> str:
        """Render in the loadable canonical<TAB>aliases format."""
        lines = [f"{canonical}\t{' '.join(aliases)}".rstrip() for canonical, aliases in self.groups]
        return "\n".join(lines) + ("\n" if lines else "")


def default_symbol_table() -> SymbolTable:
    return SymbolTable.from_groups(DEFAULT_SYMBOL_GROUPS)


def normalize_symbol(table: SymbolTable, token: str) -> str:
    """Canonical form of ``token``, or ``token`` itself when ungrouped."""
    return table.normalize(token)


def parse_symbol_table(text: str) -> SymbolTable:
    """Parse the two-column synonym format.

    Each non-blank, non-comment line is ``canonical<TAB>alias1 alias2 ...``;
    a line with no tab defines a single-member group. Any symbol appearing in
    two groups raises :class:`OverlappingGroups`.
    """
    groups: dict[str, list[str]] = {}
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        canonical, _, alias_part = line.partition("\t")
        canonical = canonical.strip()
        if not canonical:
            raise MalformedLine(lineno, "empty canonical form")
        if " " in canonical:
            raise MalformedLine(lineno, "canonical form must be a single symbol")
        aliases = alias_part.split()
        for member in (canonical, *aliases):
            if member in seen:
                raise OverlappingGroups(member)
            seen.add(member)
        groups[canonical] = aliases
    return SymbolTable.from_groups({c: tuple(a) for c, a in groups.items()})


def load_symbol_table(path: str) -> SymbolTable:
    with open(path, encoding="utf-8") as fh:
        return parse_symbol_table(fh.read())


# HTML-ish tags embedded in stored source. The lookbehind protects \<...>
# escape sequences, whose "<" is always preceded by a backslash.
_MARKUP_RE = re.compile(r"(?<!\\)</?[A-Za-z][^<>]*>")

_TOKEN_RE = re.compile(
    r"\\<[^>\s]*>"  # escape sequence, atomic
    r"|[\w.'*]+"  # word run
    r"|[()\[\]{}]"  # single bracket
    r"|[^\w\s.'*()\[\]{}:;,\"`\\]+"  # operator run
    r"|\\"  # stray backslash
)


def strip_markup(value: str) -> str:
    """Remove embedded tag-like spans, leaving escape sequences intact."""
    return _MARKUP_RE.sub("", value)


def _text_terms(table: SymbolTable, value: str) -> list[str]:
    terms = []
    for match in _TOKEN_RE.finditer(value):
        token = match.group()
        first = token[0]
        if first not in "\\()[]{}" and (first.isalnum() or first in "_.'*"):
            # word run: trim sentence-level dots so "m." matches "m" while
            # interior dots in qualified names survive
            token = token.strip(".")
            if not token:
                continue
        terms.append(table.normalize(token).lower())
    return terms


@dataclass(frozen=True)
class AnalyzerConfig:
    """Field analysis rules plus the active symbol table.

    Instances are immutable; :meth:`analyze` is pure and safe to call from
    any number of threads.
    """

    symbols: SymbolTable

    @classmethod
    def default(cls) -> "AnalyzerConfig":
        return cls(symbols=default_symbol_table())

    def analyze(self, name: FieldName, value: str) -> list[Token]:
        cls = field_class(name)
        if cls is FieldClass.NUMERIC:
            raise NumericFieldNotAnalyzable(name.value)
        if cls in (FieldClass.FACET, FieldClass.IDENTIFIER):
            return [Token(value, 0)] if value else []
        if name is FieldName.SOURCE_CODE:
            value = strip_markup(value)
        terms = _text_terms(self.symbols, value)
        return [Token(term, pos) for pos, term in enumerate(terms)]

    def fingerprint(self) -> str:
        """Stable digest of the analysis rules, recorded in index manifests."""
        h = hashlib.sha256()
        h.update(b"factsearch-analyzer-v1\n")
        for canonical, aliases in self.groups_sorted():
            h.update(canonical.encode("utf-8"))
            h.update(b"\t")
            h.update(" ".join(aliases).encode("utf-8"))
            h.update(b"\n")
        return h.hexdigest()

    def groups_sorted(self) -> list[tuple[str, tuple[str, ...]]]:
        return sorted(
            (canonical, tuple(sorted(aliases))) for canonical, aliases in self.symbols.groups
        )


def analyze(config: AnalyzerConfig, name: FieldName, value: str) -> list[Token]:
    """Tokenize ``value`` under the rules for field ``name``."""
    return config.analyze(name, value)
