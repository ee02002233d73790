"""XPOS -> UPOS assignment and preterminal labelling.

Rules live in a TSV with columns ``priority``, ``match``, ``upos``. The
match expression tests the XPOS sequence of one eojeol::

    expr  := conj (" or " conj)*
    conj  := test (" and " test)*
    test  := ("first" | "last" | "contains" | "all") "=" TAG ("," TAG)*
           | "*"

``first=NNP`` holds when the first morph is tagged NNP, ``contains=VV,VX``
when any morph carries one of the tags, ``all=SF,SP`` when every morph
does. Rules are tried in ascending priority (file order breaks ties); the
first match wins and ``default_upos`` catches the rest.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from .errors import ConfigError, MissingMorph
from .model import (UPOS_TAGS, CategoryLabel, Dialect, Leaf, Node, Terminal,
                    Tree, iter_leaves)
from .morph import MorphSeg, parse_morphseg

log = logging.getLogger(__name__)

_TESTS = ("first", "last", "contains", "all")

Test = tuple[str, frozenset]
Conj = tuple[Test, ...]


def parse_match(expr: str) -> tuple[Conj, ...]:
    expr = expr.strip()
    if not expr:
        raise ConfigError("empty match expression")
    disjuncts = []
    for conj_text in expr.split(" or "):
        tests = []
        for test_text in conj_text.split(" and "):
            test_text = test_text.strip()
            if test_text == "*":
                continue
            kind, sep, tags = test_text.partition("=")
            kind = kind.strip()
            if not sep or kind not in _TESTS:
                raise ConfigError(f"bad test {test_text!r} in match expression {expr!r}")
            tagset = frozenset(t.strip() for t in tags.split(",") if t.strip())
            if not tagset:
                raise ConfigError(f"test {test_text!r} names no tags")
            tests.append((kind, tagset))
        disjuncts.append(tuple(tests))
    return tuple(disjuncts)


def _holds(test: Test, xpos: Sequence[str]) -> bool:
    kind, tags = test
    if kind == "first":
        return xpos[0] in tags
    if kind == "last":
        return xpos[-1] in tags
    if kind == "contains":
        return any(t in tags for t in xpos)
    return all(t in tags for t in xpos)


@dataclass(frozen=True)
class UposRule:
    priority: int
    match: str
    upos: str
    compiled: tuple[Conj, ...] = ()

    def __post_init__(self):
        if not self.compiled:
            object.__setattr__(self, "compiled", parse_match(self.match))

    def matches(self, xpos: Sequence[str]) -> bool:
        return any(all(_holds(t, xpos) for t in conj) for conj in self.compiled)


@dataclass(frozen=True)
class UposTable:
    rules: tuple[UposRule, ...]
    default_upos: str = "X"

    def __post_init__(self):
        ordered = sorted(enumerate(self.rules), key=lambda p: (p[1].priority, p[0]))
        object.__setattr__(self, "rules", tuple(r for _, r in ordered))

    @classmethod
    def from_tsv(cls, text: str, default_upos: str = "X") -> "UposTable":
        rules = []
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            row = line.split("\t")
            if row[0].strip() == "default":
                default_upos = row[-1].strip()
                continue
            if len(row) != 3:
                raise ConfigError(f"UPOS table line {lineno}: expected 3 columns")
            try:
                priority = int(row[0])
            except ValueError:
                raise ConfigError(f"UPOS table line {lineno}: priority must be an integer") from None
            rules.append(UposRule(priority, row[1].strip(), row[2].strip()))
        return cls(tuple(rules), default_upos)

    @classmethod
    def load(cls, path: str | Path) -> "UposTable":
        return cls.from_tsv(Path(path).read_text(encoding="utf-8"))


def data_text(name: str) -> str:
    return resources.files("eojeolbank").joinpath("data").joinpath(name).read_text(encoding="utf-8")


_DEFAULT_TABLE: UposTable | None = None


def default_upos_table() -> UposTable:
    global _DEFAULT_TABLE
    if _DEFAULT_TABLE is None:
        _DEFAULT_TABLE = UposTable.from_tsv(data_text("upos_table.tsv"))
    return _DEFAULT_TABLE


def parse_tag_map(text: str) -> dict[str, str]:
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) < 2 or not cols[0].strip() or not cols[1].strip():
            raise ConfigError(f"tag map line {lineno}: expected 'source<TAB>target'")
        out[cols[0].strip()] = cols[1].strip()
    return out


def load_tag_map(path: str | Path) -> dict[str, str]:
    return parse_tag_map(Path(path).read_text(encoding="utf-8"))


_TAG_MAP_FILES = {Dialect.KAIST: "kaist_tagmap.tsv", Dialect.PENN: "penn_tagmap.tsv"}


def default_tag_map(dialect: Dialect) -> dict[str, str]:
    """Source-tagset to Sejong equivalences; empty for Sejong itself."""
    name = _TAG_MAP_FILES.get(dialect)
    return parse_tag_map(data_text(name)) if name else {}


def map_upos(seg: MorphSeg | str, table: UposTable | None = None,
             tag_map: Mapping[str, str] | None = None) -> str:
    """UPOS for a whole eojeol from its XPOS sequence."""
    if isinstance(seg, str):
        seg = parse_morphseg(seg)
    table = table or default_upos_table()
    xpos = seg.mapped_xpos(tag_map)
    for rule in table.rules:
        if rule.matches(xpos):
            return rule.upos
    return table.default_upos


def label_terminals(tree: Tree, table: UposTable | None = None,
                    tag_map: Mapping[str, str] | None = None) -> Tree:
    """Give every eojeol a UPOS and wrap it in a preterminal of that name.

    Existing UPOS preterminals are kept as they are.
    """
    table = table or default_upos_table()
    counter = iter(range(1 << 62))

    def wrap(lf: Leaf) -> Node:
        idx = next(counter)
        term = lf.terminal
        if term.upos is None:
            if term.morph is None:
                raise MissingMorph(idx, term.surface)
            term = Terminal(term.surface, term.morph, map_upos(term.morph, table, tag_map))
        return Node(CategoryLabel(term.upos), (Leaf(term),))

    def go(t: Tree) -> Tree:
        if isinstance(t, Leaf):
            return wrap(t)
        if (t.is_preterminal and not t.label.function_tags
                and t.children[0].terminal.upos == t.label.base):
            next(counter)
            return t
        return t.with_children(go(c) for c in t.children)

    return go(tree)


def morph_surface_mismatches(tree: Tree) -> list[tuple[int, str, str]]:
    """(index, surface, joined forms) for eojeol whose morph forms do not
    spell the surface. Expected for contractions; informational only."""
    out = []
    for i, lf in enumerate(iter_leaves(tree)):
        term = lf.terminal
        if term.morph is not None:
            joined = term.morph.joined_forms()
            if joined != term.surface:
                out.append((i, term.surface, joined))
    return out


def warn_mismatches(tree: Tree, sent_id: str = "") -> list[tuple[int, str, str]]:
    found = morph_surface_mismatches(tree)
    for i, surface, joined in found:
        log.info("%s leaf %d: surface %r differs from morph forms %r",
                 sent_id or "-", i, surface, joined)
    return found


__all__ = [
    "UPOS_TAGS", "UposRule", "UposTable", "default_upos_table", "default_tag_map",
    "label_terminals", "load_tag_map", "map_upos", "morph_surface_mismatches",
    "parse_match", "parse_tag_map", "warn_mismatches",
]
