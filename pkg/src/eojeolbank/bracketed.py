"""Reading and writing Penn-style bracketed trees.

All four dialects share one surface syntax: ``(LABEL child ...)`` where a
child is either a nested bracket or an atom. Atoms may contain ``+``,
``/``, ``*`` and ``.``; only whitespace and parentheses delimit tokens.

A tree may be preceded by comment lines. ``# sent id = X`` names the
sentence and ``# text = ...`` records its raw text; other ``#`` lines are
ignored.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from .errors import (BadLabel, DuplicateSentenceId, EmptyConstituent,
                     StrayToken, UnbalancedBrackets)
from .model import (DEFAULT_NULL_PATTERNS, UPOS_TAGS, CategoryLabel, Dialect,
                    Leaf, Node, Terminal, Tree, is_null_surface)

# the figures typeset the sentence-final period as a centred dot
DEFAULT_CHAR_MAP: Mapping[str, str] = {"·": ".", "⋅": "."}

# LaTeX line breaks inside figure nodes
_LINEBREAK = "\\\\"

_ESCAPES = {"(": "-LRB-", ")": "-RRB-"}
_UNESCAPES = {v: k for k, v in _ESCAPES.items()}

_SENT_ID = re.compile(r"#\s*sent[ _]id\s*=\s*(.*)$")
_TEXT = re.compile(r"#\s*text\s*=\s*(.*)$")


@dataclass(frozen=True)
class BracketedTree:
    tree: Tree
    sent_id: str | None = None
    text: str | None = None

    def __iter__(self):
        # unpacks as (sent_id, tree)
        return iter((self.sent_id, self.tree))


@dataclass(frozen=True)
class BracketedDocument:
    trees: tuple[BracketedTree, ...]
    dialect: Dialect = Dialect.NORMALIZED

    def __post_init__(self):
        trees = tuple(
            t if isinstance(t, BracketedTree) else BracketedTree(t[1], t[0])
            for t in self.trees
        )
        seen = set()
        for entry in trees:
            if entry.sent_id is None:
                continue
            if entry.sent_id in seen:
                raise DuplicateSentenceId(f"duplicate sentence id {entry.sent_id!r}")
            seen.add(entry.sent_id)
        object.__setattr__(self, "trees", trees)

    def __len__(self):
        return len(self.trees)

    def __iter__(self) -> Iterator[BracketedTree]:
        return iter(self.trees)


def normalize_chars(text: str, char_map: Mapping[str, str] = DEFAULT_CHAR_MAP) -> str:
    for src, dst in char_map.items():
        text = text.replace(src, dst)
    return text


def escape_atom(atom: str) -> str:
    for src, dst in _ESCAPES.items():
        atom = atom.replace(src, dst)
    return atom


def unescape_atom(atom: str) -> str:
    for src, dst in _UNESCAPES.items():
        atom = atom.replace(src, dst)
    return atom


class _Frame:
    __slots__ = ("label", "label_pos", "has_label", "children", "pos")

    def __init__(self, pos: int):
        self.pos = pos
        self.label: str | None = None
        self.label_pos = pos
        self.has_label = False
        self.children: list[Tree] = []


def _tokens(line: str, offset: int):
    i, n = 0, len(line)
    while i < n:
        ch = line[i]
        if ch.isspace():
            i += 1
        elif ch in "()":
            yield ch, offset + i
            i += 1
        else:
            j = i
            while j < n and not line[j].isspace() and line[j] not in "()":
                j += 1
            yield line[i:j], offset + i
            i = j


def parse_bracketed(
    text: str,
    dialect: Dialect | str = Dialect.NORMALIZED,
    *,
    null_patterns: Sequence[str] = DEFAULT_NULL_PATTERNS,
    char_map: Mapping[str, str] = DEFAULT_CHAR_MAP,
) -> BracketedDocument:
    """Parse every top-level bracket group in ``text``.

    Raises :class:`UnbalancedBrackets`, :class:`EmptyConstituent`,
    :class:`StrayToken` or :class:`BadLabel` with a character offset into
    the (line-break-stripped) input.
    """
    if isinstance(dialect, str):
        dialect = Dialect.from_name(dialect)
    text = text.replace(_LINEBREAK, "")
    if text.startswith("﻿"):
        text = text[1:]

    entries: list[BracketedTree] = []
    stack: list[_Frame] = []
    pending_id: str | None = None
    pending_text: str | None = None

    def make_leaf(atom: str) -> Leaf:
        surface = normalize_chars(unescape_atom(atom), char_map)
        return Leaf(Terminal(surface, is_null=is_null_surface(surface, null_patterns)))

    def close(frame: _Frame, pos: int) -> Tree:
        if not frame.has_label:
            # "()" or "(LABEL)"
            raise EmptyConstituent(frame.pos)
        if frame.label is None:
            # PTB-style unlabeled wrapper "( (S ...) )"
            if len(frame.children) == 1 and isinstance(frame.children[0], Node):
                return frame.children[0]
            raise BadLabel("", frame.pos)
        if not frame.children:
            raise EmptyConstituent(frame.pos)
        try:
            lab = CategoryLabel.parse(frame.label)
        except ValueError:
            raise BadLabel(frame.label, frame.label_pos) from None
        return Node(lab, tuple(frame.children))

    offset = 0
    for raw_line in text.splitlines(keepends=True):
        line = raw_line.rstrip("\r\n")
        stripped = line.strip()
        if not stack and stripped.startswith("#"):
            m = _SENT_ID.match(stripped)
            if m:
                pending_id = m.group(1).strip()
            else:
                m = _TEXT.match(stripped)
                if m:
                    pending_text = normalize_chars(m.group(1).strip(), char_map)
            offset += len(raw_line)
            continue
        for tok, pos in _tokens(line, offset):
            if tok == "(":
                if stack and not stack[-1].has_label:
                    stack[-1].has_label = True
                stack.append(_Frame(pos))
            elif tok == ")":
                if not stack:
                    raise UnbalancedBrackets(pos)
                tree = close(stack.pop(), pos)
                if stack:
                    stack[-1].children.append(tree)
                else:
                    entries.append(BracketedTree(tree, pending_id, pending_text))
                    pending_id = pending_text = None
            else:
                if not stack:
                    raise StrayToken(tok, pos)
                frame = stack[-1]
                if not frame.has_label:
                    frame.label, frame.label_pos, frame.has_label = tok, pos, True
                else:
                    frame.children.append(make_leaf(tok))
        offset += len(raw_line)
    if stack:
        raise UnbalancedBrackets(stack[0].pos)

    if dialect is Dialect.NORMALIZED:
        entries = [BracketedTree(_mark_upos(e.tree), e.sent_id, e.text) for e in entries]
    return BracketedDocument(tuple(entries), dialect)


def _mark_upos(tree: Tree) -> Tree:
    """Copy UPOS preterminal labels onto their terminals."""
    if isinstance(tree, Leaf):
        return tree
    if tree.is_preterminal and tree.label.base in UPOS_TAGS and not tree.label.function_tags:
        term = tree.children[0].terminal
        if term.upos is None and not term.is_null:
            return Node(tree.label, (Leaf(Terminal(term.surface, term.morph, tree.label.base)),))
        return tree
    return tree.with_children(_mark_upos(c) for c in tree.children)


def parse_tree(text: str, dialect: Dialect | str = Dialect.NORMALIZED, **kw) -> Tree:
    """Parse text holding exactly one tree."""
    doc = parse_bracketed(text, dialect, **kw)
    if len(doc) != 1:
        raise ValueError(f"expected one tree, found {len(doc)}")
    return doc.trees[0].tree


def tree_to_string(tree: Tree) -> str:
    if isinstance(tree, Leaf):
        return escape_atom(tree.surface)
    return "(" + str(tree.label) + " " + " ".join(tree_to_string(c) for c in tree.children) + ")"


def _pretty(tree: Tree, indent: int, out: list[str]) -> None:
    pad = "  " * indent
    if isinstance(tree, Leaf):
        out.append(pad + escape_atom(tree.surface))
    elif all(isinstance(c, Leaf) for c in tree.children) or tree.is_preterminal:
        out.append(pad + tree_to_string(tree))
    else:
        out.append(pad + "(" + str(tree.label))
        for child in tree.children:
            _pretty(child, indent + 1, out)
        out[-1] += ")"


def pretty_tree(tree: Tree) -> str:
    lines: list[str] = []
    _pretty(tree, 0, lines)
    return "\n".join(lines)


def serialize_bracketed(doc: BracketedDocument, pretty: bool = False) -> str:
    """Inverse of :func:`parse_bracketed`; LF line endings, one tree per
    line unless ``pretty``."""
    chunks = []
    for entry in doc.trees:
        lines = []
        if entry.sent_id is not None:
            lines.append(f"# sent id = {entry.sent_id}")
        if entry.text is not None:
            lines.append(f"# text = {entry.text}")
        lines.append(pretty_tree(entry.tree) if pretty else tree_to_string(entry.tree))
        chunks.append("\n".join(lines) + "\n")
    return "".join(chunks)
