"""Invariant checks over joint sentences and corpus statistics."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .bracketed import BracketedTree
from .jointfmt import JointSentence, build_tree, detokenize, id_order_problems
from .model import (DEFAULT_NULL_PATTERNS, Dialect, Leaf, Tree, Violation,
                    ViolationCode, depth, is_null_surface, iter_leaves,
                    iter_nodes, validate_dialect)


def _bracket_problems(sent: JointSentence) -> list[str]:
    out = []
    balance = 0
    for i, row in enumerate(sent.rows):
        balance += len(row.openings)
        if balance <= 0:
            out.append(f"row {row.id}: token outside any constituent")
        balance -= len(row.rhs)
        if balance < 0:
            out.append(f"row {row.id}: more closings than openings")
            balance = 0
        elif balance == 0 and i < len(sent.rows) - 1:
            out.append(f"row {row.id}: sentence tree closed before the last row")
    if balance > 0:
        out.append(f"{balance} constituent(s) left open")
    return out


def check_normalized(sent: JointSentence, tree: Tree | None = None, *,
                     null_patterns: Sequence[str] = DEFAULT_NULL_PATTERNS) -> list[Violation]:
    """Every violation of the normalized joint representation, in one pass.

    Checks bracket balance, token id order, preterminal/UPOS agreement,
    null and ``+`` residue, and that the rows detokenize to the text line.
    ``tree`` defaults to the tree rebuilt from the bracket columns.
    """
    sid = sent.sent_id
    out: list[Violation] = []

    def add(code: ViolationCode, where: str, msg: str) -> None:
        out.append(Violation(code, f"{sid}:{where}", msg))

    balance = _bracket_problems(sent)
    for msg in balance:
        add(ViolationCode.UNBALANCED_BRACKETS, "rows", msg)
    for msg in id_order_problems(sent.rows):
        add(ViolationCode.ID_ORDER, "rows", msg)

    if tree is None and not balance:
        try:
            tree = build_tree(sent.rows)
        except ValueError as exc:
            add(ViolationCode.NOT_NORMALIZED, "rows", str(exc))
    if tree is not None:
        yield_surfaces = [lf.surface for lf in iter_leaves(tree)]
        if yield_surfaces != [r.surface for r in sent.rows]:
            add(ViolationCode.YIELD_MISMATCH, "rows", "tree yield differs from the surface column")
        for v in validate_dialect(tree, Dialect.NORMALIZED, sent_id=sid,
                                  null_patterns=null_patterns):
            if v.code is ViolationCode.NOT_NORMALIZED:
                out.append(v)
        for row in sent.rows:
            last = row.openings[-1] if row.openings else None
            if row.upos is not None and last is not None and last != row.upos:
                add(ViolationCode.NOT_NORMALIZED, f"row {row.id}",
                    f"UPOS {row.upos} differs from preterminal {last}")

    for row in sent.rows:
        if is_null_surface(row.surface, null_patterns):
            add(ViolationCode.NULL_RESIDUE, f"row {row.id}", f"null element {row.surface!r}")
        if row.surface.startswith("+") and len(row.surface) > 1:
            add(ViolationCode.FUNCTIONAL_RESIDUE, f"row {row.id}",
                f"functional leaf {row.surface!r}")

    rebuilt = detokenize(sent.rows)
    if rebuilt != sent.text:
        add(ViolationCode.DETOKENIZE_MISMATCH, "text",
            f"rows give {rebuilt!r}, text line is {sent.text!r}")
    return out


def format_violations(violations: Iterable[Violation], fmt: str = "text") -> str:
    """``text``: one readable line each; ``tsv``: code, location, message."""
    lines = []
    for v in violations:
        if fmt == "tsv":
            lines.append(f"{v.code}\t{v.location}\t{v.message}")
        elif fmt == "text":
            lines.append(str(v))
        else:
            raise ValueError(f"unknown report format {fmt!r}")
    return "".join(line + "\n" for line in lines)


@dataclass
class CorpusStats:
    sentences: int = 0
    tokens: int = 0
    labels: Counter = field(default_factory=Counter)
    arity: Counter = field(default_factory=Counter)
    max_depth: int = 0

    def add_tree(self, tree: Tree) -> None:
        self.sentences += 1
        self.tokens += sum(1 for _ in iter_leaves(tree))
        for _, n in iter_nodes(tree):
            self.labels[str(n.label)] += 1
            self.arity[len(n.children)] += 1
        self.max_depth = max(self.max_depth, depth(tree))

    def __add__(self, other: "CorpusStats") -> "CorpusStats":
        return CorpusStats(self.sentences + other.sentences, self.tokens + other.tokens,
                           self.labels + other.labels, self.arity + other.arity,
                           max(self.max_depth, other.max_depth))

    def to_dict(self) -> dict:
        return {
            "sentences": self.sentences,
            "tokens": self.tokens,
            "labels": dict(sorted(self.labels.items())),
            "arity": {str(k): v for k, v in sorted(self.arity.items())},
            "max_depth": self.max_depth,
        }


def _as_tree(item) -> Tree:
    if isinstance(item, BracketedTree):
        return item.tree
    if isinstance(item, JointSentence):
        return item.tree()
    if isinstance(item, tuple):
        # (sent_id, tree) or (JointSentence, tree)
        return item[1]
    return item


def corpus_stats(stream: Iterable) -> CorpusStats:
    """Sentence, token, label, arity and depth counts over trees (or
    bracketed entries, joint sentences, or pairs ending in a tree)."""
    stats = CorpusStats()
    for item in stream:
        tree = _as_tree(item)
        if isinstance(tree, Leaf):
            stats.sentences += 1
            stats.tokens += 1
            continue
        stats.add_tree(tree)
    return stats
