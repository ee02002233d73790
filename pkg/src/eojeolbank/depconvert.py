"""Constituency to dependency projection over eojeol terminals.

Each constituent's lexical head is the lexical head of its head child,
chosen by per-category head rules; every other child's lexical head
depends on it. Since terminals are eojeol on both sides, the node set of
the graph is exactly the tree's yield.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .errors import AllPunct, ConfigError
from .jointfmt import SENT_ID_PREFIX, TEXT_PREFIX, detokenize, split_blocks
from .model import Leaf, Node, Tree, iter_leaves
from .morph import MorphSeg, parse_morphseg
from .upos import data_text

DIRECTIONS = ("rightmost", "leftmost")
PUNCT = "PUNCT"


@dataclass(frozen=True)
class HeadDirective:
    direction: str
    priorities: tuple[str, ...]

    def __post_init__(self):
        if self.direction not in DIRECTIONS:
            raise ConfigError(f"unknown head direction {self.direction!r}")


@dataclass(frozen=True)
class HeadRules:
    directives: Mapping[str, HeadDirective]
    default_direction: str = "rightmost"

    def __post_init__(self):
        if self.default_direction not in DIRECTIONS:
            raise ConfigError(f"unknown head direction {self.default_direction!r}")
        for cat, d in self.directives.items():
            if not d.priorities:
                raise ConfigError(f"head rule for {cat} lists no child categories")

    @classmethod
    def from_tsv(cls, text: str) -> "HeadRules":
        directives = {}
        default = "rightmost"
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cols = line.split("\t") + ["", ""]
            cat, direction, prio = cols[0].strip(), cols[1].strip(), cols[2].strip()
            if not cat or not direction:
                raise ConfigError(f"head rules line {lineno}: expected category and direction")
            if cat == "*":
                if direction not in DIRECTIONS:
                    raise ConfigError(f"head rules line {lineno}: unknown direction {direction!r}")
                default = direction
                continue
            directives[cat] = HeadDirective(
                direction, tuple(p.strip() for p in prio.split(",") if p.strip()))
        return cls(directives, default)

    @classmethod
    def load(cls, path: str | Path) -> "HeadRules":
        return cls.from_tsv(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class LabelMap:
    """Function tag to dependency label; ``none``, ``punct`` and ``root``
    cover untagged dependents, punctuation and the root."""

    tags: Mapping[str, str]
    none: str = "dep"
    punct: str = "punct"
    root: str = "root"

    @classmethod
    def from_tsv(cls, text: str) -> "LabelMap":
        tags, special = {}, {}
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) < 2 or not cols[0].strip() or not cols[1].strip():
                raise ConfigError(f"label map line {lineno}: expected 'tag<TAB>label'")
            key, value = cols[0].strip(), cols[1].strip()
            if key in ("_none", "_punct", "_root"):
                special[key[1:]] = value
            else:
                tags[key] = value
        return cls(tags, **special)

    @classmethod
    def load(cls, path: str | Path) -> "LabelMap":
        return cls.from_tsv(Path(path).read_text(encoding="utf-8"))

    def for_tag(self, tag: str | None) -> str:
        if tag is None:
            return self.none
        return self.tags.get(tag, tag.lower())


_DEFAULT_RULES: HeadRules | None = None
_DEFAULT_LABELS: LabelMap | None = None


def default_head_rules() -> HeadRules:
    global _DEFAULT_RULES
    if _DEFAULT_RULES is None:
        _DEFAULT_RULES = HeadRules.from_tsv(data_text("head_rules.tsv"))
    return _DEFAULT_RULES


def default_label_map() -> LabelMap:
    global _DEFAULT_LABELS
    if _DEFAULT_LABELS is None:
        _DEFAULT_LABELS = LabelMap.from_tsv(data_text("label_map.tsv"))
    return _DEFAULT_LABELS


def _category(t: Tree) -> str:
    return t.label.base if isinstance(t, Node) else ""


def _is_punct(t: Tree) -> bool:
    if isinstance(t, Leaf):
        return t.terminal.upos == PUNCT
    return t.is_preterminal and t.label.base == PUNCT


def find_head(node: Node, rules: HeadRules | None = None) -> int:
    """Index of the head child of ``node``.

    Priorities are tried in order, each scanning the children in the
    directive's direction; PUNCT children are skipped unless nothing else
    is there.
    """
    rules = rules or default_head_rules()
    kids = node.children
    if len(kids) == 1:
        return 0
    candidates = [i for i, c in enumerate(kids) if not _is_punct(c)] or list(range(len(kids)))
    directive = rules.directives.get(node.label.base)
    direction = directive.direction if directive else rules.default_direction
    order = candidates[::-1] if direction == "rightmost" else candidates
    if directive:
        for cat in directive.priorities:
            for i in order:
                if _category(kids[i]) == cat:
                    return i
    return order[0]


@dataclass(frozen=True)
class DepNode:
    index: int
    surface: str
    upos: str | None
    morph: MorphSeg | None


@dataclass(frozen=True)
class DepGraph:
    nodes: tuple[DepNode, ...]
    heads: tuple[int, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        for name in ("nodes", "heads", "labels"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        n = len(self.nodes)
        if not n or len(self.heads) != n or len(self.labels) != n:
            raise ValueError("nodes, heads and labels must be non-empty and of equal length")
        if [d.index for d in self.nodes] != list(range(1, n + 1)):
            raise ValueError("node indices must run 1..n")
        if sum(1 for h in self.heads if h == 0) != 1:
            raise ValueError("exactly one node must attach to the root")
        if any(not 0 <= h <= n for h in self.heads):
            raise ValueError("head index out of range")
        for i in range(1, n + 1):
            seen = set()
            while i:
                if i in seen:
                    raise ValueError("dependency graph has a cycle")
                seen.add(i)
                i = self.heads[i - 1]

    @property
    def root(self) -> int:
        return self.heads.index(0) + 1

    def arcs(self) -> list[tuple[int, int, str]]:
        """(dependent, head, label) for every non-root node."""
        return [(i, h, lab) for i, (h, lab) in enumerate(zip(self.heads, self.labels), 1) if h]

    def is_projective(self) -> bool:
        def dominated(k: int, h: int) -> bool:
            while k:
                if k == h:
                    return True
                k = self.heads[k - 1]
            return False

        for d, h, _ in self.arcs():
            lo, hi = min(d, h), max(d, h)
            if not all(dominated(k, h) for k in range(lo + 1, hi)):
                return False
        return True


def to_dependency(tree: Tree, rules: HeadRules | None = None,
                  labels: LabelMap | None = None) -> DepGraph:
    """Project a normalized tree onto a dependency graph by head percolation."""
    rules = rules or default_head_rules()
    labels = labels or default_label_map()
    terms = [lf.terminal for lf in iter_leaves(tree)]
    if all(t.upos == PUNCT for t in terms):
        raise AllPunct("sentence has no non-punctuation token")
    heads = [0] * len(terms)
    rels = [labels.none] * len(terms)
    counter = iter(range(1, len(terms) + 1))

    def arc_label(child: Tree) -> str:
        if _is_punct(child):
            return labels.punct
        if isinstance(child, Node) and child.label.function_tags:
            return labels.for_tag(child.label.function_tags[0])
        return labels.none

    def go(t: Tree) -> int:
        if isinstance(t, Leaf):
            return next(counter)
        lexical = [go(c) for c in t.children]
        h = find_head(t, rules)
        for i, child in enumerate(t.children):
            if i != h:
                heads[lexical[i] - 1] = lexical[h]
                rels[lexical[i] - 1] = arc_label(child)
        return lexical[h]

    root = go(tree)
    heads[root - 1] = 0
    rels[root - 1] = labels.root
    nodes = tuple(DepNode(i, t.surface, t.upos, t.morph) for i, t in enumerate(terms, 1))
    return DepGraph(nodes, tuple(heads), tuple(rels))


def emit_dependencies(graph: DepGraph, sent_id: str, text: str | None = None) -> str:
    """Ten-column rows: id, form, lemma, upos, xpos, feats, head, deprel,
    deps, misc; unused columns hold ``_``."""
    lines = [SENT_ID_PREFIX + sent_id,
             TEXT_PREFIX + (text if text is not None else detokenize(graph.nodes))]
    for node, head, rel in zip(graph.nodes, graph.heads, graph.labels):
        xpos = str(node.morph) if node.morph is not None else "_"
        lines.append("\t".join((str(node.index), node.surface, "_", node.upos or "_", xpos,
                                "_", str(head), rel, "_", "_")))
    return "\n".join(lines) + "\n"


def read_dependencies(text: str) -> list[tuple[str, DepGraph]]:
    """Inverse of :func:`emit_dependencies` over a whole file."""
    out = []
    for block in split_blocks(text):
        sent_id = ""
        nodes, heads, rels = [], [], []
        for line in block.split("\n"):
            if line.startswith(SENT_ID_PREFIX):
                sent_id = line[len(SENT_ID_PREFIX):]
                continue
            if line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 10:
                raise ValueError(f"dependency row needs 10 columns, got {len(cols)}: {line!r}")
            morph = None if cols[4] == "_" else parse_morphseg(cols[4])
            nodes.append(DepNode(int(cols[0]), cols[1], None if cols[3] == "_" else cols[3], morph))
            heads.append(int(cols[6]))
            rels.append(cols[7])
        out.append((sent_id, DepGraph(tuple(nodes), tuple(heads), tuple(rels))))
    return out


__all__ = [
    "DepGraph", "DepNode", "HeadDirective", "HeadRules", "LabelMap",
    "default_head_rules", "default_label_map", "emit_dependencies", "find_head",
    "read_dependencies", "to_dependency",
]
