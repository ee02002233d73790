"""Tree and label data model shared by every pass.

Trees are immutable: a :class:`Node` carries a :class:`CategoryLabel` and a
non-empty tuple of children, a :class:`Leaf` carries a :class:`Terminal`.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace
from typing import Iterator, Sequence, Union

from .morph import MorphSeg

DEFAULT_NULL_PATTERNS = (r"\*[^*]+\*",)

UPOS_TAGS = frozenset({
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
})

_BAD_BASE = re.compile(r"[-()\s]")


class Dialect(enum.Enum):
    SEJONG = "sejong"
    PENN = "penn"
    KAIST = "kaist"
    NORMALIZED = "normalized"

    @classmethod
    def from_name(cls, name: str) -> "Dialect":
        key = name.strip().lower()
        aliases = {"pennkorean": "penn", "penn-korean": "penn", "ktb": "kaist"}
        return cls(aliases.get(key, key))


@dataclass(frozen=True)
class CategoryLabel:
    base: str
    function_tags: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.base or _BAD_BASE.search(self.base):
            raise ValueError(f"invalid category base {self.base!r}")
        tags = tuple(self.function_tags)
        for tag in tags:
            if not tag or _BAD_BASE.search(tag):
                raise ValueError(f"invalid function tag {tag!r}")
        object.__setattr__(self, "function_tags", tags)

    @classmethod
    def parse(cls, text: str) -> "CategoryLabel":
        base, *tags = text.split("-")
        return cls(base, tuple(tags))

    def __str__(self) -> str:
        return "-".join((self.base,) + self.function_tags)


def label(text: str) -> CategoryLabel:
    return CategoryLabel.parse(text)


def is_null_surface(surface: str, patterns: Sequence[str] = DEFAULT_NULL_PATTERNS) -> bool:
    return any(re.fullmatch(p, surface) for p in patterns)


@dataclass(frozen=True)
class Terminal:
    surface: str
    morph: MorphSeg | None = None
    upos: str | None = None
    is_null: bool = False

    def __post_init__(self):
        if not self.surface:
            raise ValueError("terminal surface must be non-empty")
        if any(ch.isspace() for ch in self.surface):
            raise ValueError(f"terminal surface {self.surface!r} contains whitespace")
        if self.is_null and (self.morph is not None or self.upos is not None):
            raise ValueError("null terminals carry neither morph nor upos")

    @property
    def is_functional(self) -> bool:
        return self.surface.startswith("+") and len(self.surface) > 1


@dataclass(frozen=True)
class Leaf:
    terminal: Terminal

    @property
    def surface(self) -> str:
        return self.terminal.surface


@dataclass(frozen=True)
class Node:
    label: CategoryLabel
    children: tuple["Tree", ...] = field(default=())

    def __post_init__(self):
        children = tuple(self.children)
        if not children:
            raise ValueError(f"internal node {self.label} needs at least one child")
        object.__setattr__(self, "children", children)

    @property
    def is_preterminal(self) -> bool:
        return len(self.children) == 1 and isinstance(self.children[0], Leaf)

    def with_children(self, children) -> "Node":
        return Node(self.label, tuple(children))


Tree = Union[Node, Leaf]


def leaf(surface: str, **kw) -> Leaf:
    return Leaf(Terminal(surface, **kw))


def node(lab: str | CategoryLabel, *children: Tree) -> Node:
    if isinstance(lab, str):
        lab = CategoryLabel.parse(lab)
    return Node(lab, children)


def iter_leaves(tree: Tree) -> Iterator[Leaf]:
    stack = [tree]
    while stack:
        t = stack.pop()
        if isinstance(t, Leaf):
            yield t
        else:
            stack.extend(reversed(t.children))


def iter_nodes(tree: Tree) -> Iterator[tuple[tuple[int, ...], Node]]:
    """Pre-order walk over internal nodes, yielding (path, node)."""
    stack: list[tuple[tuple[int, ...], Tree]] = [((), tree)]
    while stack:
        path, t = stack.pop()
        if isinstance(t, Node):
            yield path, t
            for i in reversed(range(len(t.children))):
                stack.append((path + (i,), t.children[i]))


def yield_terminals(tree: Tree) -> list[Terminal]:
    """Leaves of ``tree`` in left-to-right order."""
    return [lf.terminal for lf in iter_leaves(tree)]


def surfaces(tree: Tree) -> list[str]:
    return [t.surface for t in yield_terminals(tree)]


def depth(tree: Tree) -> int:
    if isinstance(tree, Leaf):
        return 0
    return 1 + max(depth(c) for c in tree.children)


def count_nodes(tree: Tree) -> int:
    if isinstance(tree, Leaf):
        return 1
    return 1 + sum(count_nodes(c) for c in tree.children)


def structure(tree: Tree):
    """Labels, arities and leaf surfaces only; morph and UPOS fields are ignored."""
    if isinstance(tree, Leaf):
        return tree.surface
    return (str(tree.label),) + tuple(structure(c) for c in tree.children)


def map_terminals(tree: Tree, fn) -> Tree:
    """Rebuild ``tree`` with every terminal replaced by ``fn(index, terminal)``."""
    counter = iter(range(1 << 62))

    def go(t: Tree) -> Tree:
        if isinstance(t, Leaf):
            return Leaf(fn(next(counter), t.terminal))
        return t.with_children(go(c) for c in t.children)

    return go(tree)


def preterminal_upos(n: Node) -> str | None:
    """UPOS carried by ``n`` when it is a preterminal over an eojeol."""
    if not n.is_preterminal or n.label.function_tags or n.label.base not in UPOS_TAGS:
        return None
    term = n.children[0].terminal
    if term.upos is not None and term.upos != n.label.base:
        return None
    return n.label.base


def set_upos(term: Terminal, upos: str | None) -> Terminal:
    return replace(term, upos=upos)


# -- validation ------------------------------------------------------------

class ViolationCode(enum.Enum):
    ARITY = "Arity"
    UNBALANCED_BRACKETS = "UnbalancedBrackets"
    YIELD_MISMATCH = "YieldMismatch"
    NULL_RESIDUE = "NullResidue"
    FUNCTIONAL_RESIDUE = "FunctionalResidue"
    NOT_NORMALIZED = "NotNormalized"
    ID_ORDER = "IdOrder"
    DETOKENIZE_MISMATCH = "DetokenizeMismatch"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Violation:
    code: ViolationCode
    location: str
    message: str

    def __str__(self) -> str:
        return f"{self.location}: {self.code}: {self.message}"


def _path_str(path: tuple[int, ...]) -> str:
    return "/" + "/".join(map(str, path)) if path else "/"


def validate_dialect(
    tree: Tree,
    dialect: Dialect,
    *,
    sent_id: str = "",
    null_patterns: Sequence[str] = DEFAULT_NULL_PATTERNS,
) -> list[Violation]:
    """Check ``tree`` against the expansion schema of ``dialect``.

    Violations are returned, never raised.
    """
    out: list[Violation] = []
    prefix = f"{sent_id}:" if sent_id else ""

    def add(code, path, msg):
        out.append(Violation(code, prefix + _path_str(path), msg))

    if isinstance(tree, Leaf):
        if dialect is Dialect.NORMALIZED:
            add(ViolationCode.NOT_NORMALIZED, (), "sentence root is a bare leaf")
        elif dialect is Dialect.SEJONG:
            add(ViolationCode.ARITY, (), "sentence root is a bare leaf")

    for path, n in iter_nodes(tree):
        leaves = [c for c in n.children if isinstance(c, Leaf)]
        inner = [c for c in n.children if isinstance(c, Node)]
        if dialect is Dialect.SEJONG:
            if not ((len(inner) == 2 and not leaves) or (len(leaves) == 1 and not inner)):
                add(ViolationCode.ARITY, path,
                    f"{n.label} has {len(inner)} phrasal and {len(leaves)} terminal children;"
                    " expected 2 phrasal or 1 terminal")
        elif dialect is Dialect.NORMALIZED:
            if leaves and not n.is_preterminal:
                add(ViolationCode.NOT_NORMALIZED, path,
                    f"{n.label} dominates a terminal without a preterminal")
            elif n.is_preterminal and preterminal_upos(n) is None:
                add(ViolationCode.NOT_NORMALIZED, path,
                    f"preterminal {n.label} is not a UPOS label matching its terminal")

    for i, lf in enumerate(iter_leaves(tree)):
        term = lf.terminal
        if term.is_null or is_null_surface(term.surface, null_patterns):
            if dialect is not Dialect.PENN:
                out.append(Violation(ViolationCode.NULL_RESIDUE, f"{prefix}leaf {i}",
                                     f"null element {term.surface!r}"))
        if term.is_functional and dialect is not Dialect.KAIST:
            out.append(Violation(ViolationCode.FUNCTIONAL_RESIDUE, f"{prefix}leaf {i}",
                                 f"functional leaf {term.surface!r}"))
    return out
