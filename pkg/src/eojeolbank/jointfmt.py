"""The six-column joint annotation format.

One row per eojeol, TAB-separated::

    ID  SURFACE  MORPH  UPOS  LHS  RHS

``LHS`` holds the bracket openings that begin at the token (labels joined
by single spaces, ending with the UPOS preterminal), ``RHS`` the closing
parentheses that end at it. Columns 2, 5 and 6 alone determine the tree.
Each sentence starts with ``# sent id = ...`` and ``# text = ...`` lines;
sentences are separated by one blank line.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import (ColumnCount, IdOrder, JointFormatError, NotNormalized,
                     UnbalancedColumns)
from .model import (CategoryLabel, Dialect, Leaf, Node, Terminal, Tree,
                    validate_dialect)
from .morph import MorphSeg, parse_morphseg

BLANK = "_"
SENT_ID_PREFIX = "# sent id = "
TEXT_PREFIX = "# text = "

# punctuation that opens a span attaches to the following token when the
# text is rebuilt from rows
OPENING_PUNCT = frozenset("“‘(「『[{<《〈")

_TAIL = re.compile(r"^(.*?)(\d+)$")
_OPENING = re.compile(r"^\((\S+)$")


@dataclass(frozen=True)
class TokenRow:
    id: str
    surface: str
    morph: MorphSeg | None
    upos: str | None
    lhs: str
    rhs: str

    def __post_init__(self):
        if any(ch != ")" for ch in self.rhs):
            raise JointFormatError(f"row {self.id}: closing column {self.rhs!r} may only hold ')'")
        for tok in self.lhs.split():
            if not _OPENING.match(tok):
                raise JointFormatError(f"row {self.id}: malformed opening {tok!r}")

    @property
    def openings(self) -> list[str]:
        return [tok[1:] for tok in self.lhs.split()]

    def columns(self) -> tuple[str, str, str, str, str, str]:
        morph = str(self.morph) if self.morph is not None else BLANK
        return (self.id, self.surface, morph, self.upos or BLANK, self.lhs, self.rhs)

    def to_line(self) -> str:
        return "\t".join(self.columns())


@dataclass(frozen=True)
class JointSentence:
    sent_id: str
    text: str
    rows: tuple[TokenRow, ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))

    def to_text(self) -> str:
        lines = [SENT_ID_PREFIX + self.sent_id, TEXT_PREFIX + self.text]
        lines += [r.to_line() for r in self.rows]
        return "\n".join(lines) + "\n"

    def tree(self) -> Tree:
        return build_tree(self.rows)


def token_ids(sent_id: str, n: int, id_base: str | None = None) -> list[str]:
    """Ids continuing the numeric tail of ``id_base`` (zero padding kept);
    without one, ``<sent_id>-1``, ``<sent_id>-2``, ..."""
    if id_base is not None:
        m = _TAIL.match(id_base)
        if m:
            prefix, digits = m.groups()
            start = int(digits)
            return [prefix + str(start + i).zfill(len(digits)) for i in range(n)]
        sent_id = id_base
    return [f"{sent_id}-{i}" for i in range(1, n + 1)]


def detokenize(rows: Sequence[TokenRow]) -> str:
    """Rebuild the sentence text: single spaces between eojeol, PUNCT rows
    glued to the preceding token (opening brackets to the following one)."""
    out = ""
    glue_next = False
    for i, row in enumerate(rows):
        is_punct = row.upos == "PUNCT"
        opening = is_punct and row.surface in OPENING_PUNCT
        if i == 0 or glue_next or (is_punct and not opening):
            out += row.surface
        else:
            out += " " + row.surface
        glue_next = opening
    return out


def emit_joint(tree: Tree, sent_id: str, id_base: str | None = None,
               text: str | None = None) -> JointSentence:
    """Encode a normalized tree as joint rows (leftmost-opening convention)."""
    problems = validate_dialect(tree, Dialect.NORMALIZED, sent_id=sent_id)
    if problems:
        raise NotNormalized("; ".join(map(str, problems)))

    cells: list[list] = []  # [terminal, upos, openings, closings]
    opens: list[str] = []

    def go(t: Tree, parent: Node | None) -> None:
        if isinstance(t, Leaf):
            upos = t.terminal.upos or parent.label.base
            cells.append([t.terminal, upos, " ".join(opens), 0])
            opens.clear()
            return
        opens.append("(" + str(t.label))
        for c in t.children:
            go(c, t)
        cells[-1][3] += 1

    go(tree, None)
    ids = token_ids(sent_id, len(cells), id_base)
    rows = [TokenRow(tid, term.surface, term.morph, upos, lhs, ")" * closes)
            for tid, (term, upos, lhs, closes) in zip(ids, cells)]
    return JointSentence(sent_id, text if text is not None else detokenize(rows), tuple(rows))


def build_tree(rows: Sequence[TokenRow]) -> Tree:
    """Rebuild the constituency tree from the surface and bracket columns.

    Raises :class:`UnbalancedColumns` when the brackets do not describe
    exactly one tree.
    """
    if not rows:
        raise UnbalancedColumns("no rows")
    stack: list[tuple[CategoryLabel, list[Tree]]] = []
    roots: list[Tree] = []
    for row in rows:
        for lab in row.openings:
            try:
                stack.append((CategoryLabel.parse(lab), []))
            except ValueError:
                raise JointFormatError(f"row {row.id}: bad label {lab!r}") from None
        if not stack:
            raise UnbalancedColumns(f"row {row.id}: token outside any constituent")
        stack[-1][1].append(Leaf(Terminal(row.surface, row.morph, row.upos)))
        for _ in row.rhs:
            if not stack:
                raise UnbalancedColumns(f"row {row.id}: closes more constituents than are open")
            lab, kids = stack.pop()
            done = Node(lab, tuple(kids))
            if stack:
                stack[-1][1].append(done)
            else:
                roots.append(done)
        if not stack and row is not rows[-1]:
            raise UnbalancedColumns(f"row {row.id}: sentence tree closed before the last row")
    if stack:
        raise UnbalancedColumns(f"{len(stack)} constituent(s) left open")
    return roots[0]


def id_order_problems(rows: Sequence[TokenRow]) -> list[str]:
    """Ids must share one prefix and count up by one."""
    out = []
    prev = None
    for i, row in enumerate(rows):
        m = _TAIL.match(row.id)
        if not m:
            out.append(f"row {i + 1}: id {row.id!r} has no numeric tail")
            prev = None
            continue
        cur = (m.group(1), int(m.group(2)))
        if prev is not None and (cur[0] != prev[0] or cur[1] != prev[1] + 1):
            out.append(f"row {i + 1}: id {row.id!r} does not follow {prev[0]}{prev[1]}")
        prev = cur
    return out


def _row(fields: list[str], index: int) -> TokenRow:
    if len(fields) != 6:
        raise ColumnCount(index, len(fields))
    tid, surface, morph, upos, lhs, rhs = fields
    if not tid or not surface:
        raise JointFormatError(f"row {index}: empty id or surface")
    return TokenRow(
        tid, surface,
        None if morph == BLANK else parse_morphseg(morph),
        None if upos == BLANK else upos,
        lhs.strip(), rhs.strip(),
    )


def read_sentence(block: str) -> JointSentence:
    """Parse the header lines and rows of one sentence without building or
    checking the tree."""
    sent_id = text = None
    rows: list[TokenRow] = []
    for line in block.split("\n"):
        if not line.strip():
            continue
        if line.startswith("#"):
            if line.startswith(SENT_ID_PREFIX.rstrip()):
                sent_id = line[len(SENT_ID_PREFIX):].strip() if len(line) > len(SENT_ID_PREFIX) else ""
            elif line.startswith(TEXT_PREFIX.rstrip()):
                text = line[len(TEXT_PREFIX):] if len(line) > len(TEXT_PREFIX) else ""
            continue
        rows.append(_row(line.split("\t"), len(rows) + 1))
    if sent_id is None or text is None:
        raise JointFormatError("missing '# sent id' or '# text' header")
    if not rows:
        raise JointFormatError(f"sentence {sent_id!r} has no rows")
    return JointSentence(sent_id, text, tuple(rows))


def parse_joint(text: str) -> tuple[JointSentence, Tree]:
    """Parse one sentence and reconstruct its tree.

    Raises :class:`ColumnCount`, :class:`UnbalancedColumns`,
    :class:`IdOrder` or :class:`NotNormalized`.
    """
    sent = read_sentence(text)
    problems = id_order_problems(sent.rows)
    if problems:
        raise IdOrder("; ".join(problems))
    tree = build_tree(sent.rows)
    for row, term_upos in zip(sent.rows, _preterminal_labels(tree)):
        if row.upos is not None and row.upos != term_upos:
            raise NotNormalized(f"row {row.id}: UPOS {row.upos} under preterminal {term_upos}")
    bad = validate_dialect(tree, Dialect.NORMALIZED, sent_id=sent.sent_id)
    if bad:
        raise NotNormalized("; ".join(map(str, bad)))
    return sent, tree


def _preterminal_labels(tree: Tree) -> list[str | None]:
    out: list[str | None] = []

    def go(t: Tree, parent: Node | None):
        if isinstance(t, Leaf):
            out.append(parent.label.base if parent is not None and parent.is_preterminal else None)
            return
        for c in t.children:
            go(c, t)

    go(tree, None)
    return out


def split_blocks(text: str) -> Iterator[str]:
    """Sentence blocks separated by blank lines."""
    block: list[str] = []
    for line in text.replace("\r\n", "\n").split("\n"):
        if line.strip():
            block.append(line)
        elif block:
            yield "\n".join(block)
            block = []
    if block:
        yield "\n".join(block)


def read_joint(text: str) -> list[tuple[JointSentence, Tree]]:
    return [parse_joint(b) for b in split_blocks(text)]


def serialize_joint(sentences: Iterable[JointSentence]) -> str:
    return "\n".join(s.to_text() for s in sentences)
