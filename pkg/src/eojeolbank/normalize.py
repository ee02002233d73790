"""Normalization of Sejong, Penn Korean and Kaist trees to eojeol-based trees.

The pipeline runs, in order::

    reattach_functional   (Kaist only)
    strip_nulls           (Penn Korean, or whenever null leaves occur)
    align_eojeol          (morph parsing, punctuation split, surface forms)
    debinarize
    label_terminals       (UPOS preterminals, see :mod:`eojeolbank.upos`)
    restructure_nominals  (NML / AdjP grouping inside NPs)

Each pass is a pure tree-to-tree function.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Mapping, Sequence

from .bracketed import DEFAULT_CHAR_MAP, normalize_chars
from .errors import (ConfigError, EmptyTree, NotNormalized, OrphanFunctional,
                     PassError, TreebankError, YieldMismatch)
from .model import (DEFAULT_NULL_PATTERNS, CategoryLabel, Dialect, Leaf, Node,
                    Terminal, Tree, is_null_surface, iter_leaves,
                    validate_dialect)
from .morph import MorphSeg, join_forms, looks_like_morphseg, parse_morphseg, same_onset
from .upos import UposTable, default_tag_map, label_terminals

PUNCT_TAGS = frozenset({"SF", "SP", "SS", "SE", "SO"})

# labels that name phrases in at least one source tagset; never dissolved
# as part-of-speech preterminals
PHRASAL = frozenset({
    "S", "NP", "VP", "AP", "DP", "IP", "VNP", "X", "L", "R", "Q",
    "ADJP", "ADVP", "ADCP", "DANP", "WHNP", "PRN", "INTJ", "LST",
})

NML = CategoryLabel("NML")
ADJP = CategoryLabel("AdjP")
NP = CategoryLabel("NP")
NOMINAL = frozenset({"NOUN", "PROPN"})


class NmlAnalysis(enum.Enum):
    FIGURE_SIX = "FigureSix"
    NP_LEVEL_ADJ = "NpLevelAdj"
    FLAT = "Flat"


class Branching(enum.Enum):
    LEFT = "Left"
    RIGHT = "Right"


@dataclass(frozen=True)
class NmlRuleSet:
    analysis: NmlAnalysis = NmlAnalysis.FIGURE_SIX
    compound_branching: Branching = Branching.LEFT


@dataclass(frozen=True)
class NormalizeConfig:
    null_patterns: tuple[str, ...] = DEFAULT_NULL_PATTERNS
    splice_requires_tag_match: bool = True
    nml_rules: NmlRuleSet = field(default_factory=NmlRuleSet)
    prune_empty: bool = True
    # unary nodes over one eojeol carrying one of these tags are dissolved
    dissolve_tags: frozenset = frozenset({"MOD"})
    punct_tags: frozenset = PUNCT_TAGS
    genitive_tags: frozenset = frozenset({"JKG"})
    char_map: Mapping[str, str] = field(default_factory=lambda: dict(DEFAULT_CHAR_MAP))
    upos_table: UposTable | None = None
    # per-dialect override of the shipped tag maps
    tag_maps: Mapping[Dialect, Mapping[str, str]] = field(default_factory=dict)

    def __post_init__(self):
        if not self.null_patterns:
            raise ConfigError("at least one null pattern is required")

    def tag_map_for(self, dialect: Dialect) -> Mapping[str, str]:
        if dialect in self.tag_maps:
            return self.tag_maps[dialect]
        return _cached_tag_map(dialect)

    def pos_labels(self, dialect: Dialect) -> frozenset:
        return frozenset(self.tag_map_for(dialect)) - PHRASAL

    def is_punct(self, morph: MorphSeg | None, tag_map: Mapping[str, str]) -> bool:
        return morph is not None and all(t in self.punct_tags for t in morph.mapped_xpos(tag_map))


_TAG_MAP_CACHE: dict[Dialect, Mapping[str, str]] = {}


def _cached_tag_map(dialect: Dialect) -> Mapping[str, str]:
    if dialect not in _TAG_MAP_CACHE:
        _TAG_MAP_CACHE[dialect] = default_tag_map(dialect)
    return _TAG_MAP_CACHE[dialect]


def _tags(value: str) -> frozenset:
    return frozenset(t.strip() for t in value.split(",") if t.strip())


def _bool(key: str, value: str) -> bool:
    v = value.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {value!r}")


def parse_normalize_config(text: str, base: NormalizeConfig | None = None) -> NormalizeConfig:
    """Read ``key = value`` settings followed by a ``[nulls]`` section
    listing one null-element regex per line."""
    cfg = base or NormalizeConfig()
    values: dict = {}
    nulls: list[str] = []
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section != "nulls":
                raise ConfigError(f"line {lineno}: unknown section [{section}]")
            continue
        if section == "nulls":
            nulls.append(line)
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected key = value")
        values[key.strip()] = value.strip()

    kw: dict = {}
    nml = cfg.nml_rules
    for key, value in values.items():
        try:
            if key == "splice_requires_tag_match":
                kw[key] = _bool(key, value)
            elif key == "prune_empty":
                kw[key] = _bool(key, value)
            elif key in ("dissolve_tags", "punct_tags", "genitive_tags"):
                kw[key] = _tags(value)
            elif key == "analysis":
                nml = replace(nml, analysis=NmlAnalysis(value))
            elif key == "compound_branching":
                nml = replace(nml, compound_branching=Branching(value))
            else:
                raise ConfigError(f"unknown setting {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"{key}: invalid value {value!r}") from None
    if nulls:
        kw["null_patterns"] = tuple(nulls)
    return replace(cfg, nml_rules=nml, **kw)


def load_normalize_config(path: str | Path, base: NormalizeConfig | None = None) -> NormalizeConfig:
    return parse_normalize_config(Path(path).read_text(encoding="utf-8"), base)


# -- helpers ---------------------------------------------------------------

def _rebuild(tree: Tree, fn: Callable[[int, Leaf], Sequence[Tree]],
             relabel: Callable[[CategoryLabel], CategoryLabel] | None = None) -> Tree | None:
    """Replace each leaf by ``fn(index, leaf)`` (possibly nothing), dropping
    internal nodes left without children."""
    counter = iter(range(1 << 62))

    def go(t: Tree) -> list[Tree]:
        if isinstance(t, Leaf):
            return list(fn(next(counter), t))
        kids = [k for c in t.children for k in go(c)]
        if not kids:
            return []
        lab = relabel(t.label) if relabel else t.label
        return [Node(lab, tuple(kids))]

    out = go(tree)
    return out[0] if out else None


def _upos(t: Tree) -> str | None:
    if isinstance(t, Node) and t.is_preterminal:
        return t.label.base
    return None


# -- debinarize ------------------------------------------------------------

def debinarize(tree: Tree, config: NormalizeConfig | None = None,
               dialect: Dialect = Dialect.SEJONG) -> Tree:
    """Collapse same-category chains into flat constituents.

    A child is spliced into its parent (its children take its place, order
    kept) when both share a base category and the child's function tags are
    empty or equal to the parent's. Unary nodes over a single eojeol are
    also dissolved when they carry a tag from ``config.dissolve_tags``
    (Sejong ``NP-MOD``) or are a part-of-speech label of the source tagset
    (Penn Korean ``VV``). Applied bottom-up to a fixpoint.
    """
    cfg = config or NormalizeConfig()
    pos_labels = cfg.pos_labels(dialect)

    def eligible(parent: CategoryLabel, child: Tree) -> bool:
        if not isinstance(child, Node):
            return False
        lab = child.label
        if lab.base == parent.base:
            if (not cfg.splice_requires_tag_match or not lab.function_tags
                    or lab.function_tags == parent.function_tags):
                return True
        if child.is_preterminal:
            if cfg.dissolve_tags.intersection(lab.function_tags):
                return True
            if not lab.function_tags and lab.base in pos_labels:
                return True
        return False

    def flatten_into(parent: CategoryLabel, child: Tree):
        if eligible(parent, child):
            for grandchild in child.children:
                yield from flatten_into(parent, grandchild)
        else:
            yield child

    def go(t: Tree) -> Tree:
        if isinstance(t, Leaf):
            return t
        kids = [go(c) for c in t.children]
        return Node(t.label, tuple(k for c in kids for k in flatten_into(t.label, c)))

    return go(tree)


# -- null elements ---------------------------------------------------------

def strip_nulls(tree: Tree, config: NormalizeConfig | None = None) -> Tree:
    """Remove null-element leaves and any constituents left empty.

    Raises :class:`EmptyTree` when nothing overt remains.
    """
    cfg = config or NormalizeConfig()
    if not cfg.prune_empty:
        raise ConfigError("prune_empty cannot be disabled: childless nodes are not representable")

    def keep(_: int, lf: Leaf):
        term = lf.terminal
        if term.is_null or is_null_surface(term.surface, cfg.null_patterns):
            return []
        return [lf]

    out = _rebuild(tree, keep)
    if out is None:
        raise EmptyTree("sentence consists of null elements only")
    return out


# -- Kaist functional morphemes --------------------------------------------

def _eojeol_tokens(terms: Sequence[Terminal], punct: Sequence[bool]) -> list[str]:
    """Surface tokens as written: punctuation sticks to the preceding eojeol."""
    tokens: list[str] = []
    for term, is_p in zip(terms, punct):
        if is_p and tokens:
            tokens[-1] += term.surface
        else:
            tokens.append(term.surface)
    return tokens


def _functional_flags(tree: Tree) -> list[bool]:
    """Functional status per leaf: a ``+`` surface, or the leftmost leaf
    of a ``+``-labelled group such as ``+AUXP``."""
    flags: list[bool] = []

    def walk(t: Tree, pending: bool) -> bool:
        if isinstance(t, Leaf):
            flags.append(t.terminal.is_functional or pending)
            return False
        if t.label.base.startswith("+"):
            pending = True
        for c in t.children:
            pending = walk(c, pending)
        return pending

    walk(tree, False)
    return flags


def _strip_plus(lab: CategoryLabel) -> CategoryLabel:
    if lab.base.startswith("+") and len(lab.base) > 1:
        return CategoryLabel(lab.base.lstrip("+"), lab.function_tags)
    return lab


def reattach_functional(tree: Tree, raw_text: str | None = None,
                        config: NormalizeConfig | None = None) -> Tree:
    """Merge Kaist functional morpheme leaves into their host eojeol.

    Each functional leaf joins the nearest preceding lexical leaf; the
    morph layers are concatenated and the surface is respelled from the
    forms. Functional punctuation (``+./sf``) becomes a standalone
    punctuation terminal instead. With ``raw_text`` the resulting eojeol
    sequence must reproduce that text or :class:`YieldMismatch` is raised.
    """
    cfg = config or NormalizeConfig()
    tag_map = cfg.tag_map_for(Dialect.KAIST)
    leaves = list(iter_leaves(tree))
    flags = _functional_flags(tree)

    parsed: list[tuple[str, MorphSeg | None]] = []
    for lf in leaves:
        raw = lf.surface[1:] if lf.terminal.is_functional else lf.surface
        morph = parse_morphseg(raw) if looks_like_morphseg(raw) else None
        parsed.append((raw, morph))

    punct = [cfg.is_punct(m, tag_map) for _, m in parsed]
    host_of: dict[int, int] = {}
    groups: dict[int, list[int]] = {}
    host = None
    for i, (lf, functional) in enumerate(zip(leaves, flags)):
        if functional and not punct[i]:
            if host is None:
                raise OrphanFunctional(lf.surface)
            host_of[i] = host
            groups[host].append(i)
        elif not punct[i]:
            host = i
            groups[i] = [i]

    merged: dict[int, Terminal] = {}
    for i, (raw, morph) in enumerate(parsed):
        if i in host_of:
            continue
        members = groups.get(i, [i])
        morphs = [parsed[j][1] for j in members]
        if all(m is not None for m in morphs):
            seg = morphs[0]
            for m in morphs[1:]:
                seg = seg + m
            merged[i] = Terminal(join_forms(seg.forms), seg)
        else:
            merged[i] = Terminal("".join(parsed[j][0] for j in members))

    def place(i: int, lf: Leaf):
        return [] if i in host_of else [Leaf(merged[i])]

    out = _rebuild(tree, place, relabel=_strip_plus)
    if raw_text is not None:
        terms = [merged[i] for i in sorted(merged)]
        got = _eojeol_tokens(terms, [punct[i] for i in sorted(merged)])
        want = normalize_chars(raw_text, cfg.char_map).split()
        if got != want:
            raise YieldMismatch(want, got)
    return out


# -- eojeol alignment ------------------------------------------------------

@dataclass
class _Piece:
    term: Terminal
    punct: bool
    attach: str | None  # "prev", "next" or None for eojeol
    from_forms: bool


def _split_leaf(term: Terminal, cfg: NormalizeConfig, tag_map) -> list[_Piece]:
    morph, from_forms = term.morph, False
    if morph is None and looks_like_morphseg(term.surface):
        morph, from_forms = parse_morphseg(term.surface), True
    if morph is None:
        return [_Piece(term, False, None, False)]
    tags = morph.mapped_xpos(tag_map)
    is_p = [t in cfg.punct_tags for t in tags]
    if all(is_p):
        surface = join_forms(morph.forms) if from_forms else term.surface
        return [_Piece(Terminal(surface, morph), True, "prev", False)]
    lead = 0
    while is_p[lead]:
        lead += 1
    trail = 0
    while is_p[len(is_p) - 1 - trail]:
        trail += 1
    core = MorphSeg(morph.morphs[lead:len(morph) - trail])
    if lead == 0 and trail == 0:
        surface = core.joined_forms() if from_forms else term.surface
        return [_Piece(Terminal(surface, core), False, None, from_forms)]
    pieces = [_Piece(Terminal(f, MorphSeg(((f, t),))), True, "next", False)
              for f, t in morph.morphs[:lead]]
    pieces.append(_Piece(Terminal(core.joined_forms(), core), False, None, True))
    pieces += [_Piece(Terminal(f, MorphSeg(((f, t),))), True, "prev", False)
               for f, t in morph.morphs[len(morph) - trail:]]
    return pieces


def _align_to_text(pieces: list[_Piece], raw_text: str, char_map) -> None:
    tokens = normalize_chars(raw_text, char_map).split()
    units: list[list[_Piece]] = []
    pending: list[_Piece] = []
    for p in pieces:
        if p.attach == "next" or (p.attach == "prev" and (pending or not units)):
            pending.append(p)
        elif p.attach == "prev":
            units[-1].append(p)
        else:
            units.append(pending + [p])
            pending = []
    if pending:
        if units:
            units[-1].extend(pending)
        else:
            units.append(pending)

    spelled = ["".join(p.term.surface for p in u) for u in units]
    if len(units) != len(tokens):
        raise YieldMismatch(tokens, spelled)
    for unit, token in zip(units, tokens):
        words = [p for p in unit if not p.punct]
        k = unit.index(words[0]) if words else len(unit)
        prefix = "".join(p.term.surface for p in unit[:k])
        suffix = "".join(p.term.surface for p in unit[k + 1:]) if words else ""
        if not words:
            if token != prefix:
                raise YieldMismatch(tokens, spelled)
            continue
        core = token[len(prefix):len(token) - len(suffix)] if suffix else token[len(prefix):]
        if (not token.startswith(prefix) or not token.endswith(suffix) or not core
                or not same_onset(core, words[0].term.surface)):
            raise YieldMismatch(tokens, spelled)
        words[0].term = replace(words[0].term, surface=core)


def align_eojeol(tree: Tree, raw_text: str | None = None,
                 config: NormalizeConfig | None = None,
                 dialect: Dialect = Dialect.SEJONG) -> Tree:
    """Turn every leaf into a surface eojeol with its morph layer attached.

    Leaves written as ``form/TAG+...`` are parsed; punctuation morphs fused
    at either edge of an eojeol become separate terminals; surfaces come
    from ``raw_text`` when given (aligned eojeol by eojeol) and are
    otherwise spelled from the morph forms. Sentence-final punctuation is
    moved to the end of the root constituent.
    """
    cfg = config or NormalizeConfig()
    tag_map = cfg.tag_map_for(dialect)
    per_leaf = [_split_leaf(lf.terminal, cfg, tag_map) for lf in iter_leaves(tree)]
    if raw_text is not None:
        _align_to_text([p for ps in per_leaf for p in ps], raw_text, cfg.char_map)

    out = _rebuild(tree, lambda i, _: [Leaf(p.term) for p in per_leaf[i]])
    flat = [p for ps in per_leaf for p in ps]
    trailing = 0
    while trailing < len(flat) - 1 and flat[len(flat) - 1 - trailing].punct:
        trailing += 1
    if trailing and isinstance(out, Node):
        tail = tuple(out.children[-trailing:])
        already = len(out.children) >= trailing and all(isinstance(c, Leaf) for c in tail)
        if not already:
            n = len(flat)
            rest = _rebuild(out, lambda i, lf: [] if i >= n - trailing else [lf])
            if isinstance(rest, Node):
                moved = tuple(Leaf(p.term) for p in flat[n - trailing:])
                out = Node(rest.label, rest.children + moved)
    return out


# -- nominal restructuring -------------------------------------------------

def _is_genitive(t: Node, tag_map, genitive_tags) -> bool:
    morph = t.children[0].terminal.morph
    if morph is None:
        return True  # adjacency heuristic: nominal directly before ADJ
    return morph.mapped_xpos(tag_map)[-1] in genitive_tags


def _group_adjp(items: list[Tree], tag_map, genitive_tags) -> list[Tree]:
    out: list[Tree] = []
    i = 0
    while i < len(items):
        a = items[i]
        if (i + 1 < len(items) and _upos(a) in NOMINAL and _upos(items[i + 1]) == "ADJ"
                and _is_genitive(a, tag_map, genitive_tags)):
            out.append(Node(ADJP, (a, items[i + 1])))
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def _compound(ns: Sequence[Tree], branching: Branching) -> Node:
    if branching is Branching.LEFT:
        acc = Node(NML, (ns[0], ns[1]))
        for n in ns[2:]:
            acc = Node(NML, (acc, n))
    else:
        acc = Node(NML, (ns[-2], ns[-1]))
        for n in reversed(ns[:-2]):
            acc = Node(NML, (n, acc))
    return acc


def _trailing(items: Sequence[Tree], pred) -> int:
    k = 0
    while k < len(items) and pred(items[len(items) - 1 - k]):
        k += 1
    return k


def _group_np_run(run: list[Tree], rules: NmlRuleSet, tag_map, genitive_tags) -> list[Tree]:
    if len(run) < 2:
        return run
    n_names = _trailing(run, lambda t: _upos(t) == "PROPN")
    desc = run[:len(run) - n_names]
    if n_names and len(desc) >= 2 and _upos(desc[-1]) == "NOUN":
        # descriptive nominal + proper name: apposition
        items = _group_adjp(desc, tag_map, genitive_tags)
        k = _trailing(items, lambda t: _upos(t) in NOMINAL)
        mods, noms = items[:len(items) - k], items[len(items) - k:]
        group = noms[0] if len(noms) == 1 else _compound(noms, rules.compound_branching)
        names = Node(NP, tuple(run[len(desc):]))
        if rules.analysis is NmlAnalysis.NP_LEVEL_ADJ:
            return mods + [group, names]
        if mods:
            return [Node(NML, tuple(mods) + (group,)), names]
        return [group, names]

    items = _group_adjp(run, tag_map, genitive_tags)
    if _upos(items[-1]) not in NOMINAL:
        return items
    k = _trailing(items[:-1], lambda t: _upos(t) in NOMINAL)
    if k >= 2:
        start = len(items) - 1 - k
        items = items[:start] + [_compound(items[start:-1], rules.compound_branching), items[-1]]
    return items


def restructure_nominals(tree: Tree, rules: NmlRuleSet | None = None,
                         tag_map: Mapping[str, str] | None = None,
                         genitive_tags=frozenset({"JKG"})) -> Tree:
    """Make noun-phrase-internal modification explicit.

    Works on the trailing run of UPOS preterminals inside each NP:

    * a genitive nominal directly followed by an ADJ forms an ``AdjP``;
    * a descriptive nominal complex followed by proper names becomes
      ``NML`` + ``NP`` (apposition);
    * otherwise two or more nominals before the head noun form an ``NML``
      compound, nested by ``rules.compound_branching``.

    With ``NmlAnalysis.FLAT`` the tree is returned unchanged.
    """
    rules = rules or NmlRuleSet()
    if rules.analysis is NmlAnalysis.FLAT:
        return tree
    tag_map = tag_map or {}

    def go(t: Tree) -> Tree:
        if isinstance(t, Leaf) or t.is_preterminal:
            return t
        kids = [go(c) for c in t.children]
        if t.label.base == "NP":
            k = _trailing(kids, lambda c: _upos(c) is not None)
            kids = kids[:len(kids) - k] + _group_np_run(kids[len(kids) - k:], rules,
                                                        tag_map, genitive_tags)
        return Node(t.label, tuple(kids))

    return go(tree)


# -- pipeline --------------------------------------------------------------

def _has_nulls(tree: Tree, patterns) -> bool:
    return any(lf.terminal.is_null or is_null_surface(lf.surface, patterns)
               for lf in iter_leaves(tree))


def _run(name: str, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except TreebankError as exc:
        raise PassError(name, exc) from exc
    except ValueError as exc:
        raise PassError(name, exc) from exc


def normalize_pipeline(tree: Tree, dialect: Dialect | str,
                       config: NormalizeConfig | None = None,
                       raw_text: str | None = None) -> Tree:
    """Bring a source-dialect tree to the normalized eojeol representation.

    Trees that already satisfy the normalized schema are returned as they
    are. Failures surface as :class:`PassError` naming the pass.
    """
    if isinstance(dialect, str):
        dialect = Dialect.from_name(dialect)
    cfg = config or NormalizeConfig()
    if not validate_dialect(tree, Dialect.NORMALIZED, null_patterns=cfg.null_patterns):
        return tree
    if dialect is Dialect.NORMALIZED:
        raise PassError("validate", NotNormalized("tree does not follow the normalized schema"))

    tag_map = cfg.tag_map_for(dialect)
    if dialect is Dialect.KAIST:
        tree = _run("reattach_functional", reattach_functional, tree, raw_text, cfg)
        raw_text = None
    if dialect is Dialect.PENN or _has_nulls(tree, cfg.null_patterns):
        tree = _run("strip_nulls", strip_nulls, tree, cfg)
    tree = _run("align_eojeol", align_eojeol, tree, raw_text, cfg, dialect)
    tree = _run("debinarize", debinarize, tree, cfg, dialect)
    tree = _run("label_terminals", label_terminals, tree, cfg.upos_table, tag_map)
    tree = _run("restructure_nominals", restructure_nominals, tree, cfg.nml_rules,
                tag_map, cfg.genitive_tags)
    problems = validate_dialect(tree, Dialect.NORMALIZED, null_patterns=cfg.null_patterns)
    if problems:
        raise PassError("validate", NotNormalized("; ".join(map(str, problems))))
    return tree
