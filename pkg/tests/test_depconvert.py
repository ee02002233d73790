import pytest
from hypothesis import given, settings

from dep_oracle import percolate
from treegen import normalized_trees

from eojeolbank.depconvert import (DepGraph, DepNode, HeadRules, LabelMap,
                                   default_head_rules, emit_dependencies,
                                   find_head, read_dependencies, to_dependency)
from eojeolbank.errors import AllPunct, ConfigError
from eojeolbank.jointfmt import parse_joint
from eojeolbank.model import leaf, node, structure, surfaces


def _pre(upos, surface):
    return node(upos, leaf(surface, upos=upos))


def test_find_head_examples():
    s = node("S", node("NP-SBJ", _pre("NOUN", "a")), node("VP", _pre("VERB", "b")), _pre("PUNCT", "."))
    assert find_head(s) == 1
    assert find_head(node("NP", _pre("NOUN", "a"))) == 0
    np = node("NP", node("NML", _pre("NOUN", "a"), _pre("NOUN", "b")),
              node("NP", _pre("PROPN", "c"), _pre("PROPN", "d")))
    assert find_head(np) == 1
    assert find_head(node("X", _pre("PUNCT", "."), _pre("PUNCT", "!"))) == 1
    assert find_head(node("AdjP", _pre("NOUN", "a"), _pre("ADJ", "b"), _pre("PUNCT", ","))) == 1


def test_leftmost_rules():
    rules = HeadRules.from_tsv("*\tleftmost\nVP\trightmost\tVERB\n")
    assert find_head(node("X", _pre("NOUN", "a"), _pre("NOUN", "b")), rules) == 0
    assert find_head(node("VP", _pre("VERB", "a"), _pre("NOUN", "b")), rules) == 0


@pytest.mark.parametrize("text", ["NP\tsideways\tNOUN\n", "NP\trightmost\t\n", "NP\n"])
def test_bad_head_rules(text):
    with pytest.raises(ConfigError):
        HeadRules.from_tsv(text)


def test_figure6_graph(fig5_text):
    _, tree = parse_joint(fig5_text)
    g = to_dependency(tree)
    words = [n.surface for n in g.nodes]
    assert words == surfaces(tree)
    head_of = {words[d - 1]: (words[h - 1], lab) for d, h, lab in g.arcs()}
    assert words[g.root - 1] == "나섰다"
    assert head_of["웅가로가"] == ("나섰다", "sbj")
    assert head_of["디자이너로"] == ("나섰다", "ajt")
    assert head_of["."] == ("나섰다", "punct")
    assert head_of["엠마누엘"] == ("웅가로가", "dep")
    assert head_of["디자이너"] == ("웅가로가", "dep")
    assert head_of["프랑스의"] == ("세계적인", "dep")
    assert head_of["세계적인"] == ("디자이너", "dep")
    assert head_of["실내"] == ("장식용", "dep")
    assert head_of["직물"] == ("디자이너로", "dep")
    assert g.is_projective()
    assert (list(g.heads), list(g.labels)) == percolate(structure(tree))


def test_single_leaf_graph():
    g = to_dependency(node("S", _pre("NOUN", "의상")))
    assert g.heads == (0,) and g.labels == ("root",) and g.arcs() == []
    text = emit_dependencies(g, "s")
    assert text.splitlines()[-1].split("\t")[6:8] == ["0", "root"]


def test_all_punct():
    with pytest.raises(AllPunct):
        to_dependency(node("S", _pre("PUNCT", ".")))


def test_custom_labels():
    labels = LabelMap.from_tsv("SBJ\tnsubj\n_none\tx\n")
    t = node("S", node("NP-SBJ", _pre("NOUN", "a")), node("NP-OBJ", _pre("NOUN", "b")),
             node("VP", _pre("VERB", "c")))
    g = to_dependency(t, labels=labels)
    assert g.labels == ("nsubj", "obj", "root")
    assert to_dependency(node("S", _pre("NOUN", "a"), _pre("NOUN", "b"))).labels == ("dep", "root")


def test_emit_and_read(fig5_text):
    _, tree = parse_joint(fig5_text)
    g = to_dependency(tree)
    text = emit_dependencies(g, "BGAA0001-10012")
    rows = [line.split("\t") for line in text.splitlines() if not line.startswith("#")]
    assert len(rows) == 12 and all(len(r) == 10 for r in rows)
    assert rows[-1][1:8] == [".", "_", "PUNCT", "./SF", "_", "11", "punct"]
    assert read_dependencies(text) == [("BGAA0001-10012", g)]


@pytest.mark.parametrize("heads", [(0, 0), (2, 1), (0, 3), (1, 2)])
def test_graph_invariants(heads):
    nodes = (DepNode(1, "a", None, None), DepNode(2, "b", None, None))
    with pytest.raises(ValueError):
        DepGraph(nodes, heads, ("x", "y"))


def test_non_projective_detected():
    nodes = tuple(DepNode(i, str(i), None, None) for i in range(1, 5))
    g = DepGraph(nodes, (3, 0, 2, 1), ("a", "root", "b", "c"))
    assert not g.is_projective()


@settings(max_examples=200, deadline=None)
@given(normalized_trees)
def test_graph_properties(tree):
    g = to_dependency(tree)
    assert g.heads.count(0) == 1
    assert g.is_projective()
    assert [n.surface for n in g.nodes] == surfaces(tree)
    assert to_dependency(tree) == g
    assert (list(g.heads), list(g.labels)) == percolate(structure(tree))


def test_default_rules_shape():
    rules = default_head_rules()
    assert rules.default_direction == "rightmost"
    assert rules.directives["NP"].priorities == ("NOUN", "PROPN", "NP")
