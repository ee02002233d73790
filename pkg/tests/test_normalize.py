import pytest
from hypothesis import given, settings

from treegen import null_trees, penn_trees, sejong_trees

from eojeolbank.bracketed import parse_bracketed, parse_tree
from eojeolbank.errors import (ConfigError, EmptyTree, OrphanFunctional,
                               PassError, YieldMismatch)
from eojeolbank.model import (Dialect, Leaf, Node, iter_leaves,
                              iter_nodes, leaf, node, structure, surfaces,
                              validate_dialect)
from eojeolbank.morph import parse_morphseg
from eojeolbank.normalize import (Branching, NmlAnalysis, NmlRuleSet,
                                  NormalizeConfig, align_eojeol, debinarize,
                                  load_normalize_config, normalize_pipeline,
                                  parse_normalize_config, reattach_functional,
                                  restructure_nominals, strip_nulls)
from eojeolbank.upos import data_text, label_terminals

PENN_POS = NormalizeConfig().pos_labels(Dialect.PENN)


# -- debinarize ---------------------------------------------------------------

def naive_debinarize(tree, dissolve=frozenset({"MOD"}), pos_labels=frozenset()):
    """Splice one eligible child at a time, anywhere, until none is left."""

    def eligible(parent, child):
        if not isinstance(child, Node):
            return False
        p, c = parent.label, child.label
        if p.base == c.base and (not c.function_tags or c.function_tags == p.function_tags):
            return True
        if child.is_preterminal:
            return bool(set(c.function_tags) & dissolve) or (
                not c.function_tags and c.base in pos_labels)
        return False

    def step(t):
        if isinstance(t, Leaf):
            return t, False
        for i, c in enumerate(t.children):
            if eligible(t, c):
                kids = t.children[:i] + c.children + t.children[i + 1:]
                return Node(t.label, kids), True
        for i, c in enumerate(t.children):
            new, changed = step(c)
            if changed:
                return Node(t.label, t.children[:i] + (new,) + t.children[i + 1:]), True
        return t, False

    changed = True
    while changed:
        tree, changed = step(tree)
    return tree


def test_debinarize_same_category_chain():
    t = parse_tree("(NP (NP (NP a) (NP b)) (NP c))", "sejong")
    assert structure(debinarize(t)) == ("NP", "a", "b", "c")


def test_debinarize_tags():
    t = parse_tree("(NP-SBJ (NP x) (NP-SBJ y) (NP-OBJ z))", "sejong")
    assert structure(debinarize(t)) == ("NP-SBJ", "x", "y", ("NP-OBJ", "z"))
    loose = NormalizeConfig(splice_requires_tag_match=False)
    assert structure(debinarize(t, loose)) == ("NP-SBJ", "x", "y", "z")


def test_debinarize_dissolves_modifier_and_pos_nodes():
    t = parse_tree("(NP (NP-MOD a) (VNP-MOD b) (AP-MOD (AP c) (AP d)))", "sejong")
    assert structure(debinarize(t)) == ("NP", "a", "b", ("AP-MOD", "c", "d"))
    penn = parse_tree("(VP (NP x) (VV y))", "penn")
    assert structure(debinarize(penn, dialect=Dialect.PENN)) == ("VP", ("NP", "x"), "y")
    assert structure(debinarize(penn)) == ("VP", ("NP", "x"), ("VV", "y"))


def test_debinarize_figure1(fig1):
    out = debinarize(fig1.tree)
    assert structure(out)[1] == ("NP-SBJ", *surfaces(out)[:6])


@settings(max_examples=200, deadline=None)
@given(sejong_trees)
def test_debinarize_matches_naive_oracle(tree):
    assert debinarize(tree) == naive_debinarize(tree)


@settings(max_examples=200, deadline=None)
@given(penn_trees)
def test_debinarize_matches_naive_oracle_penn(tree):
    ours = debinarize(tree, dialect=Dialect.PENN)
    assert ours == naive_debinarize(tree, pos_labels=PENN_POS)


@settings(max_examples=200, deadline=None)
@given(sejong_trees)
def test_debinarize_idempotent_and_yield_preserving(tree):
    once = debinarize(tree)
    assert debinarize(once) == once
    assert list(iter_leaves(once)) == list(iter_leaves(tree))


# -- strip_nulls --------------------------------------------------------------

def test_strip_nulls_figure2(fig2):
    out = strip_nulls(fig2.tree)
    assert len(surfaces(out)) == 16
    assert "*pro*" not in surfaces(out)
    labels = [str(n.label) for _, n in iter_nodes(out)]
    assert labels.count("NP-SBJ") == 1


def test_strip_nulls_only_nulls():
    with pytest.raises(EmptyTree):
        strip_nulls(parse_tree("(S (NP *pro*) (VP *T*))", "penn"))


def test_strip_nulls_custom_pattern():
    cfg = NormalizeConfig(null_patterns=(r"0",))
    assert surfaces(strip_nulls(parse_tree("(S (NP 0) x)", "penn"), cfg)) == ["x"]
    with pytest.raises(ConfigError):
        strip_nulls(parse_tree("(S x)", "penn"), NormalizeConfig(prune_empty=False))


@settings(max_examples=200, deadline=None)
@given(null_trees)
def test_strip_nulls_property(tree):
    out = strip_nulls(tree)
    assert not any(lf.terminal.is_null for lf in iter_leaves(out))
    kept = [lf.surface for lf in iter_leaves(tree) if not lf.terminal.is_null]
    assert surfaces(out) == kept


# -- reattach_functional ------------------------------------------------------

def test_reattach_figure3(fig3, fig3_raw):
    out = reattach_functional(fig3.tree, fig3_raw)
    assert " ".join(surfaces(out)[:-1]) + "." == fig3_raw
    labels = {str(n.label) for _, n in iter_nodes(out)}
    assert "AUXP" in labels and "+AUXP" not in labels
    assert not any(lf.terminal.is_functional for lf in iter_leaves(out))


def test_reattach_detects_wrong_raw_text(fig3):
    with pytest.raises(YieldMismatch):
        reattach_functional(fig3.tree, "하기야 짐승도 잘 가르치기만 하면 어느 정도는 순치될 수있다.")


def test_orphan_functional():
    with pytest.raises(OrphanFunctional):
        reattach_functional(parse_tree("(S +도/jxc (NP 짐승/ncn))", "kaist"))


def test_functional_without_tags_merges_surface():
    out = reattach_functional(parse_tree("(S (NP 짐승) +도)", "kaist"))
    assert surfaces(out) == ["짐승도"]


# -- align_eojeol -------------------------------------------------------------

def test_align_splits_fused_punctuation(fig1):
    out = align_eojeol(fig1.tree, fig1.text)
    assert surfaces(out)[-2:] == ["나섰다", "."]
    assert out.children[-1] == Leaf(out.children[-1].terminal)
    assert str(list(iter_leaves(out))[-2].terminal.morph) == "나서/VV+었/EP+다/EF"


def test_align_without_text_spells_from_forms(fig1):
    assert surfaces(align_eojeol(fig1.tree))[1] == "세계적인"
    assert surfaces(align_eojeol(fig1.tree))[-2] == "나서었다"


def test_align_leading_and_trailing_punctuation():
    t = parse_tree("(S (NP “/SS+그/NP+는/JX) (VP 가/VV+았/EP+다/EF+./SF+”/SS))", "sejong")
    out = align_eojeol(t, "“그는 갔다.”")
    assert surfaces(out) == ["“", "그는", "갔다", ".", "”"]


@pytest.mark.parametrize("raw", [
    "프랑스의 세계적인",
    "프랑스의 세계적인 의상 디자이너 엠마누엘 웅가로가 실내 장식용 직물 디자이너로 나섰다",
    "프랑스의 세계적인 의상 디자이너 엠마누엘 웅가로가 실내 장식용 직물 디자이너로 가섰다.",
])
def test_align_mismatch(fig1, raw):
    with pytest.raises(YieldMismatch):
        align_eojeol(fig1.tree, raw)


# -- restructure_nominals -----------------------------------------------------

def _pre(upos, surface, morph=None):
    return node(upos, leaf(surface, morph=parse_morphseg(morph) if morph else None, upos=upos))


def test_compound_branching():
    np = node("NP", _pre("NOUN", "a"), _pre("NOUN", "b"), _pre("NOUN", "c"), _pre("NOUN", "d"))
    left = restructure_nominals(np)
    assert structure(left) == ("NP", ("NML", ("NML", ("NOUN", "a"), ("NOUN", "b")), ("NOUN", "c")),
                               ("NOUN", "d"))
    right = restructure_nominals(np, NmlRuleSet(compound_branching=Branching.RIGHT))
    assert structure(right) == ("NP", ("NML", ("NOUN", "a"), ("NML", ("NOUN", "b"), ("NOUN", "c"))),
                                ("NOUN", "d"))


def test_two_nominals_stay_flat():
    np = node("NP", _pre("NOUN", "a"), _pre("NOUN", "b"))
    assert restructure_nominals(np) == np


def _subject():
    return node("NP-SBJ",
                _pre("PROPN", "프랑스의", "프랑스/NNP+의/JKG"),
                _pre("ADJ", "세계적인", "세계/NNG+적/XSN+이/VCP+ㄴ/ETM"),
                _pre("NOUN", "의상", "의상/NNG"), _pre("NOUN", "디자이너", "디자이너/NNG"),
                _pre("PROPN", "엠마누엘", "엠마누엘/NNP"), _pre("PROPN", "웅가로가", "웅가로/NNP+가/JKS"))


def test_apposition_analyses():
    six = restructure_nominals(_subject())
    assert [str(c.label) for c in six.children] == ["NML", "NP"]
    assert [str(c.label) for c in six.children[0].children] == ["AdjP", "NML"]
    adj = restructure_nominals(_subject(), NmlRuleSet(NmlAnalysis.NP_LEVEL_ADJ))
    assert [str(c.label) for c in adj.children] == ["AdjP", "NML", "NP"]
    assert restructure_nominals(_subject(), NmlRuleSet(NmlAnalysis.FLAT)) == _subject()


def test_adjp_needs_genitive():
    np = node("NP", _pre("NOUN", "학교", "학교/NNG"), _pre("ADJ", "큰", "크/VA+ㄴ/ETM"),
              _pre("NOUN", "집", "집/NNG"))
    assert restructure_nominals(np) == np


@settings(max_examples=200, deadline=None)
@given(sejong_trees)
def test_restructure_preserves_yield(tree):
    labelled = label_terminals(debinarize(align_eojeol(tree)))
    out = restructure_nominals(labelled)
    assert list(iter_leaves(out)) == list(iter_leaves(labelled))
    assert restructure_nominals(out) == out


# -- pipeline -----------------------------------------------------------------

def test_pipeline_figure1(fig1, fig6):
    out = normalize_pipeline(fig1.tree, "sejong", raw_text=fig1.text)
    assert structure(out) == structure(fig6.tree)
    assert validate_dialect(out, Dialect.NORMALIZED) == []


def test_pipeline_figure2(fig2):
    out = normalize_pipeline(fig2.tree, "penn")
    assert validate_dialect(out, Dialect.NORMALIZED) == []
    assert surfaces(out)[0] == "영국정부은"
    assert surfaces(out)[-1] == "."


def test_pipeline_figure3(fig3, fig3_raw):
    out = normalize_pipeline(fig3.tree, "kaist", raw_text=fig3_raw)
    assert [lf.terminal.upos for lf in iter_leaves(out)][-1] == "PUNCT"
    assert validate_dialect(out, Dialect.NORMALIZED) == []


def test_pipeline_leaves_normalized_trees_alone(fig6):
    assert normalize_pipeline(fig6.tree, "normalized") is fig6.tree


def test_pipeline_errors_name_the_pass(fig3):
    with pytest.raises(PassError) as info:
        normalize_pipeline(fig3.tree, "kaist", raw_text="전혀 다른 문장.")
    assert info.value.pass_name == "reattach_functional"
    with pytest.raises(PassError) as info:
        normalize_pipeline(parse_tree("(S (NP 의상))", "sejong"), "sejong")
    assert info.value.pass_name == "label_terminals"
    with pytest.raises(PassError) as info:
        normalize_pipeline(parse_tree("(S (NP 의상))"), "normalized")
    assert info.value.pass_name == "validate"


@settings(max_examples=100, deadline=None)
@given(sejong_trees)
def test_pipeline_idempotent_sejong(tree):
    out = normalize_pipeline(tree, "sejong")
    assert normalize_pipeline(out, "sejong") == out


@settings(max_examples=100, deadline=None)
@given(penn_trees)
def test_pipeline_idempotent_penn(tree):
    out = normalize_pipeline(tree, "penn")
    assert normalize_pipeline(out, "penn") == out
    assert validate_dialect(out, Dialect.NORMALIZED) == []


# -- config -------------------------------------------------------------------

def test_shipped_config_matches_defaults():
    assert parse_normalize_config(data_text("normalize.cfg")) == NormalizeConfig()


def test_config_file(tmp_path):
    path = tmp_path / "n.cfg"
    path.write_text("analysis = NpLevelAdj\ncompound_branching = Right\n"
                    "splice_requires_tag_match = no\n[nulls]\n\\*[A-Z]+\\*\n0\n")
    cfg = load_normalize_config(path)
    assert cfg.nml_rules == NmlRuleSet(NmlAnalysis.NP_LEVEL_ADJ, Branching.RIGHT)
    assert not cfg.splice_requires_tag_match
    assert cfg.null_patterns == (r"\*[A-Z]+\*", "0")


@pytest.mark.parametrize("text", [
    "analysis = Tall\n", "colour = red\n", "prune_empty = maybe\n", "just words\n", "[other]\n",
])
def test_bad_config(text):
    with pytest.raises(ConfigError):
        parse_normalize_config(text)


def test_config_needs_null_patterns():
    with pytest.raises(ConfigError):
        NormalizeConfig(null_patterns=())


def test_modifier_unary_under_root_dissolves():
    doc = parse_bracketed("(S (NP-MOD x))", "sejong")
    assert structure(debinarize(doc.trees[0].tree)) == ("S", "x")
