"""Normalize the three source-treebank samples and print the results.

Run from the repository root:  python3 demos/normalize_figures.py
"""
from pathlib import Path

from eojeolbank import emit_joint, normalize_pipeline, parse_bracketed
from eojeolbank.bracketed import BracketedDocument, BracketedTree, serialize_bracketed

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"


def show(title, tree, sent_id, text=None):
    print(f"== {title}")
    doc = BracketedDocument((BracketedTree(tree, sent_id, text),))
    print(serialize_bracketed(doc))


sejong = parse_bracketed((DATA / "fig1_sejong.txt").read_text("utf-8"), "sejong").trees[0]
penn = parse_bracketed((DATA / "fig2_penn.txt").read_text("utf-8"), "penn").trees[0]
kaist = parse_bracketed((DATA / "fig3_kaist.txt").read_text("utf-8"), "kaist").trees[0]
raw = (DATA / "fig3_raw.txt").read_text("utf-8").strip()

tree = normalize_pipeline(sejong.tree, "sejong", raw_text=sejong.text)
show("Sejong", tree, sejong.sent_id, sejong.text)
print(emit_joint(tree, sejong.sent_id, sejong.sent_id, sejong.text).to_text())

# Penn: null elements go, eojeol surfaces are rebuilt from their morphemes
show("Penn", normalize_pipeline(penn.tree, "penn"), "penn-1")

# Kaist needs the raw sentence to put functional morphemes back on their hosts
show("Kaist", normalize_pipeline(kaist.tree, "kaist", raw_text=raw), "kaist-1", raw)
