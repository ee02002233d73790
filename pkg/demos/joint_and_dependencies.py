"""Read a six-column joint file, rebuild its tree, and project dependencies.

Run from the repository root:  python3 demos/joint_and_dependencies.py
"""
from pathlib import Path

from eojeolbank.depconvert import emit_dependencies, to_dependency
from eojeolbank.jointfmt import parse_joint
from eojeolbank.validate import check_normalized, corpus_stats

path = Path(__file__).resolve().parent.parent / "tests" / "data" / "fig5_joint.txt"
sent, tree = parse_joint(path.read_text("utf-8"))

print("violations:", check_normalized(sent, tree) or "none")
print("stats:", corpus_stats([tree]).to_dict())

graph = to_dependency(tree)
print(emit_dependencies(graph, sent.sent_id, sent.text))
for dep, head, label in graph.arcs():
    print(f"{graph.nodes[dep - 1].surface:>8} --{label}--> {graph.nodes[head - 1].surface}")
print("projective:", graph.is_projective())
