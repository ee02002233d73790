"""Normalization, conversion and validation for Korean constituency treebanks.

Sejong, Penn Korean and Kaist trees are brought to a shared representation
whose terminals are eojeol (space-delimited words) under UPOS preterminals,
with morphological segmentation kept as a per-token attribute.
"""
from .bracketed import (BracketedDocument, BracketedTree, parse_bracketed,
                        parse_tree, serialize_bracketed, tree_to_string)
from .depconvert import (DepGraph, HeadRules, LabelMap, emit_dependencies,
                         find_head, read_dependencies, to_dependency)
from .errors import TreebankError
from .jointfmt import (JointSentence, TokenRow, detokenize, emit_joint,
                       parse_joint, read_joint, serialize_joint)
from .model import (CategoryLabel, Dialect, Leaf, Node, Terminal, Violation,
                    ViolationCode, structure, validate_dialect, yield_terminals)
from .morph import MorphSeg, parse_morphseg
from .normalize import (NmlAnalysis, NmlRuleSet, NormalizeConfig, debinarize,
                        normalize_pipeline, reattach_functional,
                        restructure_nominals, strip_nulls)
from .upos import UposTable, default_upos_table, label_terminals, map_upos
from .validate import CorpusStats, check_normalized, corpus_stats

__version__ = "0.1.0"

__all__ = [
    "BracketedDocument", "BracketedTree", "CategoryLabel", "CorpusStats", "DepGraph",
    "Dialect", "HeadRules", "JointSentence", "LabelMap", "Leaf", "MorphSeg",
    "NmlAnalysis", "NmlRuleSet", "Node", "NormalizeConfig", "Terminal", "TokenRow",
    "TreebankError", "UposTable", "Violation", "ViolationCode", "check_normalized",
    "corpus_stats", "debinarize", "default_upos_table", "detokenize", "emit_dependencies",
    "emit_joint", "find_head", "label_terminals", "map_upos", "normalize_pipeline",
    "parse_bracketed", "parse_joint", "parse_morphseg", "parse_tree", "read_dependencies",
    "read_joint", "reattach_functional", "restructure_nominals", "serialize_bracketed",
    "serialize_joint", "strip_nulls", "structure", "to_dependency", "tree_to_string",
    "validate_dialect", "yield_terminals",
]
