"""Command-line driver: ``eojeolbank {convert,normalize,validate,stats}``.

Sentences are processed independently (optionally in worker processes)
and written in input order, so output never depends on ``--jobs``.

Exit status: 0 clean, 1 violations found or sentences skipped, 2 fatal
configuration or I/O error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import partial
from pathlib import Path
from typing import Sequence

from .bracketed import (BracketedDocument, BracketedTree, normalize_chars,
                        parse_bracketed, serialize_bracketed)
from .depconvert import (HeadRules, LabelMap, default_head_rules,
                         default_label_map, emit_dependencies, to_dependency)
from .errors import BracketParseError, ConfigError, TreebankError
from .jointfmt import emit_joint, parse_joint, read_sentence, split_blocks
from .model import Dialect, Tree, Violation, validate_dialect
from .normalize import (NormalizeConfig, load_normalize_config,
                        normalize_pipeline)
from .upos import UposTable, load_tag_map
from .validate import CorpusStats, check_normalized, format_violations

log = logging.getLogger("eojeolbank")

ENV_CONFIG_DIR = "EOJEOLBANK_CONFIG_DIR"
COMMANDS = ("convert", "normalize", "validate", "stats")
SOURCES = ("sejong", "penn", "kaist", "normalized", "joint")
TARGETS = ("bracketed", "joint", "deps")

EXIT_OK, EXIT_VIOLATIONS, EXIT_FATAL = 0, 1, 2

_ID_TAIL = re.compile(r"-\d+$")


class FatalError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    command: str
    from_dialect: str | None = None
    to_format: str | None = None
    inputs: tuple[str, ...] = ()
    out: str | None = None
    config: str | None = None
    upos_table: str | None = None
    tag_map: str | None = None
    head_rules: str | None = None
    label_map: str | None = None
    raw_text: str | None = None
    jobs: int = 1
    strict: bool = False
    report: str = "text"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.command == "convert" and (not self.from_dialect or not self.to_format):
            raise ConfigError("convert needs --from and --to")


@dataclass(frozen=True)
class Settings:
    """Everything a worker needs; must stay picklable."""

    command: str
    source: str
    target: str
    normalize: NormalizeConfig
    head_rules: HeadRules
    label_map: LabelMap
    strict: bool


@dataclass(frozen=True)
class Item:
    index: int
    sent_id: str
    tree: Tree | None = None
    block: str | None = None
    text: str | None = None


@dataclass(frozen=True)
class Result:
    index: int
    sent_id: str
    output: str = ""
    warnings: tuple[str, ...] = ()
    error: str | None = None
    violations: tuple[Violation, ...] = ()
    stats: CorpusStats | None = None


def _config_path(explicit: str | None, name: str) -> Path | None:
    if explicit:
        return Path(explicit)
    base = os.environ.get(ENV_CONFIG_DIR)
    if base and (Path(base) / name).is_file():
        return Path(base) / name
    return None


def load_settings(cfg: CliConfig) -> Settings:
    source = cfg.from_dialect or ("joint" if cfg.command in ("validate", "stats") else "sejong")
    if source not in SOURCES:
        raise ConfigError(f"unknown source {source!r}")
    target = cfg.to_format or "bracketed"
    if target not in TARGETS:
        raise ConfigError(f"unknown target {target!r}")

    ncfg = NormalizeConfig()
    path = _config_path(cfg.config, "normalize.cfg")
    if path:
        ncfg = load_normalize_config(path)
    path = _config_path(cfg.upos_table, "upos_table.tsv")
    if path:
        ncfg = replace(ncfg, upos_table=UposTable.load(path))
    if source in ("sejong", "penn", "kaist"):
        dialect = Dialect.from_name(source)
        path = _config_path(cfg.tag_map, f"{source}_tagmap.tsv")
        if path:
            ncfg = replace(ncfg, tag_maps={**ncfg.tag_maps, dialect: load_tag_map(path)})
    elif cfg.tag_map:
        raise ConfigError("--tag-map applies to sejong, penn or kaist input only")
    path = _config_path(cfg.head_rules, "head_rules.tsv")
    rules = HeadRules.load(path) if path else default_head_rules()
    path = _config_path(cfg.label_map, "label_map.tsv")
    labels = LabelMap.load(path) if path else default_label_map()
    return Settings(cfg.command, source, target, ncfg, rules, labels, cfg.strict)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def read_items(cfg: CliConfig, settings: Settings) -> list[Item]:
    inputs = cfg.inputs or ("-",)
    items: list[Item] = []
    for path in inputs:
        text = _read(path)
        stem = "stdin" if path == "-" else Path(path).stem
        if settings.source == "joint":
            for n, block in enumerate(split_blocks(text), 1):
                items.append(Item(len(items), f"{stem}#{n}", block=block))
            continue
        ncfg = settings.normalize
        try:
            doc = parse_bracketed(text, settings.source, null_patterns=ncfg.null_patterns,
                                  char_map=ncfg.char_map)
        except BracketParseError as exc:
            raise FatalError(f"{path}: {exc}") from exc
        for n, entry in enumerate(doc, 1):
            sid = entry.sent_id or f"{stem}.{n}"
            items.append(Item(len(items), sid, tree=entry.tree, text=entry.text))

    if cfg.raw_text:
        lines = _read(cfg.raw_text).splitlines()
        while lines and not lines[-1].strip():
            lines.pop()
        if len(lines) != len(items):
            raise FatalError(f"{cfg.raw_text}: {len(lines)} lines for {len(items)} sentences")
        items = [replace(it, text=line) for it, line in zip(items, lines)]
    return items


def _clean_text(text: str | None, ncfg: NormalizeConfig) -> str | None:
    if text is None:
        return None
    return " ".join(normalize_chars(text, ncfg.char_map).split())


def _normalized(settings: Settings, item: Item):
    """(sent_id, tree, text, id_base) for one input sentence."""
    if item.block is not None:
        sent, tree = parse_joint(item.block)
        return sent.sent_id, tree, sent.text, sent.rows[0].id
    text = _clean_text(item.text, settings.normalize)
    tree = normalize_pipeline(item.tree, settings.source, settings.normalize, raw_text=text)
    id_base = item.sent_id if _ID_TAIL.search(item.sent_id) else None
    return item.sent_id, tree, text, id_base


def _convert(settings: Settings, item: Item) -> Result:
    sid, tree, text, id_base = _normalized(settings, item)
    sent = emit_joint(tree, sid, id_base, text)
    warnings = tuple(str(v) for v in check_normalized(sent, tree,
                                                      null_patterns=settings.normalize.null_patterns))
    if warnings and settings.strict:
        return Result(item.index, sid, error="; ".join(warnings))
    if settings.target == "joint":
        out = sent.to_text()
    elif settings.target == "deps":
        out = emit_dependencies(to_dependency(tree, settings.head_rules, settings.label_map),
                                sid, sent.text)
    else:
        out = serialize_bracketed(BracketedDocument((BracketedTree(tree, sid, sent.text),)))
    return Result(item.index, sid, out, warnings)


def _validate(settings: Settings, item: Item) -> Result:
    ncfg = settings.normalize
    if item.block is not None:
        sent = read_sentence(item.block)
        found = check_normalized(sent, null_patterns=ncfg.null_patterns)
        return Result(item.index, sent.sent_id, violations=tuple(found))
    found = validate_dialect(item.tree, Dialect.from_name(settings.source), sent_id=item.sent_id,
                             null_patterns=ncfg.null_patterns)
    return Result(item.index, item.sent_id, violations=tuple(found))


def _stats(settings: Settings, item: Item) -> Result:
    if item.block is not None:
        sent, tree = parse_joint(item.block)
        sid = sent.sent_id
    else:
        sid, tree = item.sent_id, item.tree
    stats = CorpusStats()
    stats.add_tree(tree)
    return Result(item.index, sid, stats=stats)


_HANDLERS = {"convert": _convert, "normalize": _convert, "validate": _validate, "stats": _stats}


def process_item(settings: Settings, item: Item) -> Result:
    try:
        return _HANDLERS[settings.command](settings, item)
    except (TreebankError, ValueError) as exc:
        return Result(item.index, item.sent_id, error=f"{type(exc).__name__}: {exc}")


def _map(fn, items: Sequence[Item], jobs: int) -> list[Result]:
    if jobs <= 1 or len(items) < 2:
        return [fn(it) for it in items]
    chunk = max(1, len(items) // (jobs * 4))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def run(cfg: CliConfig) -> int:
    try:
        settings = load_settings(cfg)
        items = read_items(cfg, settings)
    except (ConfigError, FatalError, OSError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_FATAL

    results = _map(partial(process_item, settings), items, max(1, cfg.jobs))
    status = EXIT_OK
    for res in results:
        for msg in res.warnings:
            log.warning("%s: %s", res.sent_id, msg)
        if res.error is not None:
            log.error("%s: skipped: %s", res.sent_id, res.error)
            status = EXIT_VIOLATIONS
            if cfg.strict:
                return status
    ok = [r for r in results if r.error is None]

    if cfg.command in ("convert", "normalize"):
        sep = "" if settings.target == "bracketed" else "\n"
        text = sep.join(r.output for r in ok)
    elif cfg.command == "validate":
        violations = [v for r in ok for v in r.violations]
        text = format_violations(violations, cfg.report)
        if violations:
            status = EXIT_VIOLATIONS
        log.info("%d sentence(s), %d violation(s)", len(results), len(violations))
    else:
        total = CorpusStats()
        for r in ok:
            total = total + r.stats
        text = json.dumps(total.to_dict(), ensure_ascii=False, indent=2, sort_keys=True) + "\n"

    try:
        _write(cfg.out, text)
    except OSError as exc:
        log.error("%s", exc)
        return EXIT_FATAL
    return status


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("inputs", nargs="*", help="input files ('-' or none for stdin)")
    common.add_argument("--from", dest="from_dialect", choices=SOURCES)
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--config", help="normalization settings file")
    common.add_argument("--upos-table", help="XPOS to UPOS rule table (TSV)")
    common.add_argument("--tag-map", help="source tagset to Sejong tag map (TSV)")
    common.add_argument("--head-rules", help="head rules for dependency output (TSV)")
    common.add_argument("--label-map", help="function tag to dependency label map (TSV)")
    common.add_argument("--raw-text", help="raw sentences, one per line, in input order")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--strict", action="store_true",
                        help="stop at the first failing sentence; warnings count as errors")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="eojeolbank",
        description="Normalize Korean treebanks to eojeol-based constituency trees.",
        epilog=f"Default config files are looked up in ${ENV_CONFIG_DIR} when set.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("convert", parents=[common], help="normalize and write another format")
    p.add_argument("--to", dest="to_format", choices=TARGETS, required=True)
    p = sub.add_parser("normalize", parents=[common], help="normalize to bracketed trees")
    p.add_argument("--to", dest="to_format", choices=TARGETS, default="bracketed")
    p = sub.add_parser("validate", parents=[common], help="report invariant violations")
    p.add_argument("--report", choices=("text", "tsv"), default="text")
    sub.add_parser("stats", parents=[common], help="corpus statistics as JSON")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        cfg = CliConfig(
            command=args.command,
            from_dialect=args.from_dialect,
            to_format=getattr(args, "to_format", None),
            inputs=tuple(args.inputs),
            out=args.out,
            config=args.config,
            upos_table=args.upos_table,
            tag_map=args.tag_map,
            head_rules=args.head_rules,
            label_map=args.label_map,
            raw_text=args.raw_text,
            jobs=args.jobs,
            strict=args.strict,
            report=getattr(args, "report", "text"),
        )
    except ConfigError as exc:
        log.error("%s", exc)
        return EXIT_FATAL
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
