"""Command-line entry point.

Subcommands: convert, stats, score, baseline, populate, compile-gold,
eval-kg. Exit codes: 0 success, 1 usage error, 2 data/validation error
(violations are printed to stderr).

Corpus formats are detected from the path (directory = brat, .jsonl = jsonl,
anything else = conll columns) and can be forced with --format. A column
file's sidecar token table is looked up at ``<path>.tokens``. Option values
resolve as: command-line flag, then config file (``key = value`` lines,
``--config``), then built-in default.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import brat, conll, jsonl
from .baseline import resolve_corpus
from .errors import ParseError, ValidationError
from .goldkg import (
    attach_entity_links,
    compile_gold,
    evaluate_population,
    read_entity_links,
    read_gold_jsonl,
    write_gold_jsonl,
)
from .kgpop import (
    CollapseStrategy,
    DomainScope,
    export_kg_jsonl,
    export_ntriples,
    kg_stats,
    populate,
)
from .metrics import corpus_partition, score
from .model import Corpus, corpus_stats, validate_corpus
from .normalize import load_lemma_exceptions, set_default_lemma_exceptions

__all__ = ["main"]

_STRATEGY = {"cross": DomainScope.CROSS_DOMAIN, "in": DomainScope.IN_DOMAIN}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _load_config(path: str | None) -> dict[str, str]:
    if not path:
        return {}
    cfg: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text("utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError(f"config line is not 'key = value': {raw!r}", lineno)
        key, _, value = line.partition("=")
        cfg[key.strip()] = value.strip()
    return cfg


def _effective(args, cfg: dict[str, str], name: str, default=None):
    value = getattr(args, name, None)
    if value is not None:
        return value
    return cfg.get(name, default)


def _detect_format(path: Path, for_output: bool = False) -> str:
    if path.is_dir() or (for_output and not path.suffix):
        return "brat"
    if path.suffix == ".jsonl":
        return "jsonl"
    return "conll"


def _read_corpus(path_s: str, fmt: str | None) -> Corpus:
    path = Path(path_s)
    if not path.exists():
        raise ParseError(f"no such file or directory: {path}")
    fmt = fmt or _detect_format(path)
    if fmt == "brat":
        return brat.read_brat_dir(path)
    if fmt == "jsonl":
        return jsonl.read_jsonl(path.read_text("utf-8"))
    if fmt == "conll":
        tokens_path = Path(str(path) + ".tokens")
        table = tokens_path.read_text("utf-8") if tokens_path.exists() else None
        return conll.read_coref_columns(path.read_text("utf-8"), table)
    raise ValueError(f"unknown corpus format {fmt!r}")


def _write_corpus(corpus: Corpus, path_s: str, fmt: str | None) -> None:
    path = Path(path_s)
    fmt = fmt or _detect_format(path, for_output=True)
    if fmt == "brat":
        brat.write_brat_dir(corpus, path)
        return
    if fmt == "jsonl":
        path.write_text(jsonl.write_jsonl(corpus), "utf-8")
        return
    if fmt == "conll":
        columns, table = conll.write_coref_columns(corpus)
        path.write_text(columns, "utf-8")
        Path(str(path) + ".tokens").write_text(table, "utf-8")
        return
    raise ValueError(f"unknown corpus format {fmt!r}")


def _load_validated(path: str, fmt: str | None) -> Corpus:
    corpus = _read_corpus(path, fmt)
    violations = validate_corpus(corpus)
    if violations:
        raise ValidationError(violations)
    return corpus


def _emit(text: str, out: str | None) -> None:
    if out and out != "-":
        Path(out).write_text(text, "utf-8")
    else:
        sys.stdout.write(text)


def build_parser() -> _Parser:
    parser = _Parser(prog="corefkg", description=__doc__)
    parser.add_argument("--config", help="key = value configuration file")
    parser.add_argument("--format", choices=["brat", "conll", "jsonl"],
                        help="corpus format (default: detect from path)")
    parser.add_argument("--jobs", type=int, help="per-document worker pool size")
    parser.add_argument("--seed", type=int,
                        help="random seed (reserved for test-data generation)")
    parser.add_argument("--lemma-exceptions", dest="lemma_exceptions",
                        help="two-column TSV overriding the plural/singular table")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("convert", help="convert a corpus between formats")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--from", dest="from_format", choices=["brat", "conll", "jsonl"])
    p.add_argument("--to", dest="to_format", choices=["brat", "conll", "jsonl"])

    p = sub.add_parser("stats", help="corpus statistics per concept type or domain")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--group-by", choices=["concept_type", "domain"], default="concept_type")

    p = sub.add_parser("score", help="score a response corpus against a key corpus")
    p.add_argument("--key", required=True)
    p.add_argument("--response", required=True)
    p.add_argument("--json-out", help="write the JSON report here instead of stdout")
    p.add_argument("--ceafe-drop-singletons", action="store_true",
                   help="diagnostic CEAFe variant that ignores singleton response parts")

    p = sub.add_parser("baseline", help="run the string-match coreference baseline")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)

    p = sub.add_parser("populate", help="populate a knowledge graph from a corpus")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--strategy", choices=["cross", "in"], required=True)
    p.add_argument("--no-coref", action="store_true",
                   help="treat every mention as a singleton cluster")
    p.add_argument("--gold", action="store_true",
                   help="annotations are gold: bypass the coref-only cluster filter")
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--format", dest="kg_format", choices=["jsonl", "ntriples"],
                   default="jsonl", help="export format of the populated graph")

    p = sub.add_parser("compile-gold", help="compile the gold KG from entity links")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--links", help="entity links TSV (doc_id, start, end, type, entity)")
    p.add_argument("--skip-unmatched-links", action="store_true")
    p.add_argument("--out", dest="output", default="-")

    p = sub.add_parser("eval-kg", help="evaluate a population strategy against a gold KG")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--strategy", choices=["cross", "in"], required=True)
    p.add_argument("--no-coref", action="store_true")
    p.add_argument("--json-out")
    p.add_argument("--ceafe-drop-singletons", action="store_true")
    return parser


def _cmd_convert(args, cfg) -> int:
    fmt = _effective(args, cfg, "format")
    corpus = _load_validated(args.input, args.from_format or fmt)
    _write_corpus(corpus, args.output, args.to_format or fmt)
    return 0


def _cmd_stats(args, cfg) -> int:
    corpus = _load_validated(args.input, _effective(args, cfg, "format"))
    sys.stdout.write(corpus_stats(corpus, args.group_by).to_tsv())
    return 0


def _cmd_score(args, cfg) -> int:
    fmt = _effective(args, cfg, "format")
    key = corpus_partition(_load_validated(args.key, fmt))
    response = corpus_partition(_load_validated(args.response, fmt))
    report = score(
        key, response,
        ceafe_drop_singleton_response_parts=args.ceafe_drop_singletons,
    )
    sys.stdout.write(report.to_table())
    payload = json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    if args.json_out:
        _emit(payload, args.json_out)
    else:
        sys.stdout.write(payload)
    return 0


def _cmd_baseline(args, cfg) -> int:
    fmt = _effective(args, cfg, "format")
    corpus = _load_validated(args.input, fmt)
    jobs = int(_effective(args, cfg, "jobs", 1))
    _write_corpus(resolve_corpus(corpus, jobs=jobs), args.output, fmt)
    return 0


def _cmd_populate(args, cfg) -> int:
    corpus = _load_validated(args.input, _effective(args, cfg, "format"))
    strategy = CollapseStrategy(
        scope=_STRATEGY[args.strategy], use_coreference=not args.no_coref
    )
    kg = populate(corpus, strategy, gold=args.gold)
    exported = export_ntriples(kg) if args.kg_format == "ntriples" else export_kg_jsonl(kg)
    _emit(exported, args.output)
    sys.stdout.write(kg_stats(kg, corpus).to_tsv())
    return 0


def _cmd_compile_gold(args, cfg) -> int:
    corpus = _load_validated(args.input, _effective(args, cfg, "format"))
    if args.links:
        links = read_entity_links(Path(args.links).read_text("utf-8"))
        corpus = attach_entity_links(corpus, links, skip_unmatched=args.skip_unmatched_links)
    _emit(write_gold_jsonl(compile_gold(corpus)), args.output)
    return 0


def _cmd_eval_kg(args, cfg) -> int:
    corpus = _load_validated(args.input, _effective(args, cfg, "format"))
    gold = read_gold_jsonl(Path(args.gold).read_text("utf-8"))
    strategy = CollapseStrategy(
        scope=_STRATEGY[args.strategy], use_coreference=not args.no_coref
    )
    result = evaluate_population(
        gold, corpus, strategy,
        ceafe_drop_singleton_response_parts=args.ceafe_drop_singletons,
    )
    sys.stdout.write(result.report.to_table())
    sys.stdout.write(f"concepts\t{result.n_concepts}\n")
    if args.json_out:
        _emit(json.dumps(result.to_dict(), indent=2, sort_keys=True) + "\n", args.json_out)
    return 0


_COMMANDS = {
    "convert": _cmd_convert,
    "stats": _cmd_stats,
    "score": _cmd_score,
    "baseline": _cmd_baseline,
    "populate": _cmd_populate,
    "compile-gold": _cmd_compile_gold,
    "eval-kg": _cmd_eval_kg,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not args.command:
        parser.print_usage(sys.stderr)
        return 1
    try:
        cfg = _load_config(args.config)
        exceptions_path = _effective(args, cfg, "lemma_exceptions")
        if exceptions_path:
            set_default_lemma_exceptions(load_lemma_exceptions(exceptions_path))
        return _COMMANDS[args.command](args, cfg)
    except ValidationError as exc:
        for violation in exc.violations:
            print(violation, file=sys.stderr)
        return 2
    except (ParseError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
