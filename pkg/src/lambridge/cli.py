"""Command-line front end: ``lambridge <command> grammar.txt ...``.

Every flag can also be set through an environment variable with the
``LAMBRIDGE_`` prefix (``LAMBRIDGE_ITERATIONS=2``, ``LAMBRIDGE_JSON=1``, ...);
explicit flags win.
"""
from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from .acg import cfg_to_acg, validate_lexicon
from .axioms import level
from .cfg import enumerate_language, parse, parse_bnf, reachable_productive, to_cfg
from .core import Grammar, GrammarError, Lex, load_grammar
from .lambda_calc import format_term, nesting_depth
from .prover import Budget, BudgetExhausted, Prover

MAX_LEN_CAP = 8

EXIT_OK, EXIT_NO, EXIT_BUDGET, EXIT_UNKNOWN = 0, 1, 2, 3


@dataclass(frozen=True)
class PipelineConfig:
    grammar_path: str
    iterations: int = 3
    max_len: int = 5
    filter: bool = True
    json: bool = False
    budget: Budget = Budget()

    def __post_init__(self):
        if self.iterations < 0:
            raise ValueError("--iterations must be non-negative")
        if not 0 <= self.max_len <= MAX_LEN_CAP:
            raise ValueError(f"--max-len must lie between 0 and {MAX_LEN_CAP}")


def _env(name: str, default):
    raw = os.environ.get(f"LAMBRIDGE_{name}")
    if raw is None:
        return default
    if isinstance(default, bool):
        return raw.strip().lower() in ("1", "true", "yes", "on")
    return type(default)(raw)


def _config(args) -> PipelineConfig:
    budget = Budget(args.budget_depth if args.budget_depth is not None else _env("BUDGET_DEPTH", 40),
                    args.budget_nodes if args.budget_nodes is not None else _env("BUDGET_NODES", 200_000))
    return PipelineConfig(
        grammar_path=getattr(args, "grammar", ""),
        iterations=args.iterations if args.iterations is not None else _env("ITERATIONS", 3),
        max_len=args.max_len if args.max_len is not None else _env("MAX_LEN", 5),
        filter=not (args.no_filter or _env("NO_FILTER", False)),
        json=args.json or _env("JSON", False),
        budget=budget,
    )


def _emit(cfg: PipelineConfig, payload: dict, text: str, out=None) -> None:
    out = out or sys.stdout
    if cfg.json:
        out.write(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
    else:
        out.write(text if text.endswith("\n") else text + "\n")


def _write(path: Optional[str], content: str) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(content)
    else:
        sys.stdout.write(content)


def tokenize(sentence: Sequence[str]) -> list[str]:
    return [tok.lower() for part in sentence for tok in part.split()]


def _unknown(g: Grammar, tokens: Sequence[str]) -> Optional[str]:
    known = set(g.lexemes)
    return next((t for t in tokens if t not in known), None)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_check(args) -> int:
    cfg = _config(args)
    g = load_grammar(args.grammar)
    tokens = tokenize(args.sentence)
    bad = _unknown(g, tokens)
    if bad is not None:
        _emit(cfg, {"status": "unknown-token", "token": bad}, f"unknown token: {bad}")
        return EXIT_UNKNOWN
    prover = Prover(g, cfg.budget)
    try:
        d = prover.first([Lex(t) for t in tokens], g.start) if tokens else None
    except BudgetExhausted as exc:
        _emit(cfg, {"status": "budget-exhausted", "reason": str(exc)},
              f"budget exhausted: {exc}")
        return EXIT_BUDGET
    if d is None:
        _emit(cfg, {"status": "not-derivable", "sentence": tokens}, "not derivable")
        return EXIT_NO
    term = format_term(d.term)
    _emit(cfg, {"status": "derivable", "sentence": tokens, "term": term,
                "derivation": d.to_sexpr()},
          f"derivable\nterm: {term}\n{d.to_sexpr()}")
    return EXIT_OK


def cmd_nesting(args) -> int:
    cfg = _config(args)
    g = load_grammar(args.grammar)
    tokens = tokenize(args.sentence)
    bad = _unknown(g, tokens)
    if bad is not None:
        _emit(cfg, {"status": "unknown-token", "token": bad}, f"unknown token: {bad}")
        return EXIT_UNKNOWN
    try:
        d = Prover(g, cfg.budget).first([Lex(t) for t in tokens], g.start) if tokens else None
    except BudgetExhausted as exc:
        _emit(cfg, {"status": "budget-exhausted", "reason": str(exc)}, f"budget exhausted: {exc}")
        return EXIT_BUDGET
    if d is None:
        _emit(cfg, {"status": "not-derivable"}, "not derivable")
        return EXIT_NO
    depth = nesting_depth(d.term)
    _emit(cfg, {"status": "derivable", "term": format_term(d.term), "nesting_depth": depth},
          f"{depth}\t{format_term(d.term)}")
    return EXIT_OK


def cmd_level(args) -> int:
    cfg = _config(args)
    g = load_grammar(args.grammar)
    axioms = level(g, cfg.iterations, filter=cfg.filter, budget=cfg.budget)
    counts = axioms.counts_by_generation()
    contains_previous = None
    if cfg.iterations > 0:
        previous = level(g, cfg.iterations - 1, filter=cfg.filter, budget=cfg.budget)
        contains_previous = previous.issubset(axioms)
    if cfg.json:
        doc = json.loads(axioms.to_json())
        doc["counts_by_generation"] = {str(k): v for k, v in counts.items()}
        doc["contains_previous_level"] = contains_previous
        _write(args.output, json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    else:
        header = [f"# level {cfg.iterations}: {len(axioms)} axioms",
                  "# by generation: " + ", ".join(f"{k}={v}" for k, v in counts.items())]
        if contains_previous is not None:
            header.append(f"# contains level {cfg.iterations - 1}: "
                          f"{'yes' if contains_previous else 'no'}")
        _write(args.output, "\n".join(header) + "\n" + axioms.to_text())
    return EXIT_OK


def _cfg_for(cfg: PipelineConfig, g: Grammar):
    return to_cfg(level(g, cfg.iterations, filter=cfg.filter, budget=cfg.budget), g)


def cmd_export_cfg(args) -> int:
    cfg = _config(args)
    g = load_grammar(args.grammar)
    grammar = _cfg_for(cfg, g)
    _write(args.output, grammar.to_json() + "\n" if cfg.json else grammar.to_bnf())
    if args.output and not cfg.json:
        reach, prod = reachable_productive(grammar)
        sys.stderr.write(f"{len(grammar.productions)} productions, "
                         f"{len(grammar.nonterminals)} nonterminals, "
                         f"{len(reach)} reachable, {len(prod)} productive\n")
    return EXIT_OK


def cmd_export_acg(args) -> int:
    cfg = _config(args)
    g = load_grammar(args.grammar)
    acg = cfg_to_acg(_cfg_for(cfg, g))
    validate_lexicon(acg.lexicon, acg.abstract, acg.object)
    _write(args.output, acg.to_json() + "\n" if cfg.json else acg.to_text())
    return EXIT_OK


def cmd_parse_cfg(args) -> int:
    cfg = _config(args)
    with open(args.cfg, encoding="utf-8") as fh:
        grammar = parse_bnf(fh.read())
    tokens = tokenize(args.sentence)
    if not tokens:
        _emit(cfg, {"status": "empty-input"}, "empty input")
        return EXIT_NO
    trees = list(parse(grammar, tokens))
    rendered = [t.format(grammar) for t in trees]
    _emit(cfg, {"status": "parsed" if trees else "rejected", "count": len(trees),
                "trees": rendered},
          "\n".join([f"{len(trees)} tree(s)"] + rendered))
    return EXIT_OK if trees else EXIT_NO


def _word_verdict(job):
    path, budget, word = job
    g = _GRAMMARS.get(path)
    if g is None:
        g = _GRAMMARS[path] = load_grammar(path)
    prover = _PROVERS.setdefault(path, Prover(g, budget))
    depths = [nesting_depth(d.term) for d in prover.derivations([Lex(w) for w in word], g.start)]
    return word, (min(depths) if depths else None)


_GRAMMARS: dict = {}
_PROVERS: dict = {}


def compare(g: Grammar, grammar_path: str, cfg: PipelineConfig, workers: int = 1) -> dict:
    """Agreement between S_IE derivability and CFG membership on all short words."""
    grammar = _cfg_for(cfg, g)
    language = enumerate_language(grammar, cfg.max_len)
    words = [w for k in range(1, cfg.max_len + 1) for w in itertools.product(g.lexemes, repeat=k)]
    jobs = [(grammar_path, cfg.budget, w) for w in words]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            verdicts = list(pool.map(_word_verdict, jobs, chunksize=256))
    else:
        _GRAMMARS[grammar_path] = g
        verdicts = [_word_verdict(j) for j in jobs]
    full, bounded = [], []
    for word, depth in verdicts:
        in_cfg = word in language
        if (depth is not None) != in_cfg:
            full.append({"word": " ".join(word), "derivable": depth is not None,
                         "in_cfg": in_cfg, "min_nesting": depth})
        if (depth is not None and depth <= cfg.iterations) != in_cfg:
            bounded.append({"word": " ".join(word), "min_nesting": depth, "in_cfg": in_cfg})
    return {"iterations": cfg.iterations, "max_len": cfg.max_len, "words": len(words),
            "accepted_by_cfg": len(language), "full_vs_cfg": full, "bounded_vs_cfg": bounded}


def cmd_compare(args) -> int:
    cfg = _config(args)
    g = load_grammar(args.grammar)
    report = compare(g, args.grammar, cfg, workers=args.workers)
    lines = [f"words checked: {report['words']} (length <= {cfg.max_len})",
             f"accepted by CFG at level {cfg.iterations}: {report['accepted_by_cfg']}",
             f"full derivability vs CFG: {len(report['full_vs_cfg'])} difference(s)"]
    lines += [f"  {d['word']}: derivable={d['derivable']} cfg={d['in_cfg']} "
              f"min_nesting={d['min_nesting']}" for d in report["full_vs_cfg"]]
    lines.append(f"nesting <= {cfg.iterations} vs CFG: "
                 f"{len(report['bounded_vs_cfg'])} difference(s)")
    lines += [f"  {d['word']}: min_nesting={d['min_nesting']} cfg={d['in_cfg']}"
              for d in report["bounded_vs_cfg"]]
    _emit(cfg, report, "\n".join(lines))
    return EXIT_OK if not report["bounded_vs_cfg"] else EXIT_NO


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--iterations", type=int, default=None,
                        help="leveling rounds (default 3)")
    common.add_argument("--max-len", type=int, default=None,
                        help=f"longest word for compare (default 5, at most {MAX_LEN_CAP})")
    common.add_argument("--no-filter", action="store_true",
                        help="keep inaccessible axioms while leveling")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--budget-depth", type=int, default=None)
    common.add_argument("--budget-nodes", type=int, default=None)

    parser = argparse.ArgumentParser(prog="lambridge",
                                     description="Lambek grammars to CFGs and ACGs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="parse a sentence under S_IE")
    p.add_argument("grammar")
    p.add_argument("sentence", nargs="+")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("nesting", parents=[common], help="nesting depth of the first proof")
    p.add_argument("grammar")
    p.add_argument("sentence", nargs="+")
    p.set_defaults(func=cmd_nesting)

    p = sub.add_parser("level", parents=[common], help="write the leveled axiom set")
    p.add_argument("grammar")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_level)

    p = sub.add_parser("export-cfg", parents=[common], help="write the extracted CFG")
    p.add_argument("grammar")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export_cfg)

    p = sub.add_parser("export-acg", parents=[common], help="write the extracted ACG")
    p.add_argument("grammar")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export_acg)

    p = sub.add_parser("parse-cfg", parents=[common], help="parse with an exported CFG")
    p.add_argument("cfg")
    p.add_argument("sentence", nargs="+")
    p.set_defaults(func=cmd_parse_cfg)

    p = sub.add_parser("compare", parents=[common],
                       help="compare S_IE derivability with CFG membership")
    p.add_argument("grammar")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GrammarError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 64


if __name__ == "__main__":
    sys.exit(main())
