"""Command-line entry point."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analysis import pair_view, report_view, run_analysis
from .conditions import Bounds
from .grammar import GrammarError, parse_grammar
from .verify import MODES, verify_completeness

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

COMMAND_MAP = {
    "critical-pairs": ("critical-pairs",),
    "initial-conflicts": ("initial-conflicts",),
    "unfold": ("unfold",),
    "classify": ("classify",),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="graphconflicts",
                                description="Conflict analysis for graph rules with application conditions.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("critical-pairs", "initial-conflicts", "unfold", "classify", "verify"):
        s = sub.add_parser(name)
        s.add_argument("grammar", help="grammar file (JSON)")
        s.add_argument("--rules", nargs=2, metavar=("RULE1", "RULE2"),
                       help="analyse one ordered pair (default: every pair of rules)")
        s.add_argument("--max-nodes", type=int)
        s.add_argument("--max-edges", type=int)
        s.add_argument("--matches", choices=("all", "mono"))
        s.add_argument("--format", choices=("json", "text"), default="text")
        s.add_argument("--dot-dir", help="write DOT renderings into this directory")
        s.add_argument("--timings", action="store_true", help="include timings (output is then not reproducible)")
        if name == "verify":
            s.add_argument("--mode", choices=MODES, default="initial-conflicts")
    return p


def _bounds(args, defaults: dict) -> Bounds:
    n = args.max_nodes if args.max_nodes is not None else defaults.get("max_nodes", 3)
    e = args.max_edges if args.max_edges is not None else defaults.get("max_edges", 3)
    matches = args.matches or defaults.get("matches", "all")
    if n < 0 or e < 0:
        raise GrammarError("bounds must be non-negative", "arguments")
    if matches not in ("all", "mono"):
        raise GrammarError(f"matches must be 'all' or 'mono', not {matches!r}", "defaults.matches")
    return Bounds(n, e, matches == "mono")


def _pairs(grammar, names):
    if names:
        return [(grammar.rule(names[0]), grammar.rule(names[1]))]
    rules = grammar.rules
    return [(rules[i], rules[j]) for i in range(len(rules)) for j in range(i, len(rules))]


def _verify(pairs, bounds: Bounds, mode: str):
    results = []
    for r1, r2 in pairs:
        res = verify_completeness(r1, r2, bounds.max_nodes, bounds.max_edges, mode, bounds.restrict)
        results.append(((r1.name, r2.name), res))
    return results


def _verify_json(results) -> list:
    out = []
    for names, res in results:
        out.append({
            "rules": list(names), "mode": res.mode, "verdict": res.verdict,
            "established": res.bounds.describe(), "checked": res.checked,
            "counterexamples": [dict(pair_view(tp), **report_view(rep)) for tp, rep in res.counterexamples],
            "ambiguous": [dict(pair_view(tp), representatives=k) for tp, k in res.ambiguous],
            "notes": list(res.notes),
        })
    return out


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        grammar = parse_grammar(args.grammar)
        bounds = _bounds(args, grammar.defaults)
        pairs = _pairs(grammar, args.rules)
    except GrammarError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    if args.command == "verify":
        results = _verify(pairs, bounds, args.mode)
        if args.format == "json":
            print(json.dumps({"verification": _verify_json(results)}, indent=2, ensure_ascii=False))
        else:
            for names, res in results:
                print(f"{names[0]} / {names[1]} {res.mode}: {res.verdict} "
                      f"({res.checked} conflicts checked, {len(res.counterexamples)} counterexamples, "
                      f"{len(res.ambiguous)} ambiguous; {res.bounds.describe()})")
        return EXIT_OK if all(res.passed for _, res in results) else EXIT_FAIL

    if args.dot_dir:
        Path(args.dot_dir).mkdir(parents=True, exist_ok=True)
    reports = [run_analysis(r1, r2, bounds, COMMAND_MAP[args.command], args.dot_dir) for r1, r2 in pairs]
    if args.format == "json":
        print(json.dumps({"reports": [r.to_json(args.timings) for r in reports]}, indent=2, ensure_ascii=False))
    else:
        if not reports:
            print("no rule pairs to analyse")
        for r in reports:
            sys.stdout.write(r.to_text(args.timings))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
