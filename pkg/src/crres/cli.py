"""Command-line surface: generate, extract, refute, verify, export.

Exit codes: 0 success or positive verdict, 1 internal or load error,
2 usage error, 3 negative verdict (refutation not found, sequent invalid,
nonempty diff).  Every command is deterministic; the only environment
knob is CRRES_STEP_BUDGET for the default rewrite budget.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_NEGATIVE = 3


def _default_budget() -> int:
    try:
        return int(os.environ.get("CRRES_STEP_BUDGET", "1000000"))
    except ValueError:
        return 1_000_000


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crres",
        description="schematic clause sets, list-indexed refutations, "
                    "Herbrand sequents")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmts):
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--n", type=int, help="parameter value (>= 0)")
        group.add_argument("--n-range", metavar="A..B",
                           help="inclusive parameter range, e.g. 0..3")
        p.add_argument("--fmt", choices=fmts, default=fmts[0])
        p.add_argument("--out", help="write the artifact here instead of stdout")

    p = sub.add_parser("clauseset", help="emit the clause set C(n)")
    common(p, ["text", "json", "tptp"])

    p = sub.add_parser("extract",
                       help="extract the characteristic clause set and diff "
                            "it against the direct one")
    common(p, ["text"])
    p.add_argument("--fixture", help="JSON proof schema file (default: built-in)")

    p = sub.add_parser("refute", help="produce and check a refutation of C(n)")
    common(p, ["text", "json", "dot"])
    p.add_argument("--mode", choices=["schema", "math", "saturate"],
                   default="schema")
    p.add_argument("--depth", type=int, default=None,
                   help="ground universe depth for saturate mode (default n+1)")
    p.add_argument("--budget", type=int, default=_default_budget(),
                   help="rewrite step budget")
    p.add_argument("--xprime", choices=["reset", "pass"], default="reset",
                   help="reading of the underdetermined clause variable")

    p = sub.add_parser("herbrand", help="build and verify the midsequent S(n)")
    common(p, ["text", "json", "dimacs"])
    p.add_argument("--no-order-axioms", action="store_true",
                   help="drop the order axiom family (expect invalid)")
    return parser


def _parse_range(args) -> list[int]:
    if args.n is not None:
        if args.n < 0:
            raise ValueError(f"--n must be >= 0, got {args.n}")
        return [args.n]
    text = args.n_range
    a, _, b = text.partition("..")
    lo, hi = int(a), int(b)
    if lo < 0 or hi < lo:
        raise ValueError(f"bad range {text!r}")
    return list(range(lo, hi + 1))


def _emit(args, chunks: list[str]) -> None:
    body = "\n".join(chunks)
    if not body.endswith("\n"):
        body += "\n"
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(body)
    else:
        sys.stdout.write(body)


def _run_over_range(values, worker) -> list:
    if len(values) == 1:
        return [worker(values[0])]
    with ThreadPoolExecutor(max_workers=min(8, len(values))) as pool:
        return list(pool.map(worker, values))


def cmd_clauseset(args) -> int:
    from .clauses import nia_clause_set
    from .textio import clause_set_to_json, clauses_to_tptp, print_clause_set

    def run(n: int) -> str:
        clauses = nia_clause_set(n)
        if args.fmt == "json":
            return clause_set_to_json(clauses)
        if args.fmt == "tptp":
            return clauses_to_tptp(clauses, prefix=f"c{n}")
        return print_clause_set(clauses)

    values = _parse_range(args)
    outputs = _run_over_range(values, run)
    chunks = []
    for n, out in zip(values, outputs):
        if len(values) > 1:
            chunks.append(f"# n={n}")
        chunks.append(out)
    _emit(args, chunks)
    return EXIT_OK


def cmd_extract(args) -> int:
    from .clauses import (canonical_set, nia_clause_set, normalize_symbols,
                          tautology_elim)
    from .clauses import CSSymbol
    from .proofs import char_term_schema, nia_fixture, schema_from_json
    from .terms import onum
    from .textio import print_clause, print_clause_set

    if args.fixture:
        try:
            with open(args.fixture) as handle:
                schema, configs = schema_from_json(handle.read())
        except (OSError, ValueError, KeyError) as exc:
            print(f"error: cannot load fixture: {exc}", file=sys.stderr)
            return EXIT_ERROR
    else:
        schema, configs = nia_fixture()
    try:
        rules = char_term_schema(schema, configs)
    except Exception as exc:
        print(f"error: extraction failed: {exc}", file=sys.stderr)
        return EXIT_ERROR
    entry_symbol = schema.pairs[0].symbol
    entry_config = frozenset(next(iter(configs[entry_symbol])))

    def run(n: int):
        term = CSSymbol(entry_symbol, entry_config, onum(n))
        extracted = tautology_elim(normalize_symbols(rules, term, n))
        direct = nia_clause_set(n)
        left = canonical_set(extracted)
        right = canonical_set(direct)
        lines = [print_clause_set(extracted), "# diff vs direct clause set:"]
        missing = sorted(print_clause(c) for c in right - left)
        extra = sorted(print_clause(c) for c in left - right)
        for entry in missing:
            lines.append(f"- {entry}")
        for entry in extra:
            lines.append(f"+ {entry}")
        if not missing and not extra:
            lines.append("# (empty)")
        return "\n".join(lines), not missing and not extra

    values = _parse_range(args)
    results = _run_over_range(values, run)
    chunks = []
    all_empty = True
    for n, (out, empty) in zip(values, results):
        if len(values) > 1:
            chunks.append(f"# n={n}")
        chunks.append(out)
        all_empty = all_empty and empty
    _emit(args, chunks)
    return EXIT_OK if all_empty else EXIT_NEGATIVE


def cmd_refute(args) -> int:
    from .clauses import nia_clause_set
    from .resolution import check_tree
    from .textio import print_tree, tree_to_dot, tree_to_json

    def render(tree) -> str:
        if args.fmt == "json":
            return tree_to_json(tree)
        if args.fmt == "dot":
            return tree_to_dot(tree)
        return print_tree(tree)

    def run(n: int):
        if args.mode == "schema":
            from .nia import refute_with_verdict
            tree, verdict = refute_with_verdict(
                n, xprime_passthrough=args.xprime == "pass",
                budget=args.budget)
            return render(tree), verdict, None
        if args.mode == "math":
            from .mathref import refute_math
            tree = refute_math(n)
            verdict = check_tree(tree, nia_clause_set(n))
            return render(tree), verdict, None
        from .mathref import saturate
        depth = args.depth if args.depth is not None else n + 1
        result = saturate(n, depth)
        if result.tree is None:
            return json.dumps(result.stats, indent=2), None, result.stats
        verdict = check_tree(result.tree, nia_clause_set(n))
        return render(result.tree), verdict, result.stats

    values = _parse_range(args)
    try:
        results = _run_over_range(values, run)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    chunks = []
    status = EXIT_OK
    for n, (out, verdict, stats) in zip(values, results):
        if len(values) > 1:
            chunks.append(f"# n={n}")
        chunks.append(out)
        if stats is not None:
            print(json.dumps(stats), file=sys.stderr)
        if verdict is None or not (verdict.ok and verdict.is_refutation):
            status = EXIT_NEGATIVE
        if verdict is not None:
            print(f"n={n}: {verdict.summary()}", file=sys.stderr)
    _emit(args, chunks)
    return status


def cmd_herbrand(args) -> int:
    from .herbrand import herbrand_dimacs, herbrand_sequent, verify_herbrand
    from .textio import print_formula

    order_axioms = not args.no_order_axioms

    def run(n: int):
        seq = herbrand_sequent(n)
        verdict = verify_herbrand(n, order_axioms=order_axioms)
        if args.fmt == "dimacs":
            return herbrand_dimacs(n, order_axioms=order_axioms), verdict
        if args.fmt == "json":
            payload = {
                "ante": [print_formula(a) for a in seq.ante],
                "succ": [print_formula(a) for a in seq.succ],
                "valid": verdict.valid,
                "countermodel": verdict.countermodel,
            }
            return json.dumps(payload, indent=2), verdict
        lines = ["# antecedent:"]
        lines += [f"  {print_formula(a)}" for a in seq.ante]
        lines.append("# succedent:")
        lines += [f"  {print_formula(a)}" for a in seq.succ]
        lines.append(f"# verdict: {'valid' if verdict.valid else 'invalid'}")
        if verdict.countermodel is not None:
            lines.append("# countermodel:")
            lines += [f"  {atom} = {value}"
                      for atom, value in verdict.countermodel.items()]
        return "\n".join(lines), verdict

    values = _parse_range(args)
    results = _run_over_range(values, run)
    chunks = []
    status = EXIT_OK
    for n, (out, verdict) in zip(values, results):
        if len(values) > 1:
            chunks.append(f"# n={n}")
        chunks.append(out)
        if not verdict.valid:
            status = EXIT_NEGATIVE
    _emit(args, chunks)
    return status


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        values = _parse_range(args)
    except ValueError as exc:
        parser.error(str(exc))  # exits 2
    del values
    handlers = {
        "clauseset": cmd_clauseset,
        "extract": cmd_extract,
        "refute": cmd_refute,
        "herbrand": cmd_herbrand,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
