"""Command-line entry point.

Exit codes: 0 pass/sufficient, 1 claim failed/not sufficient, 2 usage or
parse error, 3 budget exhausted. Records go to stdout as JSON; diagnostics
go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import harness
from .dyadic import Dyadic
from .errors import BudgetExceeded, DeltaSRError, PreconditionError
from .explain import (agreement_probability, format_feature_set, min_sr_exhaustive,
                      min_sr_greedy, parse_feature_set, parse_rational, as_threshold)
from .instances import (complete_design, emit_instance, generate_random, parse_instance)
from .reductions import (FLOOR_GAP, AmplifierParams, amplify, build_hardness, build_l, build_lc,
                         build_t1, choose_params, threshold_count)
from .tree import BOT, deserialize, eval_complete, eval_partial, parse_partial, serialize

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


def _emit(record):
    print(json.dumps(record, sort_keys=True))


def _exact_decimal(d: Dyadic) -> str:
    if d.exponent == 0:
        return str(d.numerator)
    digits = str(d.numerator * 5 ** d.exponent).rjust(d.exponent + 1, "0")
    return (digits[:-d.exponent] + "." + digits[-d.exponent:]).rstrip("0").rstrip(".")


def _read_tree(path):
    if path is None:
        raise ValueError("a tree file argument is required")
    return deserialize(Path(path).read_bytes())


def _read_instance(path):
    if path is None:
        raise ValueError("an instance file argument is required")
    return parse_instance(Path(path).read_text())


def _bits(text):
    out = tuple(int(c) for c in text.strip())
    if any(b not in (0, 1) for b in out):
        raise ValueError(f"not a bit string: {text!r}")
    return out


def _write_tree(tree, out, meta):
    Path(out).write_bytes(serialize(tree))
    meta_path = Path(str(out) + ".json")
    meta_path.write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n")
    return meta_path


def _complete_input(tree, text):
    x = parse_partial(text)
    if len(x) != tree.num_vars or any(v is BOT for v in x):
        raise ValueError("the explained input must be complete and match the tree width")
    return x


# ---------------------------------------------------------------------------

def cmd_eval(args):
    tree = _read_tree(args.tree)
    y = parse_partial(args.input)
    v = eval_partial(tree, y)
    _emit({"value": str(v), "pow2": v.pow2_form(), "decimal": _exact_decimal(v),
           "complete": all(b is not BOT for b in y)})
    return EXIT_OK


def cmd_check_sr(args):
    tree = _read_tree(args.tree)
    x = _complete_input(tree, args.input)
    s = parse_feature_set(args.set, tree.num_vars)
    delta = as_threshold(parse_rational(args.delta))
    a = agreement_probability(tree, x, s)
    ok = a >= delta
    _emit({"set": format_feature_set(s), "delta": str(delta), "agreement": str(a),
           "sufficient": ok})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_min_sr(args):
    tree = _read_tree(args.tree)
    x = _complete_input(tree, args.input)
    delta = as_threshold(parse_rational(args.delta))
    if args.method == "greedy":
        res = min_sr_greedy(tree, x, delta)
    else:
        res = min_sr_exhaustive(tree, x, delta, size_cap=args.size_cap,
                                max_vars=args.max_vars, budget=args.budget, jobs=args.jobs)
    _emit(res.to_record())
    return EXIT_OK


def cmd_gen(args):
    planted = _bits(args.planted) if args.planted else None
    inst = generate_random(args.vars, args.clauses, args.width, args.seed, planted=planted)
    text = emit_instance(inst)
    if args.output:
        Path(args.output).write_text(text)
        _emit({"written": args.output, "n": inst.num_vars, "m": inst.num_clauses,
               "k": inst.width, "seed": args.seed, "planted": args.planted})
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _params_from_args(args, m):
    kappa = parse_rational(args.kappa)
    if args.copies is not None:
        gap = parse_rational(args.gap) if args.gap else None
        thr = args.threshold if args.threshold is not None else threshold_count(gap, args.copies)
        return AmplifierParams(kappa, gap, args.copies, thr, "override")
    gap = FLOOR_GAP if args.gap in (None, "floor") else parse_rational(args.gap)
    return choose_params(m, kappa, gap, source="floor" if args.gap in (None, "floor")
                         else "explicit")


def cmd_reduce(args):
    if args.kind == "t1":
        tree = _read_tree(args.source)
        res = build_t1(tree, parse_rational(args.epsilon), m=args.m, budget=args.budget)
        meta = res.metadata()
        meta_path = _write_tree(res.tree, args.output, meta)
    else:
        inst = _read_instance(args.source)
        params = _params_from_args(args, inst.num_clauses)
        build = build_hardness(inst, params, max_nodes=args.max_nodes)
        meta = build.metadata()
        meta_path = _write_tree(build.T, args.output, meta)
    _emit({"written": str(args.output), "metadata": str(meta_path), **meta})
    return EXIT_OK


def cmd_gadget(args):
    if args.kind == "lc":
        if args.clause:
            clause = [v - 1 for v in map(int, args.clause.split(","))]
        else:
            clause = list(range(args.width))
        z = (args.z - 1) if args.z else max(clause) + 1
        tree = build_lc(clause, z)
        meta = {"kind": "lc", "clause": [v + 1 for v in clause], "z": z + 1,
                "depth": tree.depth}
    elif args.kind == "l":
        tree, layout = build_l(_read_instance(args.source))
        meta = {"kind": "l", "layout": layout.to_record(), "depth": tree.depth}
    else:
        L = _read_tree(args.source)
        tree = amplify(L, args.copies, args.threshold, max_nodes=args.max_nodes)
        meta = {"kind": "amplify", "K": args.copies, "threshold": args.threshold,
                "block_width": L.num_vars, "depth": tree.depth}
    meta_path = _write_tree(tree, args.output, meta)
    _emit({"written": str(args.output), "metadata": str(meta_path), **meta})
    return EXIT_OK


def _default_suite(budget):
    checks = [lambda k=k: harness.verify_lemma_cases(k) for k in range(2, 9)]
    checks += [lambda l=l: harness.verify_fat_probability(l) for l in range(1, 7)]
    for seed in range(5):
        alpha = (1, 1, 0, 0, 0, 0, 0, 0)
        inst = generate_random(8, 6, 3, seed, planted=alpha)
        checks.append(lambda inst=inst, alpha=alpha: harness.verify_completeness(inst, alpha))
    design = complete_design(14, 3)
    checks.append(lambda: harness.verify_soundness_bruteforce(design, budget=max(budget, 1 << 26)))
    from .tree import tree_from_nested
    for spec in ((0, 0, 1), (0, 0, (1, 0, 1)), 1):
        t = tree_from_nested(2, spec)
        checks.append(lambda t=t: harness.verify_t1_claims(t, Fraction(1, 2), m=6, budget=budget))
    return checks


def cmd_verify(args):
    what = args.what
    if what == "lemma-cases":
        checks = [lambda: harness.verify_lemma_cases(args.k)]
    elif what == "fat-prob":
        checks = [lambda: harness.verify_fat_probability(args.l)]
    elif what == "completeness":
        inst = _read_instance(args.source)
        alpha = _bits(args.assignment)
        params = _params_from_args(args, inst.num_clauses) if args.kappa else None
        checks = [lambda: harness.verify_completeness(inst, alpha, params,
                                                      max_nodes=args.max_nodes)]
    elif what == "soundness":
        inst = _read_instance(args.source)
        checks = [lambda: harness.verify_soundness_bruteforce(inst, budget=args.budget,
                                                              seed=args.seed)]
    elif what == "t1":
        tree = _read_tree(args.source)
        checks = [lambda: harness.verify_t1_claims(tree, parse_rational(args.epsilon),
                                                   m=args.m, budget=args.budget)]
    else:
        checks = _default_suite(args.budget)
    bundle = harness.run_checks(checks, jobs=args.jobs)
    if args.format == "table":
        print(bundle.to_table())
    else:
        print(bundle.to_json(timing=args.timing))
    return EXIT_OK if bundle.passed else EXIT_FAIL


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="deltasr",
                                description="Exact delta-sufficient reasons on decision trees.")
    p.add_argument("--jobs", type=int, default=1, help="worker threads (output order is fixed)")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="exact T(y) for a partial input over {0,1,*}")
    e.add_argument("tree")
    e.add_argument("input")
    e.set_defaults(func=cmd_eval)

    c = sub.add_parser("check-sr", help="is a set a delta-sufficient reason")
    c.add_argument("tree")
    c.add_argument("input")
    c.add_argument("--set", required=True, help="comma-separated 1-based coordinates")
    c.add_argument("--delta", required=True)
    c.set_defaults(func=cmd_check_sr)

    s = sub.add_parser("min-sr", help="search for a small delta-sufficient reason")
    s.add_argument("tree")
    s.add_argument("input")
    s.add_argument("--delta", required=True)
    s.add_argument("--method", choices=("exhaustive", "greedy"), default="exhaustive")
    s.add_argument("--size-cap", type=int, default=None)
    s.add_argument("--max-vars", type=int, default=22)
    s.add_argument("--budget", type=int, default=1 << 24)
    s.set_defaults(func=cmd_min_sr)

    g = sub.add_parser("gen", help="seeded random 1-in-Ek instance (numpy PCG64)")
    g.add_argument("--vars", type=int, required=True)
    g.add_argument("--clauses", type=int, required=True)
    g.add_argument("--width", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--planted", help="bit string; every clause gets exactly one 1 under it")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    def amp_flags(q):
        q.add_argument("--kappa", help="target gap kappa")
        q.add_argument("--gap", help="per-copy gap, or 'floor' for 1/128")
        q.add_argument("--copies", type=int, help="override K")
        q.add_argument("--threshold", type=int, help="override accept threshold")
        q.add_argument("--max-nodes", type=int, default=2_000_000)

    r = sub.add_parser("reduce", help="conjunction lift or full hardness tree")
    r.add_argument("kind", choices=("t1", "hardness"))
    r.add_argument("source", help="tree file (t1) or instance file (hardness)")
    r.add_argument("-o", "--output", required=True)
    r.add_argument("--epsilon", default="1/2")
    r.add_argument("--m", type=int, default=None, help="non-canonical block size")
    r.add_argument("--budget", type=int, default=4096)
    amp_flags(r)
    r.set_defaults(func=cmd_reduce)

    d = sub.add_parser("gadget", help="clause gadget, selector tree, or amplifier")
    d.add_argument("kind", choices=("lc", "l", "amplify"))
    d.add_argument("source", nargs="?", help="instance file (l) or tree file (amplify)")
    d.add_argument("-o", "--output", required=True)
    d.add_argument("--width", type=int, default=3)
    d.add_argument("--clause", help="1-based clause positions, e.g. 1,2,3")
    d.add_argument("--z", type=int, help="1-based position of z")
    d.add_argument("--copies", type=int, default=1)
    d.add_argument("--threshold", type=int, default=1)
    d.add_argument("--max-nodes", type=int, default=2_000_000)
    d.set_defaults(func=cmd_gadget)

    v = sub.add_parser("verify", help="exact checks of the construction claims")
    v.add_argument("what", choices=("lemma-cases", "completeness", "soundness", "t1",
                                    "fat-prob", "all"))
    v.add_argument("source", nargs="?")
    v.add_argument("--k", type=int, default=3)
    v.add_argument("--l", type=int, default=2)
    v.add_argument("--assignment")
    v.add_argument("--epsilon", default="1/2")
    v.add_argument("--m", type=int, default=None)
    v.add_argument("--budget", type=int, default=1 << 24)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--format", choices=("table", "records"), default="records")
    v.add_argument("--timing", action="store_true", help="include runtimes in records")
    amp_flags(v)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (DeltaSRError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
