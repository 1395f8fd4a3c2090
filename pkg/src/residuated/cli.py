"""Command-line front end.

Exit codes: 0 success, 1 property failure, 2 input error, 3 search exhausted
without a witness.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time

from residuated import dlo, implication
from residuated.algebra import DEFAULT_CAP, StructuralError, validate
from residuated.formats import (
    BUILTIN_PAPER,
    format_algebra,
    load_algebra,
    load_relfile,
)
from residuated.relational import close, implication8, mask_to_pairs, to_abstract
from residuated.search import (
    Found,
    SearchProblem,
    enumerate_units,
    search_representation,
    verify_representation,
)

OK, FAIL, INPUT_ERROR, EXHAUSTED = 0, 1, 2, 3
DEFAULT_MAX_BASE = 3

log = logging.getLogger("residuated")


def _pairs(mask, n):
    return " ".join(f"({u},{v})" for u, v in sorted(mask_to_pairs(mask, n)))


def cmd_validate(args) -> int:
    alg = load_algebra(args.file)
    report = validate(alg, args.witness_cap)
    print(f"algebra: {args.file} ({alg.size} elements)")
    for line in report.lines():
        print(line)
    return OK if report.passed else FAIL


def cmd_dump(args) -> int:
    sys.stdout.write(format_algebra(load_algebra(args.file)))
    return OK


def cmd_tables(args) -> int:
    alg = load_algebra(args.file)
    against = args.against_published or args.file == BUILTIN_PAPER
    order = dlo.TABLE_ORDER if against else alg.elements
    if against and set(order) != set(alg.elements):
        raise StructuralError("--against-published needs the elements " + " ".join(order))
    computed = dlo.computed_tables(alg, order)
    print("computed tables, entry(row, col) = row • col")
    print()
    for op in ("comp", "rres", "lres"):
        print(dlo.format_table(op, computed[op], order))
        print()
    if not against:
        return OK
    report = dlo.verify_tables(alg)
    bad = report.mismatches["col•row"]
    print("published tables read as entry(row, col) = col • row")
    for op, r, c, got in bad:
        print(f"MISMATCH {op} row={r} col={c}: published {dlo.PAPER_TABLES[op][dlo.TABLE_ORDER.index(r)][dlo.TABLE_ORDER.index(c)]}, computed {got}")
    print(f"{147 - len(bad)}/147 cells agree")
    return OK if not bad else FAIL


def cmd_close(args) -> int:
    ctx = load_relfile(args.relfile)
    if not ctx.named:
        raise StructuralError("relational file declares no 'rel' generators")
    family = close(ctx.named, ctx)
    text = format_algebra(to_abstract(family, ctx))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {len(family)} elements to {args.output}")
    else:
        sys.stdout.write(text)
    return OK


def cmd_check_implication(args) -> int:
    if args.exhaustive:
        run = implication.exhaustive(args.n, args.jobs)
        print(f"mode: exhaustive n={args.n}")
    else:
        run = implication.randomized(args.random, args.seed, args.n)
        print(f"mode: random n={args.n}")
    for line in run.log:
        print(line)
    for cex in run.counterexamples[: args.witness_cap]:
        print("COUNTEREXAMPLE " + implication.describe(*cex))
    print(f"units={run.units} antecedent_pairs={run.pairs} counterexamples={len(run.counterexamples)}")
    return OK if run.passed else FAIL


def _problem(args) -> SearchProblem:
    alg = load_algebra(args.file)
    if args.file == BUILTIN_PAPER and not args.generators:
        return SearchProblem(alg, ("a", "b"), dlo.PAPER_DEFINING_TERMS, args.max_base, args.square)
    gens = args.generators.split(",") if args.generators else None
    return SearchProblem.for_algebra(alg, args.max_base, gens, args.square)


def result_block(p: SearchProblem, result) -> list[str]:
    c = result.counters
    out = ["---RESULT---",
           f"verdict {'found' if isinstance(result, Found) else 'not_found'}",
           f"max_base {p.max_base}",
           f"square {str(p.square_mode).lower()}",
           f"generators {','.join(p.generators)}",
           f"units_examined {c.units_examined}",
           f"assignments_examined {c.assignments_examined}",
           f"nodes {c.nodes}",
           f"identity_cuts {c.identity_cuts}"]
    if isinstance(result, Found):
        n = result.ctx.base_size
        out.append(f"base {n}")
        out.append(f"unit {_pairs(result.ctx.unit, n)}".rstrip())
        for g in p.generators:
            out.append(f"image {g} {_pairs(result.images[g], n)}".rstrip())
    out.append("---RESULT---")
    return out


def cmd_search_rep(args) -> int:
    if args.max_base > DEFAULT_MAX_BASE and not args.large:
        raise ValueError(f"--max-base above {DEFAULT_MAX_BASE} needs --large (expect long runtimes)")
    p = _problem(args)
    progress = None
    if args.progress:
        progress = lambda i, total: print(f"unit {i}/{total}", file=sys.stderr)
    result = search_representation(p, jobs=args.jobs, prune=not args.no_prune, progress=progress)
    for line in result_block(p, result):
        print(line)
    if isinstance(result, Found):
        report = verify_representation(result.ctx, result.images, p)
        print(f"representation found on a base of {result.ctx.base_size} points; "
              f"independent re-check {'passed' if report.passed else 'FAILED'}")
        return OK if report.passed else FAIL
    mode = "square units" if p.square_mode else "transitive units"
    print(f"no representation on {mode} with at most {p.max_base} points "
          f"({result.counters.units_examined} units up to isomorphism)")
    return EXHAUSTED


def verify_paper(max_base: int = DEFAULT_MAX_BASE, jobs: int = 1) -> list[tuple[bool, str, str]]:
    """The full reproduction pipeline; one (passed, stage, detail) entry per stage."""
    stages = []

    def stage(name, ok, detail):
        stages.append((bool(ok), name, detail))
        return ok

    alg, fam = dlo.build_paper_algebra()
    stage("closure", alg.size == 7, f"{alg.size} elements: {' '.join(alg.elements)}")

    report = validate(alg)
    stage("axioms", report.passed, "order, associativity, monotonicity, residuation (343 triples)")

    a, b = fam[dlo.A], fam[dlo.B]
    comp, rres = dlo.compose_sym, dlo.rres_sym
    bb = rres(b, b)
    cons = comp(comp(a, bb), a)
    eqs = [comp(a, a) == a, bb == fam[dlo.B1], cons == fam[dlo.BOT], not a <= cons]
    stage("equations", all(eqs), "a = a∘a; b\\b = b′; a∘(b\\b)∘a = ⊥; a ⊄ ⊥")

    holds = implication_holds_sym(a, b)
    stage("implication-fails-in-counterexample", not holds, "antecedent holds, consequent fails")

    tables = dlo.verify_tables(alg)
    stage("tables", tables.orientation == "col•row" and not tables.discrepancies,
          f"147 cells match with entry(row, col) = {tables.orientation or 'no single orientation'}")

    run = implication.exhaustive(3, jobs)
    stage("implication-finite-bases", run.passed,
          f"exhaustive n=3: {run.units} units, {run.pairs} antecedent pairs, "
          f"{len(run.counterexamples)} counterexamples")

    p = SearchProblem(alg, ("a", "b"), dlo.PAPER_DEFINING_TERMS, max_base)
    res = search_representation(p, jobs=jobs)
    n_units = sum(1 for _ in enumerate_units(max_base))
    stage("search", not isinstance(res, Found) and res.units_examined == n_units,
          f"no representation up to {max_base} points ({res.units_examined} unit classes)")

    p = SearchProblem(alg, ("a", "b"), dlo.PAPER_DEFINING_TERMS, max_base, square_mode=True)
    res = search_representation(p, jobs=jobs)
    stage("square-search", not isinstance(res, Found) and res.counters.identity_cuts == max_base,
          f"no square representation up to {max_base} points "
          f"(identity cut on {res.counters.identity_cuts}/{max_base} units)")
    return stages


def implication_holds_sym(a, b) -> bool:
    return implication8(a, b, dlo.compose_sym, dlo.rres_sym, dlo.sym_leq)


def cmd_verify_paper(args) -> int:
    ok = True
    for i, (passed, name, detail) in enumerate(verify_paper(args.max_base, args.jobs), 1):
        ok &= passed
        print(f"[{'PASS' if passed else 'FAIL'}] {i} {name}: {detail}")
    print("all stages passed" if ok else "some stages FAILED")
    return OK if ok else FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="residuated", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, jobs=False):
        p.add_argument("--witness-cap", type=int, default=DEFAULT_CAP)
        if jobs:
            p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("validate", help="check the residuated semigroup axioms")
    p.add_argument("file", help=f"algebra file or {BUILTIN_PAPER}")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("dump", help="print an algebra in the algebra file format")
    p.add_argument("file")
    p.set_defaults(func=cmd_dump)

    p = sub.add_parser("tables", help="print operation tables")
    p.add_argument("file")
    p.add_argument("--against-published", action="store_true",
                   help="diff against the published seven-element tables")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("close", help="close named relations and write the abstract algebra")
    p.add_argument("relfile")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_close)

    p = sub.add_parser("check-implication", help="look for finite counterexamples to the implication")
    p.add_argument("--n", type=int, required=True)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--random", type=int, metavar="COUNT")
    p.add_argument("--seed", type=int, default=0)
    common(p, jobs=True)
    p.set_defaults(func=cmd_check_implication)

    p = sub.add_parser("search-rep", help="search for a representation on a bounded base")
    p.add_argument("file")
    p.add_argument("--max-base", type=int, default=DEFAULT_MAX_BASE)
    p.add_argument("--square", action="store_true")
    p.add_argument("--generators", help="comma-separated generator names")
    p.add_argument("--large", action="store_true", help=f"allow --max-base above {DEFAULT_MAX_BASE}")
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--progress", action="store_true")
    common(p, jobs=True)
    p.set_defaults(func=cmd_search_rep)

    p = sub.add_parser("verify-paper", help="reproduce every finite claim about the counterexample")
    p.add_argument("--max-base", type=int, default=DEFAULT_MAX_BASE)
    common(p, jobs=True)
    p.set_defaults(func=cmd_verify_paper)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    start = time.perf_counter()
    try:
        code = args.func(args)
    except (StructuralError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    log.debug("%s finished in %.2fs", args.command, time.perf_counter() - start)
    return code


if __name__ == "__main__":
    sys.exit(main())
