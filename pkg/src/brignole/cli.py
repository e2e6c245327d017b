"""Command-line front end.

Exit codes: 0 success (identities hold, model found, proof verified),
1 checked and false, 2 input error, 3 search budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import catalog
from .algebra import (AlgebraError, all_witnesses, check_axiom_set, format_algebra,
                      load_algebra, save_algebra)
from .bundled import copy_fixtures, list_fixtures, resolve_path
from .eqfile import (EquationFileError, EquationSet, axiom_set_file, load_equation_set,
                     resolve_equation)
from .equivalence import TranslationError, translate
from .finder import (DEFAULT_NODE_BUDGET, DEFAULT_TIME_BUDGET, SearchProblem, SearchStats,
                     enumerate_models)
from .independence import independence_report
from .proof import ProofSyntaxError, load_proof, verify_proof
from .terms import BRIGNOLE, NELSON, ParseError, format_equation

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_EXHAUSTED = 0, 1, 2, 3


class InputError(Exception):
    pass


def _emit(args, text: str, doc: dict):
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(text)


def _axioms(spec: str | None, default: str) -> EquationSet:
    spec = spec or default
    if spec in catalog.AXIOM_SETS:
        return axiom_set_file(spec)
    return load_equation_set(resolve_path(spec))


# ---------------------------------------------------------------------------
# check


def cmd_check(args) -> int:
    A = load_algebra(resolve_path(args.algebra))
    es = _axioms(args.axioms, "nelson" if A.signature == NELSON else "brignole")
    rep = check_axiom_set(A, es.hold)
    lines = [rep.text()]
    doc = rep.to_dict()
    if args.witnesses and rep.failing:
        doc["all_witnesses"] = {}
        for f in rep.failing:
            ws = all_witnesses(A, rep[f].equation, limit=args.witnesses)
            lines.append(f"  {f} falsifying assignments (first {len(ws)}):")
            doc["all_witnesses"][f] = []
            for v, l, r in ws:
                named = {k: A.name_of(x) for k, x in v.items()}
                lines.append("    " + ", ".join(f"{k}={x}" for k, x in named.items())
                             + f" (lhs={A.name_of(l)}, rhs={A.name_of(r)})")
                doc["all_witnesses"][f].append({"assignment": named, "lhs": A.name_of(l),
                                                "rhs": A.name_of(r)})
    _emit(args, "\n".join(lines), doc)
    return EXIT_OK if rep.all_hold else EXIT_FALSE


# ---------------------------------------------------------------------------
# find


def cmd_find(args) -> int:
    es = load_equation_set(resolve_path(args.equations))
    fail = list(es.fail)
    hold = list(es.hold)
    for ref in args.fail or []:
        try:
            target = resolve_equation(ref, es)
        except KeyError as e:
            raise InputError(str(e.args[0])) from None
        hold = [h for h in hold if h.id != target.id and h.equation != target.equation]
        fail.append(target)
    if args.size is not None:
        sizes = [args.size]
    else:
        if args.max_size is None:
            raise InputError("give --size or --max-size")
        sizes = list(range(args.min_size, args.max_size + 1))
    if not sizes:
        raise InputError("empty size range")
    found, per_size, status = [], [], "complete"
    total = SearchStats()
    for n in sizes:
        p = SearchProblem(es.signature, n, hold, fail,
                          max_solutions=None if args.all else 1,
                          node_budget=args.node_budget, time_budget=args.time_budget,
                          iso_dedup=args.iso_dedup)
        res = enumerate_models(p, workers=args.workers, name=args.name)
        total.merge(res.stats)
        per_size.append({"size": n, "models": len(res.models), "status": res.status,
                         "nodes": res.stats.nodes, "seconds": round(res.stats.seconds, 3)})
        found.extend(res.models)
        if res.exhausted:
            status = "exhausted"
            break
        if found and not args.all:
            break
    lines = []
    for row in per_size:
        lines.append(f"size {row['size']}: {row['models']} model(s), search {row['status']}, "
                     f"{row['nodes']} nodes, {row['seconds']} s")
    written = []
    for A in found:
        if args.out:
            os.makedirs(args.out, exist_ok=True)
            path = os.path.join(args.out, f"{A.name}.alg")
            save_algebra(A, path)
            written.append(path)
            lines.append(f"wrote {path}")
        elif not args.json:
            lines.append(format_algebra(A).rstrip())
    if status == "exhausted":
        lines.append("budget exhausted: no conclusion for the remaining sizes")
        code = EXIT_EXHAUSTED
    elif found:
        code = EXIT_OK
    else:
        lines.append(f"no model at sizes {sizes[0]}..{sizes[-1]} (exhaustive)")
        code = EXIT_FALSE
    doc = {"hold": [h.id for h in hold], "fail": [f.id for f in fail], "sizes": per_size,
           "status": status, "found": len(found), "written": written,
           "models": [format_algebra(A) for A in found]}
    _emit(args, "\n".join(lines), doc)
    return code


# ---------------------------------------------------------------------------
# translate


def cmd_translate(args) -> int:
    A = load_algebra(resolve_path(args.algebra))
    try:
        out, rep = translate(A, args.direction, check=not args.no_check)
    except TranslationError as e:
        _emit(args, f"refused: {e}", {"refused": True, "reason": str(e),
                                      "failing": e.report.failing})
        return EXIT_FALSE
    if args.out:
        save_algebra(out, args.out)
    text = rep.text()
    if not args.out and not args.json:
        text = format_algebra(out).rstrip() + "\n" + text
    doc = rep.to_dict()
    doc["output_algebra"] = format_algebra(out)
    _emit(args, text, doc)
    return EXIT_OK if rep.ok else EXIT_FALSE


# ---------------------------------------------------------------------------
# verify-proof


def cmd_verify_proof(args) -> int:
    script = load_proof(resolve_path(args.proof))
    rep = verify_proof(script, depth=args.depth, continue_on_error=args.continue_on_error,
                       near_misses=not args.no_near_misses)
    if args.certificates:
        with open(args.certificates, "w") as fh:
            json.dump([c.to_dict() for c in rep.certificates], fh, indent=1)
    text = rep.text() + f"\n({rep.seconds:.2f} s)"
    doc = rep.to_dict()
    _emit(args, text, doc)
    return EXIT_OK if rep.verified else EXIT_FALSE


# ---------------------------------------------------------------------------
# catalog


def cmd_catalog(args) -> int:
    if args.verify:
        return _verify_lemma_suite(args)
    if args.ids:
        entries = [catalog.lookup(i) for i in args.ids]
        text = "\n".join(f"{e.id} [{e.signature.name}] {format_equation(e.equation)}"
                         + (f"\n  note: {e.note}" if e.note else "") for e in entries)
        doc = {e.id: {"equation": format_equation(e.equation), "signature": e.signature.name,
                      "aliases": list(e.aliases), "status": e.status, "note": e.note}
               for e in entries}
    else:
        text = catalog.dump().rstrip()
        doc = {"ids": catalog.all_ids()}
    _emit(args, text, doc)
    return EXIT_OK


def _verify_lemma_suite(args) -> int:
    setting = args.verify
    sig = NELSON if setting == "nelson" else BRIGNOLE
    axioms = catalog.nelson_axioms() if setting == "nelson" else catalog.brignole_axioms()
    lemmas = catalog.lemma_suite(setting)
    violations, checked = [], 0
    for n in range(1, args.max_size + 1):
        res = enumerate_models(SearchProblem(sig, n, axioms), name=setting)
        if res.exhausted:
            _emit(args, f"search exhausted at size {n}", {"status": "exhausted", "size": n})
            return EXIT_EXHAUSTED
        for A in res.models:
            checked += 1
            rep = check_axiom_set(A, lemmas)
            for f in rep.failing:
                violations.append({"model": A.name, "lemma": f,
                                   "detail": rep[f].describe(A)})
    lines = [f"{len(lemmas)} {setting} lemma items checked on {checked} models "
             f"of size <= {args.max_size}: {len(violations)} violations"]
    lines += ["  " + v["detail"] + f" in {v['model']}" for v in violations]
    _emit(args, "\n".join(lines), {"setting": setting, "lemmas": [e.id for e in lemmas],
                                   "models": checked, "violations": violations})
    return EXIT_OK if not violations else EXIT_FALSE


# ---------------------------------------------------------------------------
# fixtures


def cmd_fixtures(args) -> int:
    if args.copy:
        paths = copy_fixtures(args.copy)
        _emit(args, "\n".join(f"wrote {p}" for p in paths), {"written": paths})
        return EXIT_OK
    if args.independence:
        rep = independence_report(max_size=args.search_max_size, time_budget=args.time_budget,
                                  workers=args.workers)
        _emit(args, rep.text(), rep.to_dict())
        if any(s.result.status == "exhausted" for s in rep.searches):
            return EXIT_EXHAUSTED
        return EXIT_OK
    names = list_fixtures()
    _emit(args, "\n".join(names), {"fixtures": names})
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="brignole",
                                 description="Workbench for Nelson and Brignole algebras.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="print one JSON document")

    p = sub.add_parser("check", help="check an algebra against an axiom set")
    p.add_argument("algebra")
    p.add_argument("--axioms", help="nelson, brignole, reduced, or an equation file")
    p.add_argument("--witnesses", type=int, default=0, metavar="N",
                   help="also list up to N falsifying assignments per failing axiom")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("find", help="search for finite models")
    p.add_argument("equations", help="equation file (ids allowed, '!' marks must-fail)")
    p.add_argument("--size", type=int)
    p.add_argument("--max-size", type=int)
    p.add_argument("--min-size", type=int, default=1)
    p.add_argument("--fail", action="append", metavar="ID_OR_EQUATION",
                   help="equation the model must falsify (removed from the must-hold set)")
    p.add_argument("--all", action="store_true",
                   help="all models at every size instead of the first one found")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.add_argument("--time-budget", type=float, default=DEFAULT_TIME_BUDGET)
    p.add_argument("--iso-dedup", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--out", help="directory for the found algebra files")
    p.add_argument("--name", default="model", help="name prefix for found models")
    common(p)
    p.set_defaults(func=cmd_find)

    p = sub.add_parser("translate", help="translate between the two signatures")
    p.add_argument("algebra")
    p.add_argument("--direction", choices=["n2b", "b2n", "roundtrip"], required=True)
    p.add_argument("--out", help="write the resulting algebra here")
    p.add_argument("--no-check", action="store_true",
                   help="translate even if the input is not a model")
    common(p)
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("verify-proof", help="check an equational proof script")
    p.add_argument("proof")
    p.add_argument("--depth", type=int, default=2, help="rewrite hops per 'by' line")
    p.add_argument("--continue", dest="continue_on_error", action="store_true",
                   help="keep going after a failing line")
    p.add_argument("--certificates", metavar="FILE", help="write certificates as JSON")
    p.add_argument("--no-near-misses", action="store_true",
                   help="do not search for alternative citations on failing lines")
    common(p)
    p.set_defaults(func=cmd_verify_proof)

    p = sub.add_parser("catalog", help="list named equations")
    p.add_argument("ids", nargs="*")
    p.add_argument("--verify", choices=["nelson", "brignole"],
                   help="check the lemma suite on all models up to --max-size")
    p.add_argument("--max-size", type=int, default=4)
    common(p)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("fixtures", help="list or copy bundled fixtures")
    p.add_argument("--copy", metavar="DIR")
    p.add_argument("--independence", action="store_true",
                   help="report failing axioms per separating model and search for B7")
    p.add_argument("--search-max-size", type=int, default=8)
    p.add_argument("--time-budget", type=float, default=DEFAULT_TIME_BUDGET)
    p.add_argument("--workers", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_fixtures)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ParseError, AlgebraError, EquationFileError, ProofSyntaxError,
            FileNotFoundError, KeyError, ValueError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
