"""Command-line interface.

Subcommands: ``examples``, ``nerve``, ``check-fibrant``, ``factorize``,
``categorify``, ``counit-check``.  Reports are machine-readable JSON with a
one-line human summary on stdout.  Exit status: 0 on success (a fibrancy
failure is still a successful check, recorded in the report), 1 on a
mathematical verification failure, 2 on budget exhaustion, 3 on input
errors.  The environment variable ``COMPLICIAL_BUDGET`` overrides the
default search budget; ``--budget`` overrides both.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import categorify as categorify_mod
from . import factorization, lifting, nerves, tdelta, twocat
from .categorify import CounitRelationError, EvaluationRefused
from .factorization import StageError
from .tdelta import BudgetExceeded
from .twocat import InvalidInput

EXIT_OK = 0
EXIT_MATH = 1
EXIT_BUDGET = 2
EXIT_INPUT = 3


def _dump(path, doc):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from exc


def _load_two_category(path):
    C = twocat.FiniteTwoCategory.from_json_dict(_load(path),
                                                name=os.path.basename(path))
    errs = C.validate()
    if errs:
        more = f" (+{len(errs) - 1} more)" if len(errs) > 1 else ""
        raise InvalidInput(f"invalid 2-category {path}: {errs[0]}{more}")
    return C


def _load_tdelta(path):
    X = tdelta.TruncatedTDeltaSet.from_json_dict(_load(path),
                                                 name=os.path.basename(path))
    errs = X.validate()
    if errs:
        raise InvalidInput(f"invalid tDelta-set {path}: {errs[0]}")
    return X


def cmd_examples(args):
    catalog = twocat.standard_examples()
    if args.list or not args.name:
        for name in sorted(catalog):
            print(name)
        print("free-adjoint-equivalence  (effective; not serializable)")
        return EXIT_OK
    if args.name not in catalog:
        raise InvalidInput(f"unknown example {args.name!r}")
    if not args.out:
        raise InvalidInput("--out is required with --name")
    _dump(args.out, catalog[args.name].to_json_dict())
    print(f"wrote {args.name} to {args.out}")
    return EXIT_OK


def cmd_nerve(args):
    C = _load_two_category(args.input)
    X = nerves.nerve_with_info(C, args.dim, args.marking)[0]
    _dump(args.out, X.to_json_dict())
    counts = X.counts()
    print(f"{args.marking} nerve of {C.name}: simplices {counts['simplices']} "
          f"tokens {counts['tokens']} -> {args.out}")
    return EXIT_OK


def cmd_check_fibrant(args):
    X = _load_tdelta(args.input)
    report = lifting.is_precomplicial(X, n=args.n, N=args.dim,
                                      budget=args.budget, jobs=args.jobs)
    doc = report.to_json_dict()
    doc["input"] = os.path.basename(args.input)
    if args.report:
        _dump(args.report, doc)
    verdict = "fibrant up to the bound" if report.passed else "NOT fibrant"
    print(f"{os.path.basename(args.input)}: {verdict} "
          f"(n={args.n}, dim={args.dim}, "
          f"{sum(r.maps_checked for r in report.results)} maps checked)")
    for r in report.failures():
        print(f"  fails {r.extension.label()}")
    return EXIT_OK


def cmd_factorize(args):
    C = _load_two_category(args.input)
    os.makedirs(args.trace, exist_ok=True)
    N = args.dim
    P1, x_to_p1, rep1 = factorization.stage_p1(C, N)
    _dump(os.path.join(args.trace, "p1.json"), P1.to_json_dict())
    P2, x_to_p2, r12, s21, rep2 = factorization.stage_p2(P1, x_to_p1)
    _dump(os.path.join(args.trace, "p2.json"), P2.to_json_dict())
    P3, p2_to_p3, rep3 = factorization.stage_p3(P2, C, N)
    _dump(os.path.join(args.trace, "p3.json"), P3.to_json_dict())
    Q, p3_to_q, P4, p3_to_p4, q, s, rep4 = \
        factorization.stage_p4_and_retract(P3, C, N)
    _dump(os.path.join(args.trace, "p4.json"), P4.to_json_dict())
    _dump(os.path.join(args.trace, "final.json"), Q.to_json_dict())
    summary = factorization.verify_factorization(C, N)
    _dump(os.path.join(args.trace, "summary.json"), summary)
    print(f"factorization of {C.name} verified; trace in {args.trace}/")
    return EXIT_OK


def cmd_categorify(args):
    X = _load_tdelta(args.input)
    P = categorify_mod.categorify(X)
    _dump(args.out, P.to_json_dict())
    print(f"presentation {P.counts()} -> {args.out}")
    return EXIT_OK


def cmd_counit_check(args):
    C = _load_two_category(args.cat)
    assignment = categorify_mod.counit_assignment(C, args.dim)
    sections = {}
    ok = True
    for x in C.objects:
        for y in C.objects:
            res = categorify_mod.section_check(C, x, y, args.dim, assignment)
            sections[f"{x}->{y}"] = bool(res)
            ok = ok and bool(res)
    doc = {
        "category": C.name,
        "dim": args.dim,
        "relations_checked": len(assignment.polygraph.relations),
        "sections": sections,
        "passed": ok,
    }
    if args.report:
        _dump(args.report, doc)
    print(f"counit of {C.name}: {len(assignment.polygraph.relations)} "
          f"relations hold; section identity "
          f"{'holds' if ok else 'FAILS'} on all object pairs")
    return EXIT_OK if ok else EXIT_MATH


def build_parser():
    p = argparse.ArgumentParser(
        prog="complicial",
        description="Nerves of finite 2-categories, fibrancy checks, "
                    "anodyne factorizations, and 2-polygraph presentations.")
    sub = p.add_subparsers(dest="command", required=True)

    ex = sub.add_parser("examples", help="bundled 2-category catalog")
    ex.add_argument("--list", action="store_true")
    ex.add_argument("--name")
    ex.add_argument("--out")
    ex.set_defaults(func=cmd_examples)

    nv = sub.add_parser("nerve", help="build a marked nerve")
    nv.add_argument("--input", required=True)
    nv.add_argument("--marking", choices=["street", "rs", "natural"],
                    default="natural")
    nv.add_argument("--dim", type=int, default=5)
    nv.add_argument("--out", required=True)
    nv.set_defaults(func=cmd_nerve)

    cf = sub.add_parser("check-fibrant",
                        help="right-lifting report against the anodyne library")
    cf.add_argument("--input", required=True)
    cf.add_argument("--n", type=int, default=2)
    cf.add_argument("--dim", type=int, default=5)
    cf.add_argument("--report")
    cf.add_argument("--jobs", type=int, default=1)
    cf.add_argument("--budget", type=int, default=None)
    cf.set_defaults(func=cmd_check_fibrant)

    fz = sub.add_parser("factorize",
                        help="replay the marked-to-natural factorization")
    fz.add_argument("--input", required=True)
    fz.add_argument("--dim", type=int, default=5)
    fz.add_argument("--trace", required=True)
    fz.set_defaults(func=cmd_factorize)

    cg = sub.add_parser("categorify", help="emit a 2-polygraph presentation")
    cg.add_argument("--input", required=True)
    cg.add_argument("--out", required=True)
    cg.set_defaults(func=cmd_categorify)

    cc = sub.add_parser("counit-check",
                        help="verify counit relations and the section identity")
    cc.add_argument("--cat", required=True)
    cc.add_argument("--dim", type=int, default=4)
    cc.add_argument("--report")
    cc.set_defaults(func=cmd_counit_check)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvalidInput as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except EvaluationRefused as exc:
        print(f"evaluation refused: {exc.reason}", file=sys.stderr)
        return EXIT_BUDGET if "budget" in exc.reason else EXIT_MATH
    except (StageError, CounitRelationError, AssertionError) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
