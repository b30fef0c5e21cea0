"""Command-line front end: ``liftcert <command> ...``.

Exit status: 0 on success or a valid certificate, 1 on an invalid certificate
or a failed property, 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence

from . import certificate
from ._rational import display, precision_from_env
from .fuzzy import FuzzyError, FuzzyRelation
from .lifting import LiftError, enumerate_vertices, evaluate, lift, transportation_lp
from .operators import MAX, LiftOperator, OperatorError
from .proofs import ProofError, certified_bound, check, prove_lift
from .sampling import random_distribution, random_relation
from .terms import Distribution, TermError, parse_term
from .theories import (QuantEquation, TableAlgebra, TheoryError, default_grid, model_respects_finitary_rules,
                       satisfies, two_zeros_model)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _space(path: str) -> FuzzyRelation:
    return FuzzyRelation.from_json(_load_json(path))


def _terms(args):
    if args.s is not None and args.t is not None:
        return parse_term(args.s), parse_term(args.t)
    if args.mu is None or args.nu is None:
        raise InputError("give either --mu/--nu distribution files or --s/--t terms")
    mu = Distribution.from_json(_load_json(args.mu))
    nu = Distribution.from_json(_load_json(args.nu))
    return mu.to_term(), nu.to_term()


def _format_coupling(g) -> str:
    return ", ".join(f"{a}|{b}: {display(w)}" for (a, b), w in g.mass.items())


def cmd_lift(args) -> int:
    from .terms import denote

    op = LiftOperator.parse(args.op)
    d = _space(args.space)
    s, t = _terms(args)
    value, g = lift(op, d, denote(s), denote(t), args.precision)
    if args.json:
        print(json.dumps({"operator": op.token, "value": value.to_json(), "coupling": g.to_json()}, sort_keys=True))
    else:
        print(f"operator: {op.token}")
        print(f"value: {value.describe()}")
        print(f"witness: {_format_coupling(g)}")
    return EXIT_OK


def cmd_prove(args) -> int:
    op = LiftOperator.parse(args.op)
    d = _space(args.space)
    s, t = _terms(args)
    deriv = prove_lift(op, d, s, t)
    Path(args.out).write_text(certificate.dumps(deriv, op, args.precision))
    bound = certified_bound(op, deriv)
    print(f"operator: {op.token}")
    print(f"certified bound: {display(bound.exact) if bound.exact is not None else bound.decimal()}")
    print(f"derivation nodes: {deriv.size()}, depth {deriv.depth()}")
    print(f"certificate written to {args.out}")
    return EXIT_OK


def cmd_check(args) -> int:
    try:
        text = Path(args.cert).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {args.cert}: {exc}") from exc
    deriv, op, _ = certificate.loads(text)
    space = _space(args.space) if args.space else None
    verdict = check(op, deriv, finite_mode=args.finite, context=space)
    if verdict:
        bound = deriv.conclusion.bound
        shown = "equality" if bound is None else str(bound)
        print(f"valid certificate ({op.token}, {deriv.size()} nodes): {shown}")
        return EXIT_OK
    print(f"invalid certificate: {verdict}")
    return EXIT_FAIL


def _oracle_instance(seed: int):
    rng = random.Random(seed)
    d = random_relation(rng)
    mu = random_distribution(rng, d.carrier)
    nu = random_distribution(rng, d.carrier)
    return _oracle_check(d, mu, nu)


def _oracle_check(d: FuzzyRelation, mu: Distribution, nu: Distribution) -> List[str]:
    problems = []
    from .operators import STANDARD

    vertices = enumerate_vertices(mu, nu)
    g = transportation_lp({(a, b): d(a, b) for a in mu for b in nu}, mu, nu)
    lp_value = evaluate(STANDARD, d, g).exact
    best = min(evaluate(STANDARD, d, v).exact for v in vertices)
    if lp_value != best:
        problems.append(f"LP optimum {lp_value} != vertex minimum {best}")
    bottleneck_value = lift(MAX, d, mu, nu).value.exact
    best_max = min(evaluate(MAX, d, v).exact for v in vertices)
    if bottleneck_value != best_max:
        problems.append(f"bottleneck {bottleneck_value} != vertex minimum {best_max}")
    return problems


def cmd_oracle(args) -> int:
    if args.space:
        d = _space(args.space)
        s, t = _terms(args)
        from .terms import denote

        problems = _oracle_check(d, denote(s), denote(t))
        for p in problems:
            print(f"mismatch: {p}")
        print("oracle agrees" if not problems else "oracle disagrees")
        return EXIT_OK if not problems else EXIT_FAIL
    seeds = range(args.seed, args.seed + args.random)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_oracle_instance, seeds))
    else:
        results = [_oracle_instance(s) for s in seeds]
    failed = [(s, r) for s, r in zip(seeds, results) if r]
    for s, r in failed:
        print(f"seed {s}: {'; '.join(r)}")
    print(f"{len(results) - len(failed)}/{len(results)} instances agree (LP vs vertices, bottleneck vs vertices)")
    return EXIT_OK if not failed else EXIT_FAIL


def cmd_satisfies(args) -> int:
    model = TableAlgebra.from_json(_load_json(args.model))
    eq = QuantEquation.from_json(_load_json(args.eq))
    ok = satisfies(model, eq)
    print(f"{eq}: {'satisfied' if ok else 'not satisfied'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_demo_noncompact(args) -> int:
    model = two_zeros_model(default_grid(args.grid))
    report = model_respects_finitary_rules(model)
    for line in report.lines():
        print(line)
    return EXIT_OK if report.noncompactness_witness and report.finitary_rules_hold else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="liftcert", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def pair_args(p, required_space=True):
        p.add_argument("--space", required=required_space, help="fuzzy relation JSON")
        p.add_argument("--mu", help="distribution JSON")
        p.add_argument("--nu", help="distribution JSON")
        p.add_argument("--s", help="left term (text syntax), instead of --mu")
        p.add_argument("--t", help="right term (text syntax), instead of --nu")

    p = sub.add_parser("lift", help="compute a lifted distance and an optimal coupling")
    p.add_argument("--op", default="standard")
    pair_args(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("prove", help="lift and write a finite proof certificate")
    p.add_argument("--op", default="standard")
    pair_args(p)
    p.add_argument("--out", default="cert.json")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("check", help="validate a certificate")
    p.add_argument("--cert", required=True)
    p.add_argument("--space", help="require the root context to be this relation")
    p.add_argument("--finite", action="store_true", help="reject infinitary rule applications")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("oracle", help="cross-check the LP and bottleneck solvers against vertex enumeration")
    pair_args(p, required_space=False)
    p.add_argument("--random", type=int, default=50, help="number of random instances")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("satisfies", help="finite-model satisfaction of a quantitative equation")
    p.add_argument("--model", required=True)
    p.add_argument("--eq", required=True)
    p.set_defaults(func=cmd_satisfies)

    p = sub.add_parser("demo-noncompact", help="two-zeros countermodel report")
    p.add_argument("--grid", type=int, default=10, help="use grid 1/2, 1/4, ..., 1/2^GRID")
    p.set_defaults(func=cmd_demo_noncompact)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        args.precision = precision_from_env()
        return args.func(args)
    except (InputError, FuzzyError, TermError, OperatorError, LiftError, TheoryError, ProofError,
            certificate.CertificateFormatError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
