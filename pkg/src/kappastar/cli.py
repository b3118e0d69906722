"""Command-line interface: star product evaluation and verification suites.

Exit codes: 0 all checks passed, 1 a mathematical check failed (the report
carries the witness), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from typing import List, Optional

from . import __version__
from .cyclicity import (check_candidate, commutator_integrand, extract_conditions,
                        first_order_rules, ibp_normalize, reduce_with_rules,
                        standard_candidates)
from .parser import ParseError, parse
from .poly import AlgebraError, Poly
from .randgen import random_poly
from .realization import (fock_check, kappa_realization, left_right_realizations,
                          su2_realization, verify_reduction_kappa, verify_reduction_su2)
from .report import EXIT_USAGE, Check, Report
from .star import build_star, verify_associativity
from .twist import (rs_first_order_form, twist_star_product, verify_falling_factorial,
                    verify_lemma2, wedge_star_is_undeformed)

PRODUCT_ALIASES = {
    "moyal": "moyal",
    "wv": "wick_voros",
    "wick-voros": "wick_voros",
    "wick_voros": "wick_voros",
    "kappa": "kappa",
    "su2": "su2",
    "jordanian": "jordanian",
    "jordanian-rs": "jordanian_rs",
    "jordanian_rs": "jordanian_rs",
}

SUITES = ("reduction", "lemma2", "associativity", "realizations", "wedge",
          "measure", "obstruction", "fock", "su2-reduction")


def _default_dimension(args_d: Optional[int]) -> int:
    if args_d is not None:
        return args_d
    env = os.environ.get("KAPPASTAR_DIM")
    if env:
        try:
            return int(env)
        except ValueError:
            pass
    return 2


def cmd_star(args) -> Report:
    kind = PRODUCT_ALIASES[args.product]
    d = 3 if kind == "su2" else _default_dimension(args.dimension)
    product = build_star(kind, d, cap=args.order)
    f = parse(args.f, product.table)
    g = parse(args.g, product.table)
    series = product.commutator(f, g) if args.commutator else product.apply(f, g)
    rows = [(order, str(series.order_coeff(order))) for order in series.orders()]
    return Report(command=_echo(args), product=args.product, dimension=d,
                  series=rows, version=__version__)


def _echo(args) -> List[str]:
    return list(args._echo)


def _suite_reduction(d: int, degree: int, rng) -> List[Check]:
    from .twist import _monomials_up_to
    kappa = build_star("kappa", d)
    wv = build_star("wick_voros", d)
    real = kappa_realization(d)
    table = kappa.table
    checks = []
    bad = None
    count = 0
    for e1 in _monomials_up_to(table, degree):
        for e2 in _monomials_up_to(table, degree):
            count += 1
            res = verify_reduction_kappa(Poly.monomial(table, e1), Poly.monomial(table, e2),
                                         d, kappa, wv, real)
            if not res.ok and bad is None:
                bad = f"({Poly.monomial(table, e1)}, {Poly.monomial(table, e2)}): {res.witness()}"
    checks.append(Check(f"closed-form product reduces through the quadratic-linear "
                        f"realization on {count} monomial pairs (degree <= {degree})",
                        bad is None, bad))
    return checks


def _suite_lemma2(d: int, degree: int, rng) -> List[Check]:
    ff = verify_falling_factorial(d, 6)
    sweep = verify_lemma2(d, degree)
    return [
        Check("falling factorial of the Euler operator equals the pure derivative term (n <= 6)",
              ff.ok, ff.witness or None),
        Check(f"twist-induced product equals the closed form on monomial pairs (degree <= {degree})",
              sweep.ok, sweep.witness or None),
    ]


def _suite_associativity(d: int, degree: int, rng, triples: int = 40) -> List[Check]:
    checks = []
    for kind in ("moyal", "wick_voros", "kappa", "su2", "jordanian", "jordanian_rs"):
        product = build_star(kind, 3 if kind == "su2" else d)
        indices = None
        if kind == "su2":
            indices = tuple(product.table.spatial_indices())
        bad = None
        for _ in range(triples):
            f = random_poly(product.table, rng, degree, indices=indices)
            g = random_poly(product.table, rng, degree, indices=indices)
            h = random_poly(product.table, rng, degree, indices=indices)
            res = verify_associativity(product, f, g, h)
            if not res.ok:
                bad = f"triple ({f}; {g}; {h}): {res.witness()}"
                break
        checks.append(Check(f"{kind} product associative on {triples} random triples "
                            f"(degree <= {degree})", bad is None, bad))
    return checks


def _suite_realizations(d: int, degree: int, rng, samples: int = 20) -> List[Check]:
    kappa = build_star("kappa", d)
    table = kappa.table
    lefts, rights = left_right_realizations(d)
    checks = []
    bad_l = bad_r = None
    for _ in range(samples):
        f = random_poly(table, rng, degree)
        for mu in range(d + 1):
            xmu = Poly.variable(table, f"x{mu}")
            if lefts[mu].apply(f) != kappa.apply(xmu, f) and bad_l is None:
                bad_l = f"x{mu} with f = {f}"
            if rights[mu].apply(f) != kappa.apply(f, xmu) and bad_r is None:
                bad_r = f"x{mu} with f = {f}"
    checks.append(Check("left realization star-multiplies from the left", bad_l is None, bad_l))
    checks.append(Check("right realization star-multiplies from the right", bad_r is None, bad_r))
    bad = None
    for k in range(1, d + 1):
        comm_l = lefts[0].commutator(lefts[k])
        if comm_l != lefts[k].with_theta(1):
            bad = f"[xL0, xL{k}] != theta*xL{k}"
        comm_r = rights[0].commutator(rights[k])
        if comm_r != rights[k].with_theta(1).scale(-1):
            bad = f"[xR0, xR{k}] != -theta*xR{k}"
    checks.append(Check("operator commutators are +/- theta times the spatial operator",
                        bad is None, bad))
    return checks


def _suite_wedge(d: int, order: int) -> List[Check]:
    bad = None
    for mu in range(d + 1):
        for nu in range(d + 1):
            if not wedge_star_is_undeformed(mu, nu, d, order):
                bad = f"(mu, nu) = ({mu}, {nu})"
    return [Check(f"twist-deformed wedge of coordinate one-forms is undeformed "
                  f"through theta^{order}", bad is None, bad)]


def _suite_measure(d: int, rng) -> List[Check]:
    checks = []
    expected = first_order_rules(build_star("kappa", d).table)
    for kind in ("kappa", "jordanian_rs"):
        product = build_star(kind, d)
        conds = extract_conditions(ibp_normalize(commutator_integrand(product, 1)))
        ok = conds == expected
        witness = None if ok else f"derived: {conds}"
        checks.append(Check(f"order-1 conditions for {kind} are d0 h = 0 and "
                            f"x^k d_k h = -{d} h", ok, witness))
    kappa = build_star("kappa", d)
    for cand in standard_candidates(d):
        rep = check_candidate(cand, kappa, 1)
        witness = None
        if not rep.passed:
            failing = [r for r in rep.results if not r.passed]
            witness = f"{failing[0].condition} residual {failing[0].residual}"
        checks.append(Check(f"candidate {cand.name} satisfies the order-1 conditions",
                            rep.passed, witness))
    return checks


def _suite_obstruction(d: int, rng) -> List[Check]:
    product = build_star("kappa", d)
    rules = first_order_rules(product.table)
    conds2 = extract_conditions(ibp_normalize(commutator_integrand(product, 2)))
    reduction = reduce_with_rules(conds2, rules)
    obstructions = reduction.obstructions()
    flagged = reduction.flagged()
    witness = ("order-2 conditions reduce to the empty set under the order-1 rules; "
               "no c*h = 0 obstruction exists for this product")
    checks = [Check("order-2 reduction yields a condition c*h = 0 with c a nonzero rational",
                    bool(obstructions) and not flagged,
                    None if obstructions else witness)]
    for cand in standard_candidates(d):
        rep = check_candidate(cand, product, 2)
        checks.append(Check(f"candidate {cand.name} fails the order-2 conditions",
                            not rep.passed,
                            None if not rep.passed else
                            "candidate satisfies every order-2 condition exactly"))
    return checks


def _suite_fock(d: int, M: int) -> List[Check]:
    report = fock_check(d, M)
    checks = []
    for ident in report.identities:
        boundary = ident.boundary_only(report.M)
        if ident.holds_everywhere:
            witness = None
        else:
            states = ", ".join(str(s) for s in ident.failing_states[:4])
            witness = f"boundary states: {states}" if boundary else f"interior failure: {states}"
        checks.append(Check(f"d={d} M={M}: {ident.name} holds below the cutoff "
                            f"(failures confined to top states)", boundary, witness))
    return checks


def _suite_su2_reduction(degree: int, rng) -> List[Check]:
    from .twist import _monomials_up_to
    su2 = build_star("su2")
    wv = build_star("wick_voros", 2)
    real = su2_realization()
    table = su2.table
    spatial = table.spatial_indices()
    bad = None
    count = 0
    for e1 in _monomials_up_to(table, degree):
        if any(e1[i] for i in range(len(table)) if i not in spatial):
            continue
        for e2 in _monomials_up_to(table, degree):
            if any(e2[i] for i in range(len(table)) if i not in spatial):
                continue
            count += 1
            res = verify_reduction_su2(Poly.monomial(table, e1), Poly.monomial(table, e2),
                                       su2, wv, real)
            if not res.ok and bad is None:
                bad = f"({Poly.monomial(table, e1)}, {Poly.monomial(table, e2)}): {res.witness()}"
    checks = [Check(f"su2 product reduces through the Pauli realization on {count} "
                    f"monomial pairs (degree <= {degree})", bad is None, bad)]
    x1 = Poly.variable(table, "x1")
    x2 = Poly.variable(table, "x2")
    comm = su2.commutator(x1, x2)
    from .scalars import IMAG
    expected = Poly.variable(table, "x3").scale(IMAG)
    ok = comm.order_coeff(1) == expected and comm.order_coeff(0).is_zero()
    checks.append(Check("su2 coordinate commutator is i*lambda*x3", ok,
                        None if ok else str(comm)))
    return checks


def cmd_verify(args) -> Report:
    d = _default_dimension(args.dimension)
    degree = args.degree
    rng = random.Random(args.seed)
    suite = args.suite
    if suite == "reduction":
        checks = _suite_reduction(d, degree, rng)
    elif suite == "lemma2":
        checks = _suite_lemma2(d, degree, rng)
    elif suite == "associativity":
        checks = _suite_associativity(d, degree, rng)
    elif suite == "realizations":
        checks = _suite_realizations(d, degree, rng)
    elif suite == "wedge":
        checks = _suite_wedge(d, args.order or 4)
    elif suite == "measure":
        checks = _suite_measure(d, rng)
    elif suite == "obstruction":
        checks = _suite_obstruction(d, rng)
    elif suite == "fock":
        checks = _suite_fock(min(d, 2), args.cutoff)
    elif suite == "su2-reduction":
        checks = _suite_su2_reduction(min(degree, 3), rng)
    else:  # pragma: no cover - argparse restricts choices
        raise AlgebraError(f"unknown suite {suite!r}")
    return Report(command=_echo(args), dimension=d, checks=checks,
                  seed=args.seed, version=__version__)


def _build_argparser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="kappastar",
        description="Exact workbench for kappa-Minkowski star products and Jordanian twists")
    sub = ap.add_subparsers(dest="command", required=True)

    star = sub.add_parser("star", help="evaluate a star product of two expressions")
    star.add_argument("--product", required=True, choices=sorted(PRODUCT_ALIASES))
    star.add_argument("-d", "--dimension", type=int, default=None)
    star.add_argument("f")
    star.add_argument("g")
    star.add_argument("--commutator", action="store_true",
                      help="evaluate f*g - g*f instead of f*g")
    star.add_argument("--order", type=int, default=None,
                      help="truncate the series at this theta order")
    star.add_argument("--json", action="store_true")
    star.set_defaults(func=cmd_star)

    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("suite", choices=SUITES)
    verify.add_argument("-d", "--dimension", type=int, default=None)
    verify.add_argument("--degree", type=int, default=3)
    verify.add_argument("--order", type=int, default=None)
    verify.add_argument("--cutoff", type=int, default=3, help="Fock cutoff M")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--json", action="store_true")
    verify.set_defaults(func=cmd_verify)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = _build_argparser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0,) else 0
    args._echo = ["kappastar"] + argv
    try:
        report = args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AlgebraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(report.to_json() if args.json else report.to_text())
    return report.exit_code()


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
