"""Command-line front end: thuetwist <command> [options].

Exit codes: 0 success, 1 verification or check failure, 2 certification or
precision failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

import mpmath

from . import checks as checks_mod
from . import intervals as ivs
from .bounds import KAPPA_CAVEAT, KappaConfig, bound_report
from .embeddings import DEFAULT_BITS, MAX_BITS, CertificationError
from .exact import Poly
from .family import (
    SolutionTriple, TwistFamily, corollary_family, corollary_field, cyclotomic_demo,
    element_from_json, form_at, invariants_of, load_family,
)
from .numfield import UnitSystem, regulator_from_units
from .solver import SearchBox, empirical_kappa, enumerate_solutions, verify_solution

EXIT_OK, EXIT_FAIL, EXIT_CERT, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default(o):
    if isinstance(o, ivs.Interval):
        return ivs.interval_json(o)
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, mpmath.mpf):
        return float(o)
    if isinstance(o, (set, frozenset, tuple)):
        return sorted(o)
    raise TypeError(f"not serializable: {type(o).__name__}")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_default)


def _read_family_json(name_or_path: str) -> dict:
    path = Path(name_or_path)
    if path.is_file():
        return json.loads(path.read_text())
    name = path.name if path.suffix == ".json" else f"{path.name}.json"
    bundled = resources.files("thuetwist") / "data" / name
    if bundled.is_file():
        return json.loads(bundled.read_text())
    raise UsageError(f"family file not found: {name_or_path}")


def _family(args) -> tuple[TwistFamily, dict]:
    if not args.family:
        raise UsageError("--family is required")
    data = _read_family_json(args.family)
    fam = load_family(data, args.bits, args.max_bits, unchecked=args.unchecked_root_of_unity)
    return fam, data


def _a_values(args) -> tuple[int, int]:
    if args.a_range:
        try:
            lo, hi = (int(v) for v in args.a_range.split(":"))
        except ValueError:
            raise UsageError("--a-range expects A:B") from None
        return lo, hi
    if args.a is not None:
        return args.a, args.a
    raise UsageError("give --a or --a-range")


def _regulator(args, fam: TwistFamily, data: dict):
    if args.regulator is not None:
        return ivs.iv(Fraction(args.regulator)), "user"
    if "units" in data:
        units = tuple(element_from_json(fam.field, u) for u in data["units"])
        sys_ = UnitSystem(fam.field, units)
        if sys_.r != fam.field.unit_rank(fam.emb):
            raise UsageError(f"family lists {sys_.r} units but the unit rank is "
                             f"{fam.field.unit_rank(fam.emb)}")
        return regulator_from_units(sys_, fam.emb), "units"
    raise UsageError("bounds need --regulator or a 'units' entry in the family file")


def _kappa(args) -> KappaConfig:
    base = KappaConfig()
    if args.kappa_config:
        base = KappaConfig.from_json(Path(args.kappa_config).read_text())
    return KappaConfig(
        kappa_thm1=args.kappa_thm1 if args.kappa_thm1 is not None else base.kappa_thm1,
        kappa_thm2=args.kappa_thm2 if args.kappa_thm2 is not None else base.kappa_thm2,
        kappa_baker=base.kappa_baker,
    )


# --- commands ---------------------------------------------------------------

def cmd_form(args, out):
    fam, _ = _family(args)
    lo, hi = _a_values(args)
    rows = [{"a": a, "form": str(form_at(fam, a)), "coeffs": [int(c) for c in form_at(fam, a).coeffs]}
            for a in range(lo, hi + 1)]
    if args.format == "csv":
        out.write("a,form\n")
        for r in rows:
            out.write(f"{r['a']},{r['form']}\n")
    elif args.format == "json":
        out.write(_dump(rows if len(rows) > 1 else rows[0]) + "\n")
    else:
        for r in rows:
            out.write(r["form"] + "\n")
    return EXIT_OK


def cmd_invariants(args, out):
    fam, _ = _family(args)
    inv = invariants_of(fam)
    rep = {"family": fam.to_json(), "d": fam.d, **inv.to_json()}
    if args.format == "csv":
        out.write("quantity,lo,hi,mid\n")
        for k in ("lambda0", "lambda", "mu"):
            v = rep[k]
            out.write(f"{k},{v['lo']},{v['hi']},{v['mid']}\n")
        out.write(f"mu_case,,,{rep['mu_case']}\n")
    else:
        out.write(_dump(rep) + "\n")
    return EXIT_OK


def cmd_bounds(args, out):
    fam, data = _family(args)
    R, source = _regulator(args, fam, data)
    inv = invariants_of(fam)
    a = args.a if args.a is not None else 0
    rep = bound_report(ivs.mid(R), args.m, ivs.mid(inv.lambda0), ivs.mid(inv.lambda_),
                       ivs.mid(inv.mu), fam.d, fam.field.unit_rank(fam.emb), a, _kappa(args))
    body = rep.to_dict()
    body.update({"mu_case": inv.mu_case, "regulator_source": source, "caveat": KAPPA_CAVEAT})
    if args.format == "csv":
        out.write("key,value\n")
        for k in sorted(body):
            out.write(f"{k},{json.dumps(body[k])}\n")
    else:
        out.write(_dump(body) + "\n")
    return EXIT_OK


def cmd_solve(args, out):
    fam, data = _family(args)
    lo, hi = _a_values(args)
    box = SearchBox(lo, hi, args.xy_max, args.m)
    res = enumerate_solutions(fam, box, args.require_degree, with_diagnostics=args.diagnostics)
    if args.format == "csv":
        out.write(res.to_csv())
        return EXIT_OK
    body = res.to_json()
    body["family"] = fam.to_json()
    body["require_degree"] = args.require_degree
    if args.fit_kappa:
        R, _ = _regulator(args, fam, data)
        fit = empirical_kappa(fam, box, args.m, R, solutions=res, require_degree=args.require_degree)
        fit["caveat"] = KAPPA_CAVEAT
        body["empirical_kappa"] = fit
    out.write(_dump(body) + "\n")
    return EXIT_OK


def cmd_verify(args, out):
    fam, _ = _family(args)
    if args.a is None:
        raise UsageError("verify needs --a")
    sol = SolutionTriple(args.x, args.y, args.a, 0)
    rep = verify_solution(fam, sol, args.m)
    if args.format == "csv":
        out.write("x,y,a,value,pass,reasons\n")
        out.write(f"{rep['x']},{rep['y']},{rep['a']},{rep['value']},{rep['pass']},"
                  f"\"{'; '.join(rep['reasons'])}\"\n")
    else:
        out.write(_dump(rep) + "\n")
    return EXIT_OK if rep["pass"] else EXIT_FAIL


def cmd_demo_cyclotomic(args, out):
    rep = cyclotomic_demo(args.n, args.xy_max)
    equal = [a for a, ok in rep["F_a_equals_F0"].items() if ok]
    rep["F_a_equals_F0"] = {str(a): ok for a, ok in rep["F_a_equals_F0"].items()}
    rep["summary"] = "F_a = F_0 for a in {" + ",".join(map(str, equal)) + "}"
    if args.format == "csv":
        out.write("x,y\n")
        for x, y in rep.get("solutions", []):
            out.write(f"{x},{y}\n")
    else:
        rep["solutions"] = [list(s) for s in rep.get("solutions", [])]
        out.write(_dump(rep) + "\n")
    return EXIT_OK if rep["all_equal"] else EXIT_FAIL


def cmd_demo_corollary(args, out):
    try:
        eps = Poly([int(c) for c in args.epsilon.split(",")])
    except ValueError:
        raise UsageError("--epsilon expects comma-separated integer coefficients, lowest first") from None
    F = corollary_family(eps, args.h, args.a)
    rep = {"epsilon_minpoly": str(eps), "h": args.h, "a": args.a,
           "form": str(F), "coeffs": [int(c) for c in F.coeffs]}
    K = corollary_field(eps, args.h)
    fam = TwistFamily(K, K.one, K.theta, 1, args.bits, args.max_bits, name="corollary")
    inv = invariants_of(fam)
    d = fam.d
    log_mu = ivs.IV.log(inv.mu)
    floor = ivs.IV.mpf(2) / (d - 1) * ivs.IV.log(inv.lambda_)
    rep["upsilon_minpoly"] = str(K.g)
    rep.update({"lambda": inv.lambda_, "mu": inv.mu, "mu_case": inv.mu_case,
                "log_mu_floor_certified": ivs.certainly_le(floor, log_mu),
                "log_mu_floor_consistent": ivs.possibly_le(floor, log_mu)})
    out.write(_dump(rep) + "\n")
    return EXIT_OK if rep["log_mu_floor_consistent"] else EXIT_FAIL


def cmd_checks(args, out):
    rep = checks_mod.run_all(args.seed, quick=args.quick)
    if args.format == "csv":
        out.write("suite,cases,violations,uncertified,pass\n")
        for s in rep["suites"]:
            out.write(f"{s['name']},{s['cases']},{s['violations']},{s['uncertified']},{s['pass']}\n")
    else:
        out.write(_dump(rep) + "\n")
    return EXIT_OK if rep["pass"] else EXIT_FAIL


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default=None,
                        help="output format (default json; plain text for 'form')")
    common.add_argument("--bits", type=int, default=DEFAULT_BITS, help="starting precision")
    common.add_argument("--max-bits", type=int, default=MAX_BITS, help="precision cap")

    fam = _Parser(add_help=False)
    fam.add_argument("--family", help="family JSON file or bundled name (plastic, cuberoot2, ...)")
    fam.add_argument("--unchecked-root-of-unity", action="store_true",
                     help="allow a twisting element that is not a unit of infinite order")

    avals = _Parser(add_help=False)
    avals.add_argument("--a", type=int)
    avals.add_argument("--a-range", help="inclusive range A:B")

    kappa = _Parser(add_help=False)
    kappa.add_argument("--regulator", type=str, help="regulator value (overrides family units)")
    kappa.add_argument("--kappa-thm1", type=float)
    kappa.add_argument("--kappa-thm2", type=float)
    kappa.add_argument("--kappa-config", help="JSON file with kappa_thm1 / kappa_thm2")

    p = _Parser(prog="thuetwist", description="Twisted Thue forms: invariants, bounds, solutions.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("form", parents=[common, fam, avals], help="print F_a")
    s.set_defaults(func=cmd_form)

    s = sub.add_parser("invariants", parents=[common, fam], help="lambda0, lambda, mu and the mu case")
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("bounds", parents=[common, fam, kappa], help="bound report")
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--a", type=int, default=None, help="a for the x, y bound (default 0)")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("solve", parents=[common, fam, avals, kappa], help="enumerate solutions in a box")
    s.add_argument("--xy-max", type=int, default=30)
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--require-degree", action=argparse.BooleanOptionalAction, default=True,
                   help="skip a with Q(alpha upsilon^a) != K (default on)")
    s.add_argument("--diagnostics", action="store_true", help="per-solution i0 / Psi diagnostics")
    s.add_argument("--fit-kappa", action="store_true", help="report the smallest consistent kappa_thm2")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("verify", parents=[common, fam], help="check one solution")
    s.add_argument("--x", type=int, required=True)
    s.add_argument("--y", type=int, required=True)
    s.add_argument("--a", type=int, required=True)
    s.add_argument("--m", type=int, default=1)
    s.set_defaults(func=cmd_verify)

    demo = sub.add_parser("demo", help="worked examples")
    dsub = demo.add_subparsers(dest="demo", required=True, parser_class=_Parser)
    s = dsub.add_parser("cyclotomic", parents=[common], help="zeta_n twists of Phi_n")
    s.add_argument("n", type=int)
    s.add_argument("--xy-max", type=int, default=10)
    s.set_defaults(func=cmd_demo_cyclotomic)
    s = dsub.add_parser("corollary", parents=[common], help="prod (X^h - eps_i^a Y^h)")
    s.add_argument("--epsilon", default="-1,-1,1",
                   help="minimal polynomial of eps, coefficients lowest first (default golden ratio)")
    s.add_argument("--h", type=int, default=2)
    s.add_argument("--a", type=int, default=3)
    s.set_defaults(func=cmd_demo_corollary)

    s = sub.add_parser("checks", parents=[common], help="run the inequality property suites")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--quick", action="store_true", help="reduced case counts")
    s.set_defaults(func=cmd_checks)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_OK
    try:
        return args.func(args, out)
    except CertificationError as e:
        print(f"certification error: {e}", file=sys.stderr)
        return EXIT_CERT
    except (UsageError, ValueError, OSError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
