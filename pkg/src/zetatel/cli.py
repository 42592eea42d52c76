"""Command-line front end: telescoping, certificate checks, value evaluation.

Exit codes: 0 on success (all PASS), 1 on any FAIL, 2 on usage or parse
errors.  JSON output has stable key order; wall-clock fields appear only
with --timings so repeated runs at a fixed configuration are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from mpmath import mp

from .errors import NotFound, ParseError, ZetatelError
from .hyperterm import parse_term
from .numerics import MZVIndex, SumConfig, interpolated_nested_sum
from .registry import (registry, registry_text, reports_json, verify_all,
                       verify_identity)
from .telescope import (Certificate, TelescopeResult, gosper, parse_operator,
                        verify_certificate, zeilberger)

USAGE_INDICES = ("comma-separated exponents; a leading minus marks an "
                 "alternating entry, e.g. -2,-2,3")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="zt",
        description="Creative-telescoping and nested-sum workbench")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gosper", help="indefinite hypergeometric summation")
    g.add_argument("--term", required=True, help="summand in the term grammar")
    g.add_argument("--var", required=True, help="summation variable")
    g.add_argument("--json", action="store_true")

    z = sub.add_parser("zeilberger", help="creative telescoping in a parameter")
    z.add_argument("--term", required=True, help="summand in the term grammar")
    z.add_argument("--sum", required=True, dest="sum_var",
                   help="summation variable")
    z.add_argument("--param", required=True, help="parameter variable")
    z.add_argument("--max-order", type=int, default=4)
    z.add_argument("--json", action="store_true")

    vc = sub.add_parser("verify-cert", help="exact certificate verification")
    vc.add_argument("--term", required=True)
    vc.add_argument("--sum", required=True, dest="sum_var")
    vc.add_argument("--param", required=True)
    vc.add_argument("--operator", required=True,
                    help="operator with S_<param> as the shift symbol")
    vc.add_argument("--cert", required=True, help="certificate multiplier")
    vc.add_argument("--json", action="store_true")

    m = sub.add_parser("mzv", help="evaluate an interpolated nested sum")
    m.add_argument("--kind", choices=("zeta", "t"), default="zeta")
    m.add_argument("--r", default="0", help="interpolation weight in [0,1]")
    m.add_argument("--indices", required=True, help=USAGE_INDICES)
    m.add_argument("--prec", type=int, default=128, help="precision in bits")
    m.add_argument("--N", type=int, default=10 ** 6, help="truncation index")
    m.add_argument("--json", action="store_true")

    v = sub.add_parser("verify", help="verify registry identities")
    v.add_argument("id", nargs="?", help="registry identifier")
    v.add_argument("--all", action="store_true")
    v.add_argument("--kind", help="filter by record kind")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--prec", type=int, default=None)
    v.add_argument("--N", type=int, default=None)
    v.add_argument("--json", action="store_true")
    v.add_argument("--timings", action="store_true",
                   help="include wall-clock fields in the output")

    ls = sub.add_parser("list", help="list registry identities")
    ls.add_argument("--export", action="store_true",
                    help="dump the full registry in its text serialization")
    return p


def _parse_indices(text: str):
    out = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            raise ParseError("empty index entry")
        out.append(int(chunk))
    return out


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return _run(args)
    except (ParseError, NotFound, ValueError, ZetatelError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


def _run(args) -> int:
    if args.command == "gosper":
        term = parse_term(args.term)
        cert = gosper(term, args.var)
        if cert is None:
            out = {"summable": False}
            print(json.dumps(out, sort_keys=True) if args.json
                  else "not Gosper-summable")
            return 1
        if args.json:
            print(json.dumps({"summable": True, "certificate": cert.rat.render()},
                             sort_keys=True))
        else:
            print("certificate R (antidifference is R * term):")
            print("  " + cert.rat.render())
        return 0

    if args.command == "zeilberger":
        term = parse_term(args.term)
        res = zeilberger(term, args.sum_var, args.param,
                         max_order=args.max_order)
        if res is None:
            print("no operator of order <= %d" % args.max_order)
            return 1
        if args.json:
            print(json.dumps({
                "operator": res.operator.render(),
                "certificate": [c.rat.render() for c in res.certificate],
                "verified": res.verified}, sort_keys=True))
        else:
            print("operator:    " + res.operator.render())
            for c in res.certificate:
                print("certificate: " + c.rat.render())
            print("verified:    %s (exact residual zero)" % res.verified)
        return 0

    if args.command == "verify-cert":
        term = parse_term(args.term)
        op = parse_operator(args.operator, args.param)
        cert = Certificate(parse_term(args.cert).as_ratfunc())
        res = TelescopeResult(op, [cert], sum_var=args.sum_var)
        residual = verify_certificate(term, res, args.sum_var)
        ok = residual.is_zero()
        if args.json:
            print(json.dumps({"residual_zero": ok,
                              "residual": residual.render()}, sort_keys=True))
        else:
            print("residual: " + residual.render())
            print("certificate %s" % ("verified" if ok else "REJECTED"))
        return 0 if ok else 1

    if args.command == "mzv":
        exps = _parse_indices(args.indices)
        idx = MZVIndex.make(exps, kind=args.kind, r=Fraction(args.r))
        cfg = SumConfig(N=args.N, richardson_levels=3,
                        precision_bits=max(args.prec, 64))
        value, err = interpolated_nested_sum(idx, cfg)
        digits = max(int(args.prec * 0.301) - 2, 8)
        with mp.workprec(max(args.prec, 64)):
            vs = mp.nstr(value, digits, strip_zeros=False)
            es = mp.nstr(err, 3)
        if args.json:
            print(json.dumps({"index": idx.render(), "value": vs,
                              "error_estimate": es}, sort_keys=True))
        else:
            print("%s = %s  (tail estimate %s)" % (idx.render(), vs, es))
        return 0

    if args.command == "verify":
        cfg = None
        if args.prec or args.N:
            base = SumConfig()
            cfg = SumConfig(N=args.N or base.N,
                            richardson_levels=base.richardson_levels,
                            precision_bits=args.prec or base.precision_bits)
        if args.all or args.kind:
            reports = verify_all(cfg, kind=args.kind, jobs=max(args.jobs, 1))
        elif args.id:
            reports = [verify_identity(args.id, cfg)]
        else:
            print("error: give an identity id or --all", file=sys.stderr)
            return 2
        if args.json:
            print(reports_json(reports, timings=args.timings))
        else:
            for rep in reports:
                line = "%-14s %s" % (rep.id, rep.status)
                if rep.worst:
                    line += "  worst %s" % rep.worst
                if args.timings:
                    line += "  (%d ms)" % rep.ms
                print(line)
            npass = sum(1 for r in reports if r.status == "PASS")
            print("%d/%d PASS" % (npass, len(reports)))
        return 0 if all(r.status == "PASS" for r in reports) else 1

    if args.command == "list":
        if args.export:
            print(registry_text(), end="")
            return 0
        for rec in sorted(registry().values(), key=lambda r: r.id):
            print("%-14s %-12s %s" % (rec.id, rec.kind, rec.note))
        return 0

    return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
