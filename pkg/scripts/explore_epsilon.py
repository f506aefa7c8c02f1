#!/usr/bin/env python3
"""Scan epsilon for a fixed j(n) and report the empirical threshold N.

    python3 scripts/explore_epsilon.py --j "log(log(n))" --eps 0.1 0.25 0.5 1 2
"""
import argparse

from ramverify import BoundParams, build_table
from ramverify.verifier import explore_theorem


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--j", default="log(log(n))")
    ap.add_argument("--eps", type=float, nargs="+", default=[0.25, 0.5, 1.0, 2.0])
    ap.add_argument("--cap", type=int, default=10**8)
    ap.add_argument("--table-n-max", type=int, default=0,
                    help="also check s < alpha against a table up to this n")
    args = ap.parse_args()

    tab = build_table(args.table_n_max) if args.table_n_max else None
    print(f"j(n) = {args.j}, cap = {args.cap:.3g}")
    for eps in args.eps:
        res = explore_theorem(BoundParams.custom(eps, args.j), args.cap, table=tab)
        bad = [r.name for r in res.reports if not r.ok]
        print(f"eps={eps:<6g} N={res.empirical_N!s:>10s}  "
              f"{'all checks pass' if not bad else 'failing: ' + ', '.join(bad)}")


if __name__ == "__main__":
    main()
