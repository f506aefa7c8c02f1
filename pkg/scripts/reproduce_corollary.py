#!/usr/bin/env python3
"""Run every sweep behind the s < alpha corollary and print a summary.

    python3 scripts/reproduce_corollary.py [--n-max 688383] [--workers 4] [--json out.json]
"""
import argparse
import json
import logging
import time

from ramverify import BoundParams, build_table
from ramverify import verifier as V
from ramverify.ramanujan_core import sieve_for_index


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=V.PROOF_START)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--json", help="also write all reports here")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    t0 = time.perf_counter()
    tab = build_table(args.n_max, workers=args.workers)
    logging.info("table to n=%d built in %.1f s (R_n_max = %d)",
                 args.n_max, time.perf_counter() - t0, tab.r[-1])
    p = BoundParams.corollary()
    t = tab.primes

    reports = [V.verify_corollary(tab, p, V.COROLLARY_START, args.n_max, workers=args.workers)]
    for which, lo in (("sondow-lower", 2), ("sondow-upper", 1), ("laishram", 1),
                      ("sn2014", 242), ("lemma221", 2)):
        reports.append(V.verify_classic(tab, t, which, lo, args.n_max))
    dus = sieve_for_index(2 * 10**6, workers=args.workers)
    reports.append(V.verify_dusart(dus, "lower", 3, 2 * 10**6))
    reports.append(V.verify_dusart(dus, "upper", 688383, 2 * 10**6))
    grid = V.proof_samples()
    reports += [V.eq5_report(grid), V.eq2_report(grid, p), V.eq7_report(grid, p)]
    reports += list(V.check_G_negative(p, V.PRESET_SAMPLES))
    reports += V.derivative_consistency(p, V.DERIVATIVE_POINTS)

    print(f"eq4 threshold (eps2=0.4): {V.eq4_threshold(0.4)}  "
          f"crossover {V.eq4_crossover(0.4):.4f}")
    print(f"{'report':28s} {'checked':>9s} {'fail':>5s} {'ties':>5s}")
    for r in reports:
        print(f"{r.name:28s} {r.checked:9d} {len(r.failures):5d} {len(r.near_ties):5d}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump([r.to_dict() for r in reports], fh, indent=2)
    return 0 if all(r.ok for r in reports) else 1


if __name__ == "__main__":
    raise SystemExit(main())
