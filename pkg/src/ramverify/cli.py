"""Command-line front end.

Exit codes: 0 every check passed, 1 at least one failure, 2 usage or input
error, 3 resource limit (sieve memory budget, see RP_VERIFY_MEMORY_MB).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import re
import sys
from dataclasses import dataclass

from . import bounds as B
from . import verifier as V
from .errors import InvalidInput, RamVerifyError, ResourceLimit
from .prime_engine import build_sieve
from .ramanujan_core import build_table, format_table, load_table, save_table, sieve_for_index

log = logging.getLogger("ramverify")

FUNCS = ("L", "U", "f", "F", "G", "alpha", "g", "Uprime", "Lprime", "A", "Gprime")


def int_arg(text: str) -> int:
    """Integers written as 688383, 10^6, 2*10^6 or 1e6."""
    t = text.replace("_", "").strip()
    m = re.fullmatch(r"(?:(\d+)\*)?(\d+)\^(\d+)", t)
    if m:
        return int(m.group(1) or 1) * int(m.group(2)) ** int(m.group(3))
    try:
        return int(t)
    except ValueError:
        pass
    try:
        v = float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not v.is_integer():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(v)


def int_list(text: str) -> list[int]:
    return [int_arg(part) for part in text.split(",") if part.strip()]


@dataclass
class CliConfig:
    command: tuple[str, ...]
    args: argparse.Namespace
    format: str = "human"
    out: str | None = None
    workers: int = 1
    tie_band: float = V.TIE_BAND


def _global_options(parser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--format", choices=("json", "csv", "human"), default=d("human"))
    parser.add_argument("--out", default=d(None), help="write output here instead of stdout")
    parser.add_argument("--workers", type=int, default=d(1), help="worker threads (0 = auto)")
    parser.add_argument("--tie-band", type=float, default=d(V.TIE_BAND))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ramverify",
        description="Ramanujan primes and checks of explicit upper bounds on their index.",
    )
    _global_options(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("table", parents=[common], help="build the R_n table")
    p.add_argument("--n-max", type=int_arg, required=True)

    verify = sub.add_parser("verify", help="run a verification sweep")
    vsub = verify.add_subparsers(dest="what", required=True)
    p = vsub.add_parser("corollary", parents=[common])
    p.add_argument("--n-min", type=int_arg, default=V.COROLLARY_START)
    p.add_argument("--n-max", type=int_arg, default=V.PROOF_START)
    p.add_argument("--table")
    p = vsub.add_parser("classic", parents=[common])
    p.add_argument("--which", choices=V.CLASSIC, required=True)
    p.add_argument("--n-min", type=int_arg, default=1)
    p.add_argument("--n-max", type=int_arg, default=V.PROOF_START)
    p.add_argument("--table")
    p = vsub.add_parser("dusart", parents=[common])
    p.add_argument("--side", choices=("lower", "upper"), required=True)
    p.add_argument("--k-min", type=int_arg)
    p.add_argument("--k-max", type=int_arg, default=2 * 10**6)
    p = vsub.add_parser("derivatives", parents=[common])
    p.add_argument("--points", type=int_list, default=list(V.DERIVATIVE_POINTS))
    p.add_argument("--rel-tol", type=float, default=1e-5)

    threshold = sub.add_parser("threshold", help="integer thresholds used in the proof")
    tsub = threshold.add_subparsers(dest="what", required=True)
    p = tsub.add_parser("eq4", parents=[common])
    p.add_argument("--eps2", type=float, default=0.4)

    p = sub.add_parser("check", parents=[common], help="sampled proof inequalities")
    p.add_argument("what", choices=("eq5", "eq2", "eq7", "gneg"))
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--n", type=int_arg)
    grp.add_argument("--samples", type=int_list)
    grp.add_argument("--proof-grid", action="store_true",
                     help="dense to 10^6, log-spaced to 10^12")

    p = sub.add_parser("explore", parents=[common], help="empirical N for a custom j(n)")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--j", required=True, help="expression in n, e.g. 'log(log(n))'")
    p.add_argument("--cap", type=int_arg, required=True)
    p.add_argument("--table")

    p = sub.add_parser("eval", parents=[common], help="evaluate one bound function")
    p.add_argument("--func", choices=FUNCS, required=True)
    p.add_argument("--at", type=float, required=True)
    p.add_argument("--n", type=int_arg, help="second argument of F")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--j")
    return parser


def parse_args(argv) -> CliConfig:
    ns = build_parser().parse_args(argv)
    command = (ns.cmd,) + ((ns.what,) if getattr(ns, "what", None) and ns.cmd != "check" else ())
    workers = ns.workers if ns.workers > 0 else (os.cpu_count() or 1)
    return CliConfig(command, ns, ns.format, ns.out, workers, ns.tie_band)


# --- output ---------------------------------------------------------------


def _g12(v) -> str:
    if v is None:
        return "error"
    if isinstance(v, int):
        return str(v)
    return f"{v:.12g}"


def render(reports, fmt: str, notes=()) -> str:
    if fmt == "json":
        docs = [r.to_dict() for r in reports]
        return json.dumps(docs[0] if len(docs) == 1 else docs, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["report", "kind", "n", "lhs", "rhs"])
        for r in reports:
            for kind, rows in (("failure", r.failures), ("near_tie", r.near_ties)):
                for n, a, b in rows:
                    w.writerow([r.name, kind, n, _g12(a), _g12(b)])
        return buf.getvalue()
    lines = [f"{'report':<24} {'range':>27} {'checked':>9} {'passed':>9} {'fail':>6} {'ties':>5} {'ms':>7}"]
    for r in reports:
        rng = f"[{r.range[0]}, {r.range[1]}]"
        lines.append(f"{r.name:<24} {rng:>27} {r.checked:>9} {r.passed:>9} "
                     f"{len(r.failures):>6} {len(r.near_ties):>5} {r.elapsed_ms:>7}")
    for r in reports:
        for n, a, b in r.failures[:20]:
            lines.append(f"  FAIL {r.name} n={n}: lhs={_g12(a)} rhs={_g12(b)}")
        if len(r.failures) > 20:
            lines.append(f"  ... {len(r.failures) - 20} more failures in {r.name}")
        for n, a, b in r.near_ties[:20]:
            lines.append(f"  TIE  {r.name} n={n}: lhs={_g12(a)} rhs={_g12(b)}")
    lines += list(notes)
    verdict = "PASS" if all(r.ok for r in reports) else "FAIL"
    lines.append(verdict)
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- commands -------------------------------------------------------------


def _params(epsilon, j_text) -> B.BoundParams:
    if epsilon is None and j_text is None:
        return B.BoundParams.corollary()
    return B.BoundParams.custom(0.5 if epsilon is None else epsilon, j_text or B.COROLLARY_J)


def _table_and_sieve(cfg: CliConfig, n_max: int, table_path: str | None, sieve_index: int = 0):
    """Build or load a table covering n_max; loaded tables get an integrity report."""
    if table_path is None:
        tab = build_table(n_max, workers=cfg.workers)
        return tab, tab.primes, []
    tab = load_table(table_path)
    if n_max > tab.n_max:
        raise InvalidInput(f"table holds n <= {tab.n_max}, range needs {n_max}")
    if sieve_index:
        primes = sieve_for_index(max(sieve_index, 1), workers=cfg.workers)
        if primes.limit < tab.scan_bound:
            primes = build_sieve(tab.scan_bound, workers=cfg.workers)
    else:
        primes = build_sieve(max(tab.scan_bound, 2), workers=cfg.workers)
    return tab, primes, [V.verify_table(tab, primes)]


def _cmd_verify(cfg: CliConfig):
    a = cfg.args
    kw = dict(workers=cfg.workers, tie_band=cfg.tie_band)
    what = cfg.command[1]
    if what == "corollary":
        if a.n_min < V.COROLLARY_START:
            raise InvalidInput(f"--n-min must be >= {V.COROLLARY_START} (corollary range)")
        if a.n_max < a.n_min:
            raise InvalidInput("--n-max below --n-min")
        tab, _, reports = _table_and_sieve(cfg, a.n_max, a.table)
        return reports + [V.verify_corollary(tab, B.BoundParams.corollary(), a.n_min, a.n_max, **kw)]
    if what == "classic":
        if a.n_min < 1 or a.n_max < a.n_min:
            raise InvalidInput("need 1 <= --n-min <= --n-max")
        if a.which == "sn2014" and a.n_min < 242:
            raise InvalidInput("sn2014 needs --n-min >= 242")
        mult = {"sondow-lower": 2, "sondow-upper": 4, "laishram": 3}.get(a.which, 1)
        tab, primes, reports = _table_and_sieve(cfg, a.n_max, a.table, mult * a.n_max)
        return reports + [V.verify_classic(tab, primes, a.which, a.n_min, a.n_max, **kw)]
    if what == "dusart":
        k_min = a.k_min if a.k_min is not None else (3 if a.side == "lower" else V.PROOF_START)
        start = 3 if a.side == "lower" else V.PROOF_START
        if k_min < start or a.k_max < k_min:
            raise InvalidInput(f"Dusart {a.side} range must satisfy {start} <= k-min <= k-max")
        primes = sieve_for_index(a.k_max, workers=cfg.workers)
        return [V.verify_dusart(primes, a.side, k_min, a.k_max, **kw)]
    reps = V.derivative_consistency(B.BoundParams.corollary(), a.points, a.rel_tol)
    return reps


def _cmd_check(cfg: CliConfig):
    a = cfg.args
    p = B.BoundParams.corollary()
    if a.n is not None:
        samples = [a.n]
    elif a.samples:
        samples = a.samples
    elif a.proof_grid:
        samples = V.proof_samples().tolist()
    else:
        samples = list(V.PRESET_SAMPLES)
    if min(samples) < 2:
        raise InvalidInput("samples must be >= 2")
    tb = cfg.tie_band
    if a.what == "eq5":
        return [V.eq5_report(samples, p.epsilon2, tb)]
    if a.what == "eq2":
        return [V.eq2_report(samples, p, tb)]
    if a.what == "eq7":
        return [V.eq7_report(samples, p, tb)]
    return list(V.check_G_negative(p, samples, tb))


def _cmd_eval(cfg: CliConfig) -> dict:
    a = cfg.args
    p = _params(a.epsilon, a.j)
    x = a.at
    if a.func == "F":
        if a.n is None:
            raise InvalidInput("F needs --n")
        value = B.F(x, a.n)
    else:
        value = {
            "L": B.L, "U": B.U, "f": B.f, "Uprime": B.U_prime, "Lprime": B.L_prime,
            "G": lambda v: B.G(v, p), "alpha": lambda v: B.alpha(v, p),
            "g": lambda v: B.g(v, p), "A": lambda v: B.A(v, p),
            "Gprime": lambda v: B.G_prime_formula(v, p),
        }[a.func](x)
    return {"func": a.func, "at": x, "n": a.n, "value": value, "params": p.as_dict()}


def run(cfg: CliConfig) -> int:
    cmd = cfg.command[0]
    notes: list[str] = []
    if cmd == "table":
        tab = build_table(cfg.args.n_max, workers=cfg.workers)
        if cfg.out:
            save_table(tab, cfg.out)
            print(f"wrote {tab.n_max} rows to {cfg.out} (scan bound {tab.scan_bound})",
                  file=sys.stderr)
        else:
            sys.stdout.write(format_table(tab))
        return 0
    if cmd == "threshold":
        eps2 = cfg.args.eps2
        n0, cross = V.eq4_threshold(eps2), V.eq4_crossover(eps2)
        if cfg.format == "json":
            text = json.dumps({"name": "eq4-threshold", "eps2": eps2, "threshold": n0,
                               "crossover": cross}, indent=2) + "\n"
        elif cfg.format == "csv":
            text = f"name,eps2,threshold,crossover\neq4-threshold,{_g12(eps2)},{n0},{_g12(cross)}\n"
        else:
            text = f"{n0}\n"
            print(f"real crossover {cross:.12g}; predicate holds for n >= {n0}", file=sys.stderr)
        _emit(text, cfg.out)
        return 0
    if cmd == "eval":
        res = _cmd_eval(cfg)
        if cfg.format == "json":
            text = json.dumps(res, indent=2) + "\n"
        elif cfg.format == "csv":
            text = f"func,at,n,value\n{res['func']},{_g12(res['at'])},{res['n'] or ''},{_g12(res['value'])}\n"
        else:
            text = _g12(res["value"]) + "\n"
        _emit(text, cfg.out)
        return 0
    if cmd == "verify":
        reports = _cmd_verify(cfg)
    elif cmd == "check":
        reports = _cmd_check(cfg)
    else:  # explore
        a = cfg.args
        p = B.BoundParams.custom(a.epsilon, a.j)
        tab = load_table(a.table) if a.table else None
        result = V.explore_theorem(p, a.cap, tab, workers=cfg.workers, tie_band=cfg.tie_band)
        reports = result.reports
        if tab is not None:
            primes = build_sieve(max(tab.scan_bound, 2), workers=cfg.workers)
            reports.insert(0, V.verify_table(tab, primes))
        notes.append(f"empirical N = {result.empirical_N}  ({result.summary()})")
        for r in reports:
            if r.name.startswith("hyp-") and r.failures:
                log.warning("hypothesis screen %s failed at %d sample(s)", r.name, len(r.failures))
        print(notes[-1], file=sys.stderr)
    _emit(render(reports, cfg.format, notes), cfg.out)
    return 0 if all(r.ok for r in reports) else 1


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        cfg = parse_args(argv)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)
    try:
        return run(cfg)
    except RamVerifyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except MemoryError:
        print("error: out of memory", file=sys.stderr)
        return ResourceLimit.exit_code
