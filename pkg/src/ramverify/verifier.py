"""Verification sweeps over Ramanujan tables, prime tables and the bound functions.

Every sweep returns an :class:`InequalityReport` for a strict inequality
``lhs < rhs`` checked at many points.  A comparison whose gap is within
``tie_band * max(1, |rhs|)`` is counted as passed but always listed in
``near_ties``.  Comparisons between exact integers use no tie band.
"""
from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import bounds as B
from .errors import InvalidInput, OutOfRange, RamVerifyError
from .prime_engine import PrimeTable
from .ramanujan_core import RamanujanTable, check_invariants

TIE_BAND = 1e-9
CHUNK = 1 << 17
COROLLARY_START = 44
PROOF_START = 688383  # Dusart's upper bound holds from here
PRESET_SAMPLES = (688384, 10**6, 10**7, 10**8, 10**10)
DERIVATIVE_POINTS = (10**3, 10**5, 10**8)
CLASSIC = ("sondow-lower", "sondow-upper", "laishram", "sn2014", "lemma221")


def _num(v):
    if v is None:
        return None
    if isinstance(v, (int, np.integer)):
        return int(v)
    return float(v)


@dataclass
class InequalityReport:
    name: str
    range: tuple[int, int]
    checked: int = 0
    passed: int = 0
    failures: list = field(default_factory=list)
    near_ties: list = field(default_factory=list)
    tie_band: float = TIE_BAND
    elapsed_ms: int = 0
    params: dict | None = None

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self, zero_elapsed: bool = False) -> dict:
        def rows(items):
            return [{"n": int(n), "lhs": _num(a), "rhs": _num(b)} for n, a, b in items]

        return {
            "name": self.name,
            "range": [int(self.range[0]), int(self.range[1])],
            "checked": self.checked,
            "passed": self.passed,
            "failures": rows(self.failures),
            "near_ties": rows(self.near_ties),
            "tie_band": self.tie_band,
            "elapsed_ms": 0 if zero_elapsed else self.elapsed_ms,
            "params": self.params,
        }

    def to_json(self, zero_elapsed: bool = False) -> str:
        return json.dumps(self.to_dict(zero_elapsed))

    def add(self, n, lhs, rhs, *, exact=False, strict=True) -> None:
        """Record a single comparison; lhs=None marks an evaluation error."""
        self.checked += 1
        if lhs is None or rhs is None:
            self.failures.append((n, lhs, rhs))
            return
        ok = lhs < rhs if strict else lhs <= rhs
        tie = not exact and abs(rhs - lhs) <= self.tie_band * max(1.0, abs(rhs))
        if tie:
            self.near_ties.append((n, lhs, rhs))
        if ok or tie:
            self.passed += 1
        else:
            self.failures.append((n, lhs, rhs))


def _compare(n, lhs, rhs, tie_band, exact):
    """Vectorised strict check lhs < rhs; returns (checked, passed, failures, ties)."""
    n = np.asarray(n)
    lhs = np.asarray(lhs)
    rhs = np.asarray(rhs)
    ok = lhs < rhs
    if exact:
        tie = np.zeros_like(ok)
    else:
        gap = np.abs(rhs.astype(float) - lhs.astype(float))
        tie = gap <= tie_band * np.maximum(1.0, np.abs(rhs.astype(float)))
    bad = ~(ok | tie)
    fail = list(zip(n[bad].tolist(), lhs[bad].tolist(), rhs[bad].tolist()))
    ties = list(zip(n[tie].tolist(), lhs[tie].tolist(), rhs[tie].tolist()))
    return n.size, n.size - len(fail), fail, ties


def _sweep(name, lo, hi, chunk_fn, *, workers=1, tie_band=TIE_BAND, exact=False, params=None):
    """Run ``chunk_fn(a, b) -> (n, lhs, rhs)`` over fixed chunks of [lo, hi] and merge.

    Chunk boundaries do not depend on ``workers``, so the merged report is
    identical for any worker count.
    """
    t0 = time.perf_counter()
    spans = [(a, min(a + CHUNK - 1, hi)) for a in range(lo, hi + 1, CHUNK)]

    def run(span):
        return _compare(*chunk_fn(*span), tie_band, exact)

    if workers > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, spans))
    else:
        parts = [run(sp) for sp in spans]
    rep = InequalityReport(name, (lo, hi), tie_band=tie_band, params=params)
    for checked, passed, fail, ties in parts:
        rep.checked += checked
        rep.passed += passed
        rep.failures += fail
        rep.near_ties += ties
    rep.failures.sort(key=lambda row: row[0])
    rep.near_ties.sort(key=lambda row: row[0])
    rep.elapsed_ms = int((time.perf_counter() - t0) * 1000)
    return rep


# --- table-based sweeps -----------------------------------------------------


def verify_s_below_alpha(tab: RamanujanTable, p: B.BoundParams, lo: int, hi: int, *,
                         name="s-below-alpha", workers=1, tie_band=TIE_BAND) -> InequalityReport:
    if not 1 <= lo <= hi <= tab.n_max:
        raise InvalidInput(f"range [{lo}, {hi}] outside table range [1, {tab.n_max}]")

    def chunk(a, b):
        n = np.arange(a, b + 1, dtype=np.int64)
        return n, tab.s[a - 1 : b], B.alpha(n, p)

    return _sweep(name, lo, hi, chunk, workers=workers, tie_band=tie_band, params=p.as_dict())


def verify_corollary(tab: RamanujanTable, p: B.BoundParams, lo: int, hi: int, *,
                     workers=1, tie_band=TIE_BAND) -> InequalityReport:
    """s < alpha(n) for every n in [lo, hi]; the corollary range starts at 44."""
    if lo < COROLLARY_START:
        raise InvalidInput(f"corollary range starts at n={COROLLARY_START}, got n_min={lo}")
    return verify_s_below_alpha(tab, p, lo, hi, name="corollary", workers=workers,
                                tie_band=tie_band)


def verify_classic(tab: RamanujanTable, primes: PrimeTable, which: str, lo: int, hi: int, *,
                   workers=1, tie_band=TIE_BAND) -> InequalityReport:
    """Earlier bounds on R_n, one per ``which``:

    sondow-lower  p_{2n} < R_n
    sondow-upper  R_n < p_{4n}
    laishram      R_n < p_{3n}
    sn2014        s < 2n (1 + 3 / (log n + log log n - 4)), n >= 242
    lemma221      p_{s-n} < R_n / 2, skipping n with s <= n
    """
    if which not in CLASSIC:
        raise InvalidInput(f"unknown classic bound {which!r}; choose from {', '.join(CLASSIC)}")
    if not 1 <= lo <= hi <= tab.n_max:
        raise InvalidInput(f"range [{lo}, {hi}] outside table range [1, {tab.n_max}]")
    if which == "sn2014" and lo < 242:
        raise InvalidInput("sn2014 bound is stated for n > 241")
    need = {"sondow-lower": 2, "sondow-upper": 4, "laishram": 3}.get(which)
    if need and need * hi > primes.prime_count_total:
        raise OutOfRange(f"p_{need * hi} lies beyond the sieve limit {primes.limit}")

    def chunk(a, b):
        n = np.arange(a, b + 1, dtype=np.int64)
        r, s = tab.r[a - 1 : b], tab.s[a - 1 : b]
        if which == "sondow-lower":
            return n, primes.nth_prime_many(2 * n), r
        if which == "sondow-upper":
            return n, r, primes.nth_prime_many(4 * n)
        if which == "laishram":
            return n, r, primes.nth_prime_many(3 * n)
        if which == "sn2014":
            nf = n.astype(float)
            return n, s, 2 * nf * (1 + 3 / (np.log(nf) + np.log(np.log(nf)) - 4))
        keep = s > n
        # compare 2 p_{s-n} < R_n in integers
        return n[keep], 2 * primes.nth_prime_many(s[keep] - n[keep]), r[keep]

    return _sweep(which, lo, hi, chunk, workers=workers, tie_band=tie_band,
                  exact=which != "sn2014")


def verify_table(tab: RamanujanTable, primes: PrimeTable) -> InequalityReport:
    """Re-derive every table invariant against a sieve.

    A failing row is reported as (n, stored R_n, stored s).
    """
    t0 = time.perf_counter()
    rep = InequalityReport("table-integrity", (1, tab.n_max))
    bad = set(check_invariants(tab, primes))
    rep.checked = tab.n_max
    rep.passed = tab.n_max - len(bad)
    rep.failures = [(n, int(tab.r[n - 1]), int(tab.s[n - 1])) for n in sorted(bad)]
    rep.elapsed_ms = int((time.perf_counter() - t0) * 1000)
    return rep


def verify_dusart(t: PrimeTable, side: str, k_lo: int, k_hi: int, *, workers=1,
                  tie_band=TIE_BAND) -> InequalityReport:
    """L(k) < p_k for k >= 3 (lower) or p_k < U(k) for k >= 688383 (upper)."""
    if side not in ("lower", "upper"):
        raise InvalidInput(f"side must be 'lower' or 'upper', got {side!r}")
    start = 3 if side == "lower" else PROOF_START
    if k_lo < start:
        raise InvalidInput(f"Dusart {side} bound is stated for k >= {start}, got {k_lo}")
    if k_hi < k_lo:
        raise InvalidInput(f"empty range [{k_lo}, {k_hi}]")
    if k_hi > t.prime_count_total:
        raise OutOfRange(f"p_{k_hi} lies beyond the sieve limit {t.limit}")

    def chunk(a, b):
        k = np.arange(a, b + 1, dtype=np.int64)
        pk = t.nth_prime_many(k)
        if side == "lower":
            return k, B.L(k.astype(float)), pk
        return k, pk, B.U(k.astype(float))

    return _sweep(f"dusart-{side}", k_lo, k_hi, chunk, workers=workers, tie_band=tie_band)


# --- threshold and proof-inequality checks -----------------------------------


def eq4_crossover(eps2: float = 0.4) -> float:
    """Real n where 2.4 = n^(e^(eps2/5) - 1)."""
    if not eps2 > 0:
        raise InvalidInput("eps2 must be positive")
    return math.exp(math.log(2.4) / math.expm1(eps2 / 5))


def eq4_holds(n: int, eps2: float = 0.4) -> bool:
    # 2.4 < n^(e^(eps2/5) - 1), in log form so huge n cannot overflow
    return math.log(2.4) < math.expm1(eps2 / 5) * math.log(n)


def eq4_threshold(eps2: float = 0.4) -> int:
    """Smallest integer n with 2.4 < n^(e^(eps2/5) - 1), by binary search.

    The ten integers either side of the boundary are re-checked directly.
    """
    if not eps2 > 0:
        raise InvalidInput("eps2 must be positive")
    lo, hi = 1, 2  # predicate false at lo, true at hi
    while not eq4_holds(hi, eps2):
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if eq4_holds(mid, eps2):
            hi = mid
        else:
            lo = mid
    n0 = hi
    for n in range(max(1, n0 - 10), n0 + 11):
        if eq4_holds(n, eps2) != (n >= n0):
            raise RamVerifyError(f"eq4 predicate not monotone near {n0} (at n={n})")
    return n0


def eq5_value(n):
    n = np.asarray(n, dtype=float)
    ln = B.log(n)
    return B._ret(B.loglog(2.4 * n) / B.log(2 * n) + 1.1 / ln + B.loglog(1.4 * n) / ln**2)


def eq5_check(n, eps2: float = 0.4) -> tuple[float, bool]:
    v = eq5_value(n)
    return v, bool(v < 4 * eps2 / 5)


def eq2_sides(n, p: B.BoundParams):
    """(n g'/g^2 in the closed form of the corollary, epsilon1 / denominator)."""
    n = np.asarray(n, dtype=float)
    ln = B.log(n)
    den = ln + B.loglog(n) - B.LOG2 - p.epsilon
    lhs = (B.LOG2 + p.epsilon) * (1 + ln) / (ln * den**2)
    return B._ret(lhs), B._ret(p.epsilon1 / den)


def eq2_check(n, p: B.BoundParams) -> bool:
    lhs, rhs = eq2_sides(n, p)
    return bool(lhs < rhs)


def eq7_sides(n, p: B.BoundParams):
    """Left side of the composite G' < 0 inequality and its target 1/g(n)."""
    a, am = B._alpha_minus_n(n, p)
    big_a = np.asarray(B.A(n, p))
    fp = np.asarray(B.f_prime(am))
    gn = np.asarray(B.g(n, p))
    ratio = (big_a + fp) / (-big_a + np.asarray(B.U_prime(am)) - 2 * fp)
    ngg = np.asarray(n, dtype=float) * np.asarray(B.g_prime(n, p)) / gn**2
    return B._ret(ratio + ngg), B._ret(1 / gn)


def proof_samples(dense_to: int = 10**6, top: int = 10**12, per_decade: int = 10) -> np.ndarray:
    """Every integer in (688383, dense_to], then log-spaced points up to ``top``."""
    dense = np.arange(PROOF_START + 1, dense_to + 1, dtype=np.int64)
    decades = int(round(math.log10(top / dense_to)))
    sparse = np.unique(np.round(np.geomspace(dense_to, top, decades * per_decade + 1)).astype(np.int64))
    return np.union1d(dense, sparse)


def _sample_report(name, samples, func, p=None, tie_band=TIE_BAND, force=()):
    """Evaluate ``func(n) -> (lhs, rhs)`` per sample; errors become failures."""
    t0 = time.perf_counter()
    ns = sorted(set(int(n) for n in samples) | set(force))
    rep = InequalityReport(name, (ns[0], ns[-1]) if ns else (0, 0), tie_band=tie_band,
                           params=p.as_dict() if p else None)
    for n in ns:
        try:
            lhs, rhs = func(n)
        except RamVerifyError:
            lhs, rhs = None, None
        rep.add(n, lhs, rhs)
    rep.elapsed_ms = int((time.perf_counter() - t0) * 1000)
    return rep


def _vector_report(name, ns, lhs, rhs, p=None, tie_band=TIE_BAND):
    t0 = time.perf_counter()
    checked, passed, fail, ties = _compare(ns, lhs, rhs, tie_band, exact=False)
    rep = InequalityReport(name, (int(ns[0]), int(ns[-1])), checked, passed, fail, ties,
                           tie_band, params=p.as_dict() if p else None)
    rep.elapsed_ms = int((time.perf_counter() - t0) * 1000)
    return rep


def eq5_report(samples, eps2: float = 0.4, tie_band=TIE_BAND) -> InequalityReport:
    ns = np.asarray(sorted(set(int(n) for n in samples)), dtype=np.int64)
    vals = np.atleast_1d(eq5_value(ns))
    return _vector_report("eq5", ns, vals, np.full(ns.size, 4 * eps2 / 5), tie_band=tie_band)


def eq2_report(samples, p: B.BoundParams, tie_band=TIE_BAND) -> InequalityReport:
    ns = np.asarray(sorted(set(int(n) for n in samples)), dtype=np.int64)
    lhs, rhs = eq2_sides(ns, p)
    return _vector_report("eq2", ns, np.atleast_1d(lhs), np.atleast_1d(rhs), p, tie_band)


def eq7_report(samples, p: B.BoundParams, tie_band=TIE_BAND) -> InequalityReport:
    ns = np.asarray(sorted(set(int(n) for n in samples)), dtype=np.int64)
    lhs, rhs = eq7_sides(ns, p)
    return _vector_report("eq7", ns, np.atleast_1d(lhs), np.atleast_1d(rhs), p, tie_band)


def check_G_negative(p: B.BoundParams, samples, tie_band=TIE_BAND):
    """Reports for G(n) < 0 and G'(n) < 0; n = 688383 is always included.

    A sample outside G's domain shows up as a failure with lhs = None.
    """
    g_rep = _sample_report("G-negative", samples, lambda n: (B.G(n, p), 0.0), p, tie_band,
                           force=(PROOF_START,))
    gp_rep = _sample_report("Gprime-negative", samples,
                            lambda n: (B.G_prime_formula(n, p), 0.0), p, tie_band,
                            force=(PROOF_START,))
    return g_rep, gp_rep


def derivative_consistency(p: B.BoundParams, points, rel_tol: float = 1e-5):
    """Closed-form derivatives against central differences (step x * 1e-5).

    One report per derivative; lhs is the relative error, rhs the tolerance.
    """
    pairs = [
        ("Uprime", B.U_prime, B.U),
        ("Lprime", B.L_prime, B.L),
        ("fprime", B.f_prime, B.f),
        ("Gprime", lambda x: B.G_prime_formula(x, p), lambda x: B.G(x, p)),
    ]
    out = []
    for label, deriv, func in pairs:
        def rel_err(x, deriv=deriv, func=func):
            exact = deriv(float(x))
            fd = B.central_difference(func, float(x))
            return abs(exact - fd) / max(abs(fd), 1e-300), rel_tol

        rep = _sample_report(f"derivative-{label}", points, rel_err, p, tie_band=0.0)
        out.append(rep)
    return out


# --- Theorem explorer ---------------------------------------------------------


@dataclass
class ExploreResult:
    empirical_N: int | None
    n_cap: int
    reports: list
    label: str = "EMPIRICAL"

    def summary(self) -> str:
        if self.empirical_N is None:
            return f"{self.label}: G(n) >= 0 at n_cap={self.n_cap}; no N found below the cap"
        return (f"{self.label}: G(n) < 0 at every sampled n in ({self.empirical_N}, {self.n_cap}];"
                f" valid only up to n_cap")


def _hypothesis_reports(p: B.BoundParams, n_cap: int, tie_band):
    ns = np.unique(np.round(np.geomspace(100, n_cap, 4 * int(math.log10(n_cap / 100)) + 1))
                   .astype(np.int64))
    reps = []

    def safe(func, n):
        try:
            return float(func(n))
        except RamVerifyError:
            return None

    jv = [safe(p.j, n) for n in ns]
    njp = [safe(lambda m: m * p.j_prime(m), n) for n in ns]
    gv = [safe(lambda m: B.g(m, p), n) for n in ns]

    pos = InequalityReport("hyp-j-positive", (int(ns[0]), int(ns[-1])), tie_band=tie_band,
                           params=p.as_dict())
    for n, v in zip(ns, jv):
        pos.add(int(n), 0.0, v)
    gge = InequalityReport("hyp-g-at-least-1", pos.range, tie_band=tie_band, params=p.as_dict())
    for n, v in zip(ns, gv):
        gge.add(int(n), 1.0, v, strict=False)
    inc = InequalityReport("hyp-j-increasing", pos.range, tie_band=tie_band, params=p.as_dict())
    dec = InequalityReport("hyp-nj'-to-zero", pos.range, tie_band=tie_band, params=p.as_dict())
    for i in range(1, len(ns)):
        n = int(ns[i])
        prev_ok = jv[i - 1] is not None and jv[i] is not None
        inc.add(n, jv[i - 1] if prev_ok else None, jv[i] if prev_ok else None)
        both = njp[i - 1] is not None and njp[i] is not None
        dec.add(n, abs(njp[i]) if both else None, abs(njp[i - 1]) if both else None)
    return [pos, gge, inc, dec]


def _safe_mask(pred, ns: np.ndarray) -> np.ndarray:
    """Vectorised ``pred(ns)``; points where evaluation raises count as False.

    A failing chunk is halved until the offending points are isolated.
    """
    if ns.size == 0:
        return np.zeros(0, dtype=bool)
    if ns.size > CHUNK:
        return np.concatenate([_safe_mask(pred, ns[a : a + CHUNK])
                               for a in range(0, ns.size, CHUNK)])
    try:
        return np.asarray(pred(ns), dtype=bool)
    except RamVerifyError:
        if ns.size == 1:
            return np.zeros(1, dtype=bool)
    mid = ns.size // 2
    return np.concatenate([_safe_mask(pred, ns[:mid]), _safe_mask(pred, ns[mid:])])


def explore_theorem(p: B.BoundParams, n_cap: int, table: RamanujanTable | None = None, *,
                    dense_to: int = 10**6, workers=1, tie_band=TIE_BAND) -> ExploreResult:
    """Empirical search for the N after which G(n) < 0 for a custom j(n).

    G is evaluated at every integer up to ``dense_to`` and at log-spaced
    points above it.  N is the largest sampled n where G(n) < 0 fails (or is
    undefined); None when that happens at the cap itself.  The result only
    speaks for n <= n_cap.
    """
    if n_cap < 10**4:
        raise InvalidInput("n_cap must be at least 10^4")
    reports = _hypothesis_reports(p, n_cap, tie_band)

    dense = np.arange(2, min(n_cap, dense_to) + 1, dtype=np.int64)
    sparse = np.array([], dtype=np.int64)
    if n_cap > dense_to:
        count = 20 * max(1, math.ceil(math.log10(n_cap / dense_to)))
        sparse = np.unique(np.round(np.geomspace(dense_to, n_cap, count + 1)).astype(np.int64))
    grid = np.union1d(dense, sparse)
    neg = _safe_mask(lambda m: np.asarray(B.G(m.astype(float), p)) < 0, grid)
    bad = np.flatnonzero(~neg)
    if bad.size == 0:
        N = int(grid[0]) - 1
    elif bad[-1] == grid.size - 1:
        N = None
    else:
        N = int(grid[bad[-1]])

    if N is not None:
        rest = grid[grid > N]
        rep = InequalityReport("theorem-G-negative", (N + 1, n_cap), rest.size, rest.size,
                               tie_band=tie_band, params=p.as_dict())
        reports.append(rep)
        if table is not None and N < table.n_max:
            hi = min(n_cap, table.n_max)
            reports.append(verify_s_below_alpha(table, p, N + 1, hi, name="theorem-s-below-alpha",
                                                workers=workers, tie_band=tie_band))
    return ExploreResult(N, n_cap, reports)


def alpha_window_holds_from(p: B.BoundParams, hi: int) -> int | None:
    """Smallest n0 such that 2n < alpha(n) < 2.4n for every n in [n0, hi]."""
    n = np.arange(2, hi + 1, dtype=np.int64)

    def inside(m):
        al = np.asarray(B.alpha(m, p))
        return (2 * m < al) & (al < 2.4 * m)

    ok = _safe_mask(inside, n)
    bad = np.flatnonzero(~ok)
    if bad.size == 0:
        return 2
    if bad[-1] == n.size - 1:
        return None
    return int(n[bad[-1]] + 1)
