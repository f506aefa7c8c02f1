"""Ramanujan primes R_n and their prime indices s (R_n = p_s).

rho(x) = pi(x) - pi(x // 2) counts primes in (x/2, x].  R_n is one more than
the largest x with rho(x) = n - 1, so a single ascending scan up to a bound
B >= R_{n_max} gives every R_n at once.  B = p_{4 n_max} always suffices.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bounds
from .errors import CorruptCache, InternalError, InvalidInput, OutOfRange
from .prime_engine import PrimeTable, build_sieve

log = logging.getLogger(__name__)

SCAN_CHUNK = 1 << 22
STEP_SAMPLES = 10_000
HEADER = "# ramanujan-table v1"


def rho(t: PrimeTable, x: int) -> int:
    if x < 2:
        raise InvalidInput(f"rho needs x >= 2, got {x}")
    return t.prime_count(x) - t.prime_count(x // 2)


def rho_many(t: PrimeTable, xs) -> np.ndarray:
    xs = np.asarray(xs, dtype=np.int64)
    return t.prime_count_many(xs) - t.prime_count_many(xs // 2)


@dataclass(eq=False)
class RamanujanTable:
    n_max: int
    r: np.ndarray  # r[n-1] = R_n
    s: np.ndarray  # s[n-1] = index of R_n among the primes
    scan_bound: int
    primes: PrimeTable | None = field(default=None, repr=False)

    def __eq__(self, other):
        if not isinstance(other, RamanujanTable):
            return NotImplemented
        return (
            self.n_max == other.n_max
            and self.scan_bound == other.scan_bound
            and np.array_equal(self.r, other.r)
            and np.array_equal(self.s, other.s)
        )

    def _check(self, n: int) -> None:
        if not 1 <= n <= self.n_max:
            raise OutOfRange(f"n={n} outside table range [1, {self.n_max}]")

    def ramanujan(self, n: int) -> int:
        self._check(n)
        return int(self.r[n - 1])

    def index_s(self, n: int) -> int:
        self._check(n)
        return int(self.s[n - 1])


def sieve_for_index(k: int, workers: int = 1) -> PrimeTable:
    """Sieve far enough to contain p_k: start at 1.1 U(k), grow by 1.5 on shortfall."""
    if k < 1:
        raise InvalidInput(f"prime index must be >= 1, got {k}")
    limit = 100
    if k >= 3:
        limit = max(limit, math.ceil(1.1 * bounds.U(k)))
    while True:
        t = build_sieve(limit, workers=workers)
        if t.prime_count_total >= k:
            return t
        log.info("sieve to %d holds only %d primes, need %d; growing", limit, t.prime_count_total, k)
        limit = math.ceil(limit * 1.5)


def _scan(t: PrimeTable, bound: int, n_max: int, probes: np.ndarray):
    """Ascending scan of rho over x in [1, bound].

    Returns ``last`` (last[v] = largest x <= bound with rho(x) = v, 0 if
    never seen), rho(bound), and rho at each probe point.
    """
    last = np.zeros(n_max, dtype=np.int64)
    probe_vals = np.zeros(probes.size, dtype=np.int64)
    carry = 0  # rho(x0 - 1); rho(0) = 0
    for x0 in range(1, bound + 1, SCAN_CHUNK):
        x1 = min(x0 + SCAN_CHUNK, bound + 1)
        xs = np.arange(x0, x1, dtype=np.int64)
        inc = t.is_prime_range(x0, x1).astype(np.int8)
        # rho drops by one when x is even and x/2 is prime
        ev0 = x0 + (x0 & 1)
        if ev0 < x1:
            half = t.is_prime_range(ev0 // 2, (x1 - 1) // 2 + 1)
            inc[ev0 - x0 :: 2] -= half.astype(np.int8)
        r = carry + np.cumsum(inc, dtype=np.int64)
        carry = int(r[-1])

        sel = r < n_max
        if sel.any():
            vals, pos = r[sel][::-1], xs[sel][::-1]
            uniq, first = np.unique(vals, return_index=True)
            last[uniq] = pos[first]

        inside = (probes >= x0) & (probes < x1)
        probe_vals[inside] = r[probes[inside] - x0]
    return last, carry, probe_vals


def build_table(n_max: int, primes: PrimeTable | None = None, workers: int = 1,
                seed: int = 0) -> RamanujanTable:
    if n_max < 1:
        raise InvalidInput(f"n_max must be >= 1, got {n_max}")
    t = primes
    if t is None or t.prime_count_total < 4 * n_max:
        t = sieve_for_index(4 * n_max, workers=workers)
    bound = t.nth_prime(4 * n_max)

    rng = np.random.default_rng(seed)
    probes = np.unique(rng.integers(2, bound + 1, size=STEP_SAMPLES))
    last, rho_bound, probe_vals = _scan(t, bound, n_max, probes)

    if rho_bound < n_max:
        raise InternalError(f"rho({bound}) = {rho_bound} < n_max = {n_max}")
    direct = rho_many(t, probes)
    bad = np.flatnonzero(direct != probe_vals)
    if bad.size:
        x = int(probes[bad[0]])
        raise InternalError(f"incremental rho disagrees with pi differencing at x={x}")
    missing = np.flatnonzero(last == 0)
    if missing.size:
        raise InternalError(f"no x with rho(x) = {int(missing[0])} below bound {bound}")

    r = last + 1
    s = t.prime_count_many(r)
    tab = RamanujanTable(n_max, r, s, bound, primes=t)
    bad_n = check_invariants(tab, t)
    if bad_n:
        raise InternalError(f"Ramanujan table invariant violated at n={bad_n[0]}")
    return tab


def check_invariants(tab: RamanujanTable, t: PrimeTable) -> list[int]:
    """n values whose (R_n, s) entry breaks any table invariant."""
    n = np.arange(1, tab.n_max + 1, dtype=np.int64)
    r, s = tab.r, tab.s
    if r.max() > t.limit:
        raise OutOfRange(f"table entries exceed sieve limit {t.limit}")
    ok = t.is_prime_many(r)
    ok &= rho_many(t, np.maximum(r, 2)) == n
    ok &= rho_many(t, np.maximum(r - 1, 0)) == n - 1
    ok &= t.prime_count_many(r) == s
    mono = np.ones(tab.n_max, dtype=bool)
    mono[1:] = (np.diff(r) > 0) & (np.diff(s) > 0)
    ok &= mono
    return [int(v) for v in n[~ok]]


def format_table(tab: RamanujanTable) -> str:
    lines = [f"{HEADER} n_max={tab.n_max} scan_bound={tab.scan_bound}", "n,r,s"]
    lines += [f"{i + 1},{r},{s}" for i, (r, s) in enumerate(zip(tab.r.tolist(), tab.s.tolist()))]
    return "\n".join(lines) + "\n"


def save_table(tab: RamanujanTable, destination) -> None:
    Path(destination).write_text(format_table(tab), encoding="utf-8", newline="\n")


def load_table(source) -> RamanujanTable:
    text = Path(source).read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) < 2:
        raise CorruptCache("table file truncated")
    head = lines[0].split()
    try:
        if " ".join(head[:3]) != HEADER or len(head) != 5:
            raise ValueError
        kv = dict(item.split("=", 1) for item in head[3:])
        n_max, bound = int(kv["n_max"]), int(kv["scan_bound"])
    except (ValueError, KeyError):
        raise CorruptCache(f"malformed header: {lines[0]!r}") from None
    if lines[1] != "n,r,s":
        raise CorruptCache(f"bad column header: {lines[1]!r}")
    rows = lines[2:]
    if len(rows) != n_max:
        raise CorruptCache(f"header says n_max={n_max} but file has {len(rows)} rows")
    fields = [row.split(",") for row in rows]
    if any(len(f) != 3 for f in fields):
        raise CorruptCache("rows must have exactly three fields")
    try:
        data = np.array([[int(v) for v in f] for f in fields], dtype=np.int64).reshape(-1, 3)
    except ValueError:
        raise CorruptCache("non-integer field in table rows") from None
    if not np.array_equal(data[:, 0], np.arange(1, n_max + 1)):
        raise CorruptCache("row n column is not 1..n_max")
    r, s = data[:, 1].copy(), data[:, 2].copy()
    if np.any(np.diff(r) <= 0) or np.any(np.diff(s) <= 0):
        raise CorruptCache("rows are not strictly increasing in r and s")
    if r[-1] > bound:
        raise CorruptCache("R_n exceeds the recorded scan bound")
    return RamanujanTable(n_max, r, s, bound)
