"""Segmented, bit-packed sieve of Eratosthenes over the odd integers.

Bit ``i`` of ``odd_bits`` (little-endian within each byte) stands for the
odd number ``2*i + 1``; the prime 2 is handled separately.  Cumulative prime
counts are kept every ``BLOCK_BITS`` bits so that pi(x) is one table lookup
plus a popcount over at most one block.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInput, OutOfRange, ResourceLimit

BLOCK_BITS = 1 << 16
BLOCK_BYTES = BLOCK_BITS // 8
SEGMENT_BITS = 1 << 18  # odd numbers per sieving segment (256 KiB of bool scratch)
DEFAULT_MEMORY_MB = 1024

_POPCOUNT = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint8)


def memory_budget_mb() -> int:
    return int(os.environ.get("RP_VERIFY_MEMORY_MB", DEFAULT_MEMORY_MB))


def estimate_bytes(limit: int) -> int:
    """Rough resident size of a finished table, including the lazily built prime list."""
    bits = limit // 16 + 1
    blocks = 8 * (bits // BLOCK_BYTES + 1)
    n_primes = 1.3 * limit / math.log(max(limit, 3))
    return int(bits + blocks + 8 * n_primes)


def _small_primes(n: int) -> np.ndarray:
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve)


@dataclass(eq=False)
class PrimeTable:
    limit: int
    odd_bits: np.ndarray
    block_counts: np.ndarray
    prime_count_total: int
    _primes: np.ndarray | None = field(default=None, repr=False)

    def _check(self, x: int) -> None:
        if x < 0 or x > self.limit:
            raise OutOfRange(f"{x} outside sieved range [0, {self.limit}]")

    def is_prime(self, x: int) -> bool:
        self._check(x)
        if x < 3:
            return x == 2
        if x % 2 == 0:
            return False
        i = (x - 1) >> 1
        return bool((self.odd_bits[i >> 3] >> (i & 7)) & 1)

    def prime_count(self, x: int) -> int:
        self._check(x)
        if x < 2:
            return 0
        i = (x - 1) >> 1  # last odd index <= x
        b = i // BLOCK_BITS
        count = int(self.block_counts[b - 1]) if b else 1
        start = b * BLOCK_BYTES
        full = i >> 3
        count += int(_POPCOUNT[self.odd_bits[start:full]].sum(dtype=np.int64))
        last = int(self.odd_bits[full]) & ((2 << (i & 7)) - 1)
        return count + last.bit_count()

    def nth_prime(self, k: int) -> int:
        if k < 1:
            raise InvalidInput(f"prime index must be >= 1, got {k}")
        if k > self.prime_count_total:
            raise OutOfRange(
                f"p_{k} beyond sieve: only {self.prime_count_total} primes <= {self.limit}"
            )
        if k == 1:
            return 2
        b = int(np.searchsorted(self.block_counts, k, side="left"))
        before = int(self.block_counts[b - 1]) if b else 1
        chunk = self.odd_bits[b * BLOCK_BYTES : (b + 1) * BLOCK_BYTES]
        idx = np.flatnonzero(np.unpackbits(chunk, bitorder="little"))
        i = b * BLOCK_BITS + int(idx[k - before - 1])
        return 2 * i + 1

    # vectorised views, used by the sweeps

    @property
    def primes(self) -> np.ndarray:
        """All primes <= limit as int64, materialised on first use."""
        if self._primes is None:
            bits = np.unpackbits(self.odd_bits, bitorder="little")
            odd = np.flatnonzero(bits).astype(np.int64) * 2 + 1
            odd = odd[odd <= self.limit]
            self._primes = np.concatenate([np.array([2], dtype=np.int64), odd])
        return self._primes

    def is_prime_many(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        if xs.size and (xs.min() < 0 or xs.max() > self.limit):
            raise OutOfRange(f"query outside sieved range [0, {self.limit}]")
        i = (xs - 1) >> 1
        i = np.where(xs >= 1, i, 0)
        bit = (self.odd_bits[i >> 3] >> (i & 7).astype(np.uint8)) & 1
        return ((xs & 1) == 1) & (bit == 1) | (xs == 2)

    def is_prime_range(self, lo: int, hi: int) -> np.ndarray:
        """Boolean primality for every integer in [lo, hi)."""
        if lo < 0 or hi - 1 > self.limit:
            raise OutOfRange(f"range [{lo}, {hi}) outside sieved range")
        out = np.zeros(max(hi - lo, 0), dtype=bool)
        if hi <= lo:
            return out
        first_odd = lo | 1
        if first_odd < hi:
            i0 = (first_odd - 1) >> 1
            i1 = (hi - 2) >> 1  # last odd index < hi
            b0, b1 = i0 >> 3, (i1 >> 3) + 1
            bits = np.unpackbits(self.odd_bits[b0:b1], bitorder="little")
            out[first_odd - lo :: 2] = bits[i0 - 8 * b0 : i1 - 8 * b0 + 1].astype(bool)
        if lo <= 2 < hi:
            out[2 - lo] = True
        return out

    def prime_count_many(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        if xs.size and (xs.min() < 0 or xs.max() > self.limit):
            raise OutOfRange(f"query outside sieved range [0, {self.limit}]")
        return np.searchsorted(self.primes, xs, side="right").astype(np.int64)

    def nth_prime_many(self, ks) -> np.ndarray:
        ks = np.asarray(ks, dtype=np.int64)
        if ks.size and (ks.min() < 1 or ks.max() > self.prime_count_total):
            raise OutOfRange(
                f"prime index outside [1, {self.prime_count_total}] for limit {self.limit}"
            )
        return self.primes[ks - 1]


def _sieve_segment(a: int, b: int, base: np.ndarray) -> np.ndarray:
    """Packed primality bits for odd indices [a, b)."""
    seg = np.ones(b - a, dtype=bool)
    lo_num, hi_num = 2 * a + 1, 2 * b - 1
    for p in base:
        p = int(p)
        sq = p * p
        if sq > hi_num:
            break
        if sq >= lo_num:
            start = sq
        else:
            start = -(-lo_num // p) * p
            if start % 2 == 0:
                start += p
        seg[((start - 1) >> 1) - a :: p] = False
    if a == 0:
        seg[0] = False  # the number 1
    return np.packbits(seg, bitorder="little")


def build_sieve(limit: int, workers: int = 1, memory_mb: int | None = None) -> PrimeTable:
    """Sieve every integer up to ``limit`` inclusive.

    Segments are independent, so ``workers > 1`` sieves them on a thread
    pool; the result is identical either way.
    """
    limit = int(limit)
    if limit < 2:
        raise InvalidInput(f"sieve limit must be >= 2, got {limit}")
    budget = memory_mb if memory_mb is not None else memory_budget_mb()
    need = estimate_bytes(limit)
    if need > budget * 2**20:
        raise ResourceLimit(
            f"sieving to {limit} needs ~{need / 2**20:.0f} MiB, budget is {budget} MiB"
        )

    n_odd = (limit - 1) // 2 + 1
    base = _small_primes(math.isqrt(limit))[1:]  # odd base primes
    bounds = [(a, min(a + SEGMENT_BITS, n_odd)) for a in range(0, n_odd, SEGMENT_BITS)]
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda ab: _sieve_segment(*ab, base), bounds))
    else:
        parts = [_sieve_segment(a, b, base) for a, b in bounds]
    odd_bits = np.concatenate(parts)

    per_block = np.add.reduceat(
        _POPCOUNT[odd_bits].astype(np.int64), np.arange(0, odd_bits.size, BLOCK_BYTES)
    )
    block_counts = 1 + np.cumsum(per_block)
    total = int(block_counts[-1])
    return PrimeTable(limit, odd_bits, block_counts, total)
