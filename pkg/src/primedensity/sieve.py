"""Prime generation, prime counting and 64-bit deterministic primality.

The sieve is segmented and stores odd numbers only, so building a table up
to 10^8 needs a few hundred small bitmap passes instead of one 100 MB array.
The resulting table keeps the primes as a sorted int64 array; pi(x) is a
binary search into it.
"""

from __future__ import annotations

import os
import struct
from math import isqrt, log

import numpy as np

from .errors import RangeLimitError, ResourceLimitError

# Numbers covered per segment pass; 2^18 keeps the odd bitmap inside L2.
DEFAULT_SEGMENT = 1 << 18
# Budget for the stored prime array plus working segment, in bytes.
DEFAULT_MEMORY_BUDGET = 1 << 30

CACHE_MAGIC = b"PDL1"


class PrimeTable:
    """All primes up to ``limit`` with O(log n) prime counting."""

    __slots__ = ("limit", "primes")

    def __init__(self, limit: int, primes: np.ndarray):
        self.limit = int(limit)
        self.primes = primes

    def count(self, x: int) -> int:
        """pi(x): the number of primes <= x."""
        if x > self.limit:
            raise RangeLimitError(
                f"pi({x}) is beyond this table; the sieve limit is {self.limit}"
            )
        if x < 0:
            raise ValueError(f"x must be nonnegative, got {x}")
        return int(np.searchsorted(self.primes, x, side="right"))

    def primes_up_to(self, x: int) -> np.ndarray:
        """View of the primes <= x (ascending)."""
        return self.primes[: self.count(x)]

    def __len__(self) -> int:
        return len(self.primes)

    def __repr__(self) -> str:
        return f"PrimeTable(limit={self.limit}, primes={len(self.primes)})"


def estimate_table_bytes(limit: int, segment_size: int = DEFAULT_SEGMENT) -> int:
    """Upper estimate of build memory: stored primes + one segment bitmap.

    Uses pi(x) < 1.26 x / ln x, a classical explicit bound, valid for x >= 17.
    """
    if limit < 17:
        bound = 8
    else:
        bound = int(1.26 * limit / log(limit)) + 1
    return 8 * bound + segment_size


def _small_primes(limit: int) -> np.ndarray:
    """Plain bool-array sieve; used for the base primes up to sqrt(limit)."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def build_table(
    limit: int,
    *,
    segment_size: int = DEFAULT_SEGMENT,
    max_bytes: int = DEFAULT_MEMORY_BUDGET,
) -> PrimeTable:
    """Sieve all primes in [2, limit] into a PrimeTable.

    Raises ValueError for limit < 2 and ResourceLimitError when the estimated
    memory exceeds ``max_bytes``.
    """
    if limit < 2:
        raise ValueError(f"sieve limit must be >= 2, got {limit}")
    if segment_size < 16:
        raise ValueError(f"segment_size must be >= 16, got {segment_size}")
    need = estimate_table_bytes(limit, segment_size)
    if need > max_bytes:
        raise ResourceLimitError(
            f"sieving to {limit} needs about {need} bytes, over the "
            f"{max_bytes}-byte budget; raise max_bytes or lower the limit"
        )

    base = _small_primes(isqrt(limit))
    odd_base = base[base > 2]

    chunks = [np.array([2], dtype=np.int64)] if limit >= 2 else []
    low = 3
    while low <= limit:
        high = min(low + segment_size, limit + 1)  # exclusive, spans odds only
        n_odd = (high - low + 1) // 2
        mask = np.ones(n_odd, dtype=bool)
        for p in odd_base:
            p = int(p)
            if p * p >= high:
                break
            start = max(p * p, ((low + p - 1) // p) * p)
            if start % 2 == 0:
                start += p
            if start < high:
                mask[(start - low) // 2 :: p] = False
        chunks.append((low + 2 * np.flatnonzero(mask)).astype(np.int64))
        low = high if high % 2 == 1 else high + 1

    primes = np.concatenate(chunks) if chunks else np.array([], dtype=np.int64)
    return PrimeTable(limit, primes)


def count_primes(table: PrimeTable, x: int) -> int:
    """pi(x) from a built table; errors if x exceeds the table limit."""
    return table.count(x)


# Deterministic Miller-Rabin witness sets (Jaeschke; Sinclair et al.).
# Each entry: every composite below the bound is caught by those bases.
_MR_TIERS = (
    (2_047, (2,)),
    (1_373_653, (2, 3)),
    (9_080_191, (31, 73)),
    (3_215_031_751, (2, 3, 5, 7)),
    (4_759_123_141, (2, 7, 61)),
    (3_474_749_660_383, (2, 3, 5, 7, 11, 13)),
    (341_550_071_728_321, (2, 3, 5, 7, 11, 13, 17)),
    (3_825_123_056_546_413_051, (2, 3, 5, 7, 11, 13, 17, 19, 23)),
    (1 << 64, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)),
)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61)


def _witness_passes(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Deterministic primality for 0 <= n < 2^64."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n >= 1 << 64:
        raise RangeLimitError(
            f"deterministic primality is supported below 2^64, got {n}"
        )
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for bound, bases in _MR_TIERS:
        if n < bound:
            return all(_witness_passes(n, a, d, s) for a in bases)
    raise AssertionError("unreachable: tier table covers 2^64")


def save_cache(table: PrimeTable, path: str) -> None:
    """Write a versioned sieve cache: 'PDL1', u64 LE limit, odd bitset.

    Bit j of the bitset says whether 2j + 1 is prime (bit 0, for n = 1, is
    always clear); the prime 2 is implicit.
    """
    n_odd = (table.limit + 1) // 2
    bits = np.zeros(n_odd, dtype=bool)
    odd = table.primes[table.primes > 2]
    bits[(odd - 1) // 2] = True
    packed = np.packbits(bits, bitorder="little")
    with open(path, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(struct.pack("<Q", table.limit))
        fh.write(packed.tobytes())


def load_cache(path: str) -> PrimeTable:
    """Read a cache written by save_cache; ValueError on a bad header."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != CACHE_MAGIC:
            raise ValueError(f"{path!r} is not a prime-table cache (bad magic)")
        (limit,) = struct.unpack("<Q", fh.read(8))
        payload = fh.read()
    n_odd = (limit + 1) // 2
    bits = np.unpackbits(
        np.frombuffer(payload, dtype=np.uint8), count=n_odd, bitorder="little"
    ).astype(bool)
    odd = (2 * np.flatnonzero(bits) + 1).astype(np.int64)
    primes = np.concatenate([np.array([2], dtype=np.int64), odd])
    return PrimeTable(int(limit), primes)


def build_or_load(
    limit: int,
    cache_path: str | None = None,
    *,
    max_bytes: int = DEFAULT_MEMORY_BUDGET,
) -> tuple[PrimeTable, str]:
    """Build a table, reusing ``cache_path`` when it already covers ``limit``.

    Returns the table and a short provenance tag ("built", "cache", or
    "built+cached").
    """
    if cache_path and os.path.exists(cache_path):
        cached = load_cache(cache_path)
        if cached.limit >= limit:
            return PrimeTable(limit, cached.primes_up_to(limit)), "cache"
    table = build_table(limit, max_bytes=max_bytes)
    if cache_path:
        save_cache(table, cache_path)
        return table, "built+cached"
    return table, "built"
