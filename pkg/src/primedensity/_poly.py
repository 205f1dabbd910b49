"""Internal helpers for dense integer polynomials.

Coefficients are given in descending order, ``(c_h, ..., c_1, c_0)`` for
``f(n) = c_h n^h + ... + c_1 n + c_0``, matching the CLI text form.
"""

from __future__ import annotations

import numpy as np

# int64 evaluation must stay clear of 2^63; primality testing is good to 2^64.
INT64_VALUE_LIMIT = 2**63 - 1


def degree(coeffs: tuple[int, ...]) -> int:
    return len(coeffs) - 1


def trim(coeffs) -> tuple[int, ...]:
    """Drop leading zero coefficients; the zero polynomial trims to (0,)."""
    out = tuple(int(c) for c in coeffs)
    while len(out) > 1 and out[0] == 0:
        out = out[1:]
    return out


def evaluate(coeffs, n: int) -> int:
    """Exact Horner evaluation over Python integers."""
    acc = 0
    for c in coeffs:
        acc = acc * n + c
    return acc


def evaluate_mod(coeffs, n: int, p: int) -> int:
    acc = 0
    for c in coeffs:
        acc = (acc * n + c) % p
    return acc


def magnitude_bound(coeffs, x: int) -> int:
    """Upper bound for |f(n)| over 1 <= n <= x: sum |c_i| x^i, exact."""
    acc = 0
    for c in coeffs:
        acc = acc * x + abs(c)
    return acc


def max_safe_index(coeffs, value_limit: int = INT64_VALUE_LIMIT) -> int:
    """Largest x >= 1 with magnitude_bound(coeffs, x) <= value_limit.

    Returns 0 when even x = 1 overflows. Binary search; magnitude_bound is
    nondecreasing in x for x >= 1.
    """
    if magnitude_bound(coeffs, 1) > value_limit:
        return 0
    lo, hi = 1, 2
    while magnitude_bound(coeffs, hi) <= value_limit:
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if magnitude_bound(coeffs, mid) <= value_limit:
            lo = mid
        else:
            hi = mid
    return lo


def evaluate_array(coeffs, n: np.ndarray) -> np.ndarray:
    """Vectorized Horner in int64. Caller must have checked max_safe_index."""
    acc = np.zeros(n.shape, dtype=np.int64)
    for c in coeffs:
        acc = acc * n + c
    return acc
