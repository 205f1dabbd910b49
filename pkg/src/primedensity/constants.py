"""Number-theoretic constants: Mertens products and the Bateman-Horn
constant of an integer polynomial.

The Bateman-Horn constant of a degree-h polynomial f is

    c(f)/h = (1/h) * prod_p (1 - w(p)/p) / (1 - 1/p),

where w(p) counts the residues r mod p with f(r) = 0 (mod p). The product
here is truncated at a caller-chosen prime bound; no tail extrapolation is
applied, the truncation point is reported instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import exp, fsum, isqrt

import numpy as np

from . import _poly
from .errors import RangeLimitError
from .sieve import PrimeTable

EULER_GAMMA = 0.5772156649015329

# Brute-force root search is O(p); above this, closed forms take over.
BRUTE_FORCE_ROOT_BOUND = 10_000


@dataclass(frozen=True)
class ConstantResult:
    """A truncated-product constant with its truncation provenance."""

    value: float
    truncation_point: int  # largest prime that entered the product
    tail_note: str
    fixed_divisor: int | None = None  # prime p with f = 0 identically mod p


def legendre_symbol(a: int, p: int) -> int:
    """Euler's criterion: 0 if p | a, 1 if a is a QR mod p, else -1."""
    a %= p
    if a == 0:
        return 0
    t = pow(a, (p - 1) // 2, p)
    return -1 if t == p - 1 else t


def tonelli_shanks(a: int, p: int) -> int:
    """A square root of a modulo an odd prime p; ValueError if none exists."""
    a %= p
    if a == 0:
        return 0
    if legendre_symbol(a, p) != 1:
        raise ValueError(f"{a} is not a quadratic residue mod {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre_symbol(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t * t % p, 1
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def roots_mod_p(coeffs, p: int) -> np.ndarray:
    """All residues r in [0, p) with f(r) = 0 mod p, ascending.

    Brute force over residues (vectorized) up to BRUTE_FORCE_ROOT_BOUND;
    above it, closed forms cover degrees <= 2 and larger degrees fall back
    to the O(p) scan. Returns arange(p) when f vanishes identically mod p.
    """
    red = _poly.trim(tuple(c % p for c in coeffs))
    if red == (0,):
        return np.arange(p, dtype=np.int64)
    if p <= BRUTE_FORCE_ROOT_BOUND or _poly.degree(red) > 2:
        r = np.arange(p, dtype=np.int64)
        acc = np.zeros(p, dtype=np.int64)
        for c in red:
            acc = (acc * r + c) % p
        return np.flatnonzero(acc == 0).astype(np.int64)
    if _poly.degree(red) == 1:
        a, b = red
        return np.array([(-b * pow(a, -1, p)) % p], dtype=np.int64)
    a, b, c = red
    disc = (b * b - 4 * a * c) % p
    ls = legendre_symbol(disc, p)
    if ls == -1:
        return np.array([], dtype=np.int64)
    inv2a = pow(2 * a, -1, p)
    if ls == 0:
        return np.array([(-b * inv2a) % p], dtype=np.int64)
    s = tonelli_shanks(disc, p)
    out = sorted({(-b + s) * inv2a % p, (-b - s) * inv2a % p})
    return np.array(out, dtype=np.int64)


def _trim_ascending(u: list[int]) -> list[int]:
    while u and u[-1] == 0:
        u.pop()
    return u


def _poly_gcd_degree(a: list[int], b: list[int], p: int) -> int:
    """Degree of gcd(a, b) in F_p[x]; ascending coefficient lists."""
    a, b = _trim_ascending(a[:]), _trim_ascending(b[:])
    while b:
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            lead = a[-1] * inv % p
            shift = len(a) - len(b)
            for j, c in enumerate(b):
                a[shift + j] = (a[shift + j] - lead * c) % p
            _trim_ascending(a)
            if not a:
                break
        a, b = b, a
    return len(a) - 1


def _count_roots_gcd(red: tuple[int, ...], p: int) -> int:
    """Distinct roots of a reduced poly in F_p: deg gcd(x^p - x, f).

    f is made monic, x^p is reduced mod f by square-and-multiply, then the
    gcd degree is read off. O(deg^2 log p) per prime, which keeps degree >= 3
    products affordable at large truncation bounds. Requires deg(f) >= 2.
    """
    f = [c % p for c in reversed(red)]
    inv_lead = pow(f[-1], -1, p)
    f = [c * inv_lead % p for c in f]
    deg = len(f) - 1

    def mulmod(u: list[int], v: list[int]) -> list[int]:
        if not u or not v:
            return []
        out = [0] * (len(u) + len(v) - 1)
        for i, ui in enumerate(u):
            if ui:
                for j, vj in enumerate(v):
                    out[i + j] = (out[i + j] + ui * vj) % p
        for i in range(len(out) - 1, deg - 1, -1):
            c = out[i]
            if c:
                out[i] = 0
                for j in range(deg):
                    out[i - deg + j] = (out[i - deg + j] - c * f[j]) % p
        return _trim_ascending(out[:deg])

    result, base, e = [1], [0, 1], p
    while e:
        if e & 1:
            result = mulmod(result, base)
        base = mulmod(base, base)
        e >>= 1
    frob = result + [0] * (deg - len(result))
    frob[1] = (frob[1] - 1) % p  # x^p - x, reduced mod f
    return _poly_gcd_degree(f, frob, p)


def count_roots_mod_p(coeffs, p: int) -> int:
    """w(p): the number of solutions of f(r) = 0 (mod p) among residues.

    Returns p itself when f vanishes identically mod p (the fixed-divisor
    case). Dispatch: brute force below BRUTE_FORCE_ROOT_BOUND, closed forms
    for degrees 1 and 2 above it, and a gcd(x^p - x, f) degree count for
    higher degrees.
    """
    if not coeffs:
        raise ValueError("coeffs must be nonempty")
    red = _poly.trim(tuple(c % p for c in coeffs))
    if red == (0,):
        return p
    if p <= BRUTE_FORCE_ROOT_BOUND:
        return int(len(roots_mod_p(coeffs, p)))
    deg = _poly.degree(red)
    if deg == 0:
        return 0
    if deg == 1:
        return 1
    if deg == 2:
        a, b, c = red
        return 1 + legendre_symbol((b * b - 4 * a * c) % p, p)
    return _count_roots_gcd(red, p)


def _log_product_terms(coeffs, primes: np.ndarray) -> tuple[np.ndarray, int | None]:
    """Per-prime log factors ln(1 - w(p)/p) - ln(1 - 1/p).

    Returns the term array and, when some prime divides every value of f,
    that prime (the product is then 0 and the terms past it meaningless).
    """
    pf = primes.astype(np.float64)
    omega = np.empty(len(primes), dtype=np.float64)
    for i, p in enumerate(primes):
        w = count_roots_mod_p(coeffs, int(p))
        if w == p:
            return omega[:0], int(p)
        omega[i] = w
    return np.log1p(-omega / pf) - np.log1p(-1.0 / pf), None


def bateman_horn_constant(
    coeffs, truncation: int, table: PrimeTable
) -> ConstantResult:
    """Truncated Bateman-Horn constant c(f)/h over primes up to ``truncation``.

    ``coeffs`` are descending and must describe a nonconstant polynomial.
    A polynomial with a fixed prime divisor (w(p) = p for some p) yields
    value 0 with ``fixed_divisor`` set: beyond finitely many n its values
    are all composite.
    """
    coeffs = _poly.trim(coeffs)
    h = _poly.degree(coeffs)
    if h < 1:
        raise ValueError("polynomial must be nonconstant")
    if truncation > table.limit:
        raise RangeLimitError(
            f"truncation {truncation} exceeds the sieve limit {table.limit}"
        )
    primes = table.primes_up_to(truncation)
    if len(primes) == 0:
        raise ValueError(f"no primes at or below truncation {truncation}")
    terms, fixed = _log_product_terms(coeffs, primes)
    largest = int(primes[-1])
    if fixed is not None:
        return ConstantResult(
            value=0.0,
            truncation_point=fixed,
            tail_note=(
                f"every value of f is divisible by {fixed}; "
                "f is prime for at most finitely many n"
            ),
            fixed_divisor=fixed,
        )
    value = float(np.exp(fsum(terms))) / h
    return ConstantResult(
        value=value,
        truncation_point=largest,
        tail_note=(
            f"Euler product truncated at p = {largest}; the tail over larger "
            "primes is neglected, not extrapolated"
        ),
    )


def bateman_horn_partials(
    coeffs, truncation: int, table: PrimeTable
) -> tuple[np.ndarray, np.ndarray]:
    """Running values of the truncated constant after each prime factor.

    Returns (primes, partials); partials[i] is c(f)/h truncated at primes[i].
    Useful for watching the oscillation of the product die down.
    """
    coeffs = _poly.trim(coeffs)
    h = _poly.degree(coeffs)
    if h < 1:
        raise ValueError("polynomial must be nonconstant")
    primes = table.primes_up_to(truncation)
    terms, fixed = _log_product_terms(coeffs, primes)
    if fixed is not None:
        keep = primes[primes <= fixed]
        return keep, np.zeros(len(keep))
    return primes, np.exp(np.cumsum(terms)) / h


def mertens_product(y: int, table: PrimeTable) -> float:
    """prod_{p <= y} (1 - 1/p), accumulated in log space.

    Mertens' third theorem: this behaves like e^{-gamma} / ln y.
    """
    if y < 2:
        raise ValueError(f"y must be >= 2, got {y}")
    primes = table.primes_up_to(y)
    return float(np.exp(fsum(np.log1p(-1.0 / primes.astype(np.float64)))))


def mertens_prime_density(x: int, table: PrimeTable) -> float:
    """0.5 e^gamma prod_{p <= sqrt(x)} (1 - 1/p): the sieve-style proxy for
    the chance that a number near x is prime, asymptotically 1/ln x."""
    if x < 4:
        raise ValueError(f"x must be >= 4, got {x}")
    root = isqrt(x)
    if root > table.limit:
        raise RangeLimitError(
            f"sqrt({x}) = {root} exceeds the sieve limit {table.limit}"
        )
    return 0.5 * exp(EULER_GAMMA) * mertens_product(root, table)
