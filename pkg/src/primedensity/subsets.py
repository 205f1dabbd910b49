"""Subsets of the natural numbers and prime counting/density inside them.

Four kinds are supported:

* ``all``        - every natural number;
* ``ap:k,l``     - the arithmetic progression n = l (mod k);
* ``poly:...``   - the image of an integer polynomial f; counting is over
  the *index* n (how many n <= x make f(n) prime), which is the convention
  under which the polynomial density equals the Bateman-Horn constant;
* ``squarefree`` - numbers with no repeated prime factor.

Every prime is square-free, so for counting primes the square-free subset
coincides with the full prime sequence; the membership test still checks
arbitrary naturals honestly.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

import numpy as np

from . import _poly
from .constants import roots_mod_p
from .errors import RangeLimitError
from .sieve import PrimeTable, is_prime

ALL = "all"
PROGRESSION = "progression"
POLYNOMIAL = "polynomial"
SQUAREFREE = "squarefree"

# Polynomial values are pre-sieved by primes up to this bound before the
# survivors go to Miller-Rabin; raising it trades sieve passes for fewer
# primality tests.
VALUE_SIEVE_BOUND = 10_000


@dataclass(frozen=True)
class SubsetSpec:
    """Declarative description of a subset of the naturals."""

    kind: str
    modulus: int = 0
    residue: int = 0
    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in (ALL, PROGRESSION, POLYNOMIAL, SQUAREFREE):
            raise ValueError(f"unknown subset kind {self.kind!r}")
        if self.kind == PROGRESSION:
            if self.modulus < 1:
                raise ValueError(f"progression modulus must be >= 1, got {self.modulus}")
            if not 0 <= self.residue < self.modulus:
                raise ValueError(
                    f"progression residue must satisfy 0 <= l < k, got l={self.residue}, k={self.modulus}"
                )
        if self.kind == POLYNOMIAL:
            coeffs = _poly.trim(self.coeffs)
            object.__setattr__(self, "coeffs", coeffs)
            if _poly.degree(coeffs) < 1:
                raise ValueError("polynomial subsets need degree >= 1")
            if coeffs[0] <= 0:
                raise ValueError("polynomial leading coefficient must be positive")

    # -- constructors --------------------------------------------------

    @classmethod
    def all_naturals(cls) -> "SubsetSpec":
        return cls(ALL)

    @classmethod
    def progression(cls, k: int, l: int) -> "SubsetSpec":
        return cls(PROGRESSION, modulus=int(k), residue=int(l))

    @classmethod
    def polynomial(cls, coeffs) -> "SubsetSpec":
        return cls(POLYNOMIAL, coeffs=tuple(int(c) for c in coeffs))

    @classmethod
    def squarefree(cls) -> "SubsetSpec":
        return cls(SQUAREFREE)

    @classmethod
    def parse(cls, text: str) -> "SubsetSpec":
        """Parse the canonical text form: all | ap:k,l | poly:c_h,...,c_0 | squarefree."""
        if text == "all":
            return cls.all_naturals()
        if text == "squarefree":
            return cls.squarefree()
        if text.startswith("ap:"):
            parts = text[3:].split(",")
            if len(parts) != 2:
                raise ValueError(f"progression form is ap:k,l, got {text!r}")
            return cls.progression(int(parts[0]), int(parts[1]))
        if text.startswith("poly:"):
            parts = text[5:].split(",")
            return cls.polynomial(int(c) for c in parts)
        raise ValueError(f"unrecognized subset spec {text!r}")

    def canonical(self) -> str:
        if self.kind == ALL:
            return "all"
        if self.kind == SQUAREFREE:
            return "squarefree"
        if self.kind == PROGRESSION:
            return f"ap:{self.modulus},{self.residue}"
        return "poly:" + ",".join(str(c) for c in self.coeffs)

    def __str__(self) -> str:
        return self.canonical()

    # -- queries --------------------------------------------------------

    @property
    def degree(self) -> int:
        if self.kind != POLYNOMIAL:
            raise ValueError("degree is defined for polynomial subsets only")
        return _poly.degree(self.coeffs)

    @property
    def shares_factor(self) -> bool:
        """True for progressions with gcd(k, l) > 1, where the 1/phi(k)
        density formula does not apply (at most one prime can occur)."""
        return self.kind == PROGRESSION and gcd(self.modulus, self.residue) > 1

    def member(self, n: int) -> bool:
        """Membership test for a natural n >= 1.

        Polynomial subsets are indexed sets: every n is a valid index, so
        membership is vacuously true; see count_primes_in_subset for the
        counting convention.
        """
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        if self.kind == ALL or self.kind == POLYNOMIAL:
            return True
        if self.kind == PROGRESSION:
            return n % self.modulus == self.residue
        # square-free: no prime square divides n
        m = n
        d = 2
        while d * d <= m:
            if m % d == 0:
                m //= d
                if m % d == 0:
                    return False
            d += 1 if d == 2 else 2
        return True


@dataclass(frozen=True)
class DensityEstimate:
    """Empirical density of subset primes along a grid of cut points.

    ``ratios[j]`` is (primes of the subset <= grid[j]) / pi(grid[j]);
    ``extrapolated`` averages the last quarter of the ratios and ``spread``
    is max - min over the last half, so slow drift stays visible.
    """

    grid: tuple[int, ...]
    ratios: tuple[float, ...]
    extrapolated: float
    spread: float
    note: str = ""


def euler_phi(k: int) -> int:
    """Euler's totient by trial-division factorization."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    result = k
    m = k
    d = 2
    while d * d <= m:
        if m % d == 0:
            result -= result // d
            while m % d == 0:
                m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        result -= result // m
    return result


def polynomial_safe_index(spec: SubsetSpec) -> int:
    """Largest index n whose polynomial value stays inside the 64-bit
    primality range (int64 evaluation plus is_prime coverage)."""
    if spec.kind != POLYNOMIAL:
        raise ValueError("safe index is defined for polynomial subsets only")
    return _poly.max_safe_index(spec.coeffs)


def _polynomial_prime_indices(spec: SubsetSpec, x: int, table: PrimeTable) -> np.ndarray:
    """Sorted indices n <= x with f(n) prime.

    The value array is pre-sieved: for each small prime p, the roots of
    f mod p mark arithmetic progressions of indices whose value is a proper
    multiple of p. Survivors go to deterministic Miller-Rabin.
    """
    safe = polynomial_safe_index(spec)
    if x > safe:
        raise RangeLimitError(
            f"f(n) for {spec} leaves the 64-bit primality range beyond n = {safe}; "
            f"got x = {x}"
        )
    n = np.arange(1, x + 1, dtype=np.int64)
    values = _poly.evaluate_array(spec.coeffs, n)
    alive = values >= 2

    bound = min(VALUE_SIEVE_BOUND, table.limit, isqrt(int(values.max())))
    for p in table.primes_up_to(bound):
        p = int(p)
        roots = roots_mod_p(spec.coeffs, p)
        if len(roots) == p:  # f vanishes identically mod p
            alive &= values == p
            continue
        for r in roots:
            j0 = (int(r) - 1) % p  # n = 1 + j
            seg = slice(j0, None, p)
            alive[seg] &= values[seg] == p
    survivors = np.flatnonzero(alive)
    if len(survivors) == 0:
        return survivors.astype(np.int64)
    vals = values[survivors].tolist()
    keep = np.fromiter((is_prime(v) for v in vals), dtype=bool, count=len(vals))
    return (survivors[keep] + 1).astype(np.int64)


def subset_prime_points(spec: SubsetSpec, x: int, table: PrimeTable) -> np.ndarray:
    """Ascending jump points of the subset prime-counting function up to x.

    For value subsets these are the primes belonging to the subset; for
    polynomial subsets they are the indices n with f(n) prime.
    """
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    if spec.kind == POLYNOMIAL:
        return _polynomial_prime_indices(spec, x, table)
    primes = table.primes_up_to(x)  # raises RangeLimitError past the table
    if spec.kind in (ALL, SQUAREFREE):
        return primes  # primes have no square divisor
    return primes[primes % spec.modulus == spec.residue]


def count_primes_in_subset(spec: SubsetSpec, x: int, table: PrimeTable) -> int:
    """Number of subset primes up to x.

    For ``all``/``ap``/``squarefree`` this counts primes p <= x lying in the
    subset; for ``poly`` it counts indices n <= x with f(n) prime.
    """
    if x < 2:
        raise ValueError(f"x must be >= 2, got {x}")
    return int(len(subset_prime_points(spec, x, table)))


def density_curve(spec: SubsetSpec, grid, table: PrimeTable) -> DensityEstimate:
    """Empirical subset-prime density along an increasing grid.

    The extrapolated value estimates the limiting density; progressions with
    gcd(k, l) > 1 get a warning note because their density tends to 0 and
    the totient formula does not apply.
    """
    grid = [int(g) for g in grid]
    if not grid:
        raise ValueError("grid must be nonempty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be strictly increasing")
    if grid[0] < 2:
        raise ValueError(f"grid points must be >= 2, got {grid[0]}")

    points = subset_prime_points(spec, grid[-1], table)
    counts = np.searchsorted(points, grid, side="right")
    ambient = np.array([table.count(g) for g in grid], dtype=np.int64)
    ratios = counts / ambient

    quarter = max(1, len(ratios) // 4)
    half = max(1, len(ratios) // 2)
    note = ""
    if spec.shares_factor:
        g = gcd(spec.modulus, spec.residue)
        note = (
            f"gcd(k, l) = {g} > 1: the 1/phi(k) density formula does not "
            "apply; at most one prime lies in this progression"
        )
    return DensityEstimate(
        grid=tuple(grid),
        ratios=tuple(float(r) for r in ratios),
        extrapolated=float(ratios[-quarter:].mean()),
        spread=float(ratios[-half:].max() - ratios[-half:].min()),
        note=note,
    )
