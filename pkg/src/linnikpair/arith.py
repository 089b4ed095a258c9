"""Exact integer and multiplicative-function helpers, plus rigorous zeta and e(a/q)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from mpmath import iv

from . import kernels
from .interval import CInterval, Interval, fsum, get_precision, pi
from .interval import sqrt as isqrt_iv

MAX_SIEVE_LIMIT = 2 * 10**9


@dataclass(frozen=True)
class PrimeTable:
    """All primes up to ``limit``, ascending."""

    limit: int
    primes: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.primes.setflags(write=False)

    def __len__(self):
        return int(self.primes.shape[0])

    def __iter__(self):
        return iter(self.primes.tolist())

    def between(self, lo: int, hi: int) -> np.ndarray:
        """Primes p with lo <= p <= hi."""
        a = np.searchsorted(self.primes, lo, side="left")
        b = np.searchsorted(self.primes, hi, side="right")
        return self.primes[a:b]

    def is_prime(self, n: int) -> bool:
        if n > self.limit:
            raise ValueError(f"{n} exceeds the table limit {self.limit}")
        i = np.searchsorted(self.primes, n)
        return bool(i < len(self.primes) and self.primes[i] == n)


def sieve_primes(limit: int, *, max_limit: int = MAX_SIEVE_LIMIT) -> PrimeTable:
    if not isinstance(limit, (int, np.integer)) or limit < 2:
        raise ValueError(f"sieve limit must be an integer >= 2, got {limit!r}")
    if limit > max_limit:
        raise ValueError(
            f"sieve limit {limit} exceeds the configured memory bound {max_limit}; "
            "raise max_limit explicitly if the machine can hold a byte per integer"
        )
    limit = int(limit)
    return _cached_table(limit)


@lru_cache(maxsize=8)
def _cached_table(limit: int) -> PrimeTable:
    primes = np.flatnonzero(kernels.prime_mask(limit)).astype(np.int64)
    return PrimeTable(limit, primes)


@lru_cache(maxsize=4)
def prime_mask(limit: int) -> np.ndarray:
    m = kernels.prime_mask(limit)
    m.setflags(write=False)
    return m


# --- factorisation and multiplicative functions -----------------------------


@lru_cache(maxsize=65536)
def factorize(n: int) -> tuple[int, ...]:
    """Prime factors of n with multiplicity, ascending."""
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    out = []
    table = sieve_primes(max(2, min(10**6, math.isqrt(n) + 1)))
    for p in table:
        if p * p > n:
            break
        while n % p == 0:
            out.append(p)
            n //= p
    if n > 1:
        if n > table.limit ** 2:
            raise ValueError("cofactor too large for trial division")
        out.append(n)
    return tuple(out)


def multiplicative_basics(n: int) -> tuple[int, int, list[int]]:
    """``(phi(n), mu(n), prime factors with multiplicity)``."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    fs = list(factorize(n))
    phi = n
    for p in set(fs):
        phi = phi // p * (p - 1)
    mu = 0 if len(set(fs)) != len(fs) else (-1) ** len(fs)
    return phi, mu, fs


def totient(n: int) -> int:
    return multiplicative_basics(n)[0]


def mobius(n: int) -> int:
    return multiplicative_basics(n)[1]


def divisors(n: int) -> list[int]:
    ds = [1]
    fs = factorize(n)
    for p in sorted(set(fs)):
        e = fs.count(p)
        ds = [d * p**i for d in ds for i in range(e + 1)]
    return sorted(ds)


def ramanujan_sum(q: int, j: int) -> int:
    """c_q(j) = sum over reduced residues a mod q of e(aj/q), an integer."""
    g = math.gcd(j, q)
    return sum(mobius(q // d) * d for d in divisors(g))


def multiplicative_order(base: int, modulus: int) -> int:
    """Least t >= 1 with base^t = 1 (mod modulus), via the factorisation of phi."""
    if modulus <= 1:
        raise ValueError("modulus must exceed 1")
    if math.gcd(base, modulus) != 1:
        raise ValueError(f"gcd({base}, {modulus}) != 1, order undefined")
    t = totient(modulus)
    for p in set(factorize(t)) if t > 1 else ():
        while t % p == 0 and pow(base, t // p, modulus) == 1:
            t //= p
    return t


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primitive_root(p: int) -> int:
    if p == 2:
        return 1
    fs = set(factorize(p - 1))
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in fs):
            return g
    raise ValueError(f"{p} has no primitive root")


# --- zeta -------------------------------------------------------------------


def zeta_interval(s, precision=None, *, terms: int = 12) -> Interval:
    """Enclosure of zeta(s) for real s > 1.

    Partial sum below M plus the Euler-Maclaurin expansion of the tail
    sum_{n>=M} n^{-s} to ``terms`` Bernoulli corrections. Every derivative of
    x^{-s} has constant sign, so the remainder lies between zero and the
    first omitted correction; that term is the width of the result. M is
    doubled until the width drops below ``precision`` (default 2^-(prec-8)).
    """
    s = Fraction(s)
    if s <= 1:
        raise ValueError(f"zeta_interval needs s > 1, got {s}")
    if precision is None:
        precision = Fraction(1, 2 ** (get_precision() - 8))
    prec = Fraction(precision)
    si = Interval(s)
    bern = [Fraction(*mpmath.bernfrac(2 * k)) for k in range(1, terms + 2)]
    M = 16
    while True:
        part = fsum(Interval(n) ** (-si) for n in range(1, M))
        Mi = Interval(M)
        tail = Mi ** (1 - si) / (si - 1) + Mi ** (-si) / 2
        rising = si  # (s)_1
        corrections = []
        for k in range(1, terms + 2):
            # (s)_{2k-1} M^{-s-2k+1} B_{2k} / (2k)!
            corrections.append(rising * Mi ** (-si - (2 * k - 1)) * Interval(bern[k - 1]) / math.factorial(2 * k))
            rising = rising * (si + (2 * k - 1)) * (si + 2 * k)
        for c in corrections[:-1]:
            tail = tail + c
        omitted = corrections[-1]
        a, b = part + tail, part + tail + omitted
        enclosure = Interval(a, b)
        if enclosure.hi_fraction() - enclosure.lo_fraction() <= prec or M >= 1 << 14:
            return enclosure
        M *= 2


# --- e(a/q) -----------------------------------------------------------------


@dataclass(frozen=True)
class UnitPhase:
    """e(a/q) = exp(2 pi i a/q) for a reduced fraction a/q in [0, 1)."""

    a: int
    q: int
    value: CInterval

    @property
    def argument(self) -> Fraction:
        return Fraction(self.a, self.q)


def _cos_sin_2pi(x: Fraction) -> tuple[Interval, Interval]:
    """cos and sin of 2 pi x for rational x in [0, 1/8]."""
    t = pi() * 2 * Interval(x)
    return Interval._wrap(iv.cos(t._v)), Interval._wrap(iv.sin(t._v))


def _phase(x: Fraction) -> CInterval:
    # reduce to the first octant [0, 1/8] by exact rational symmetries
    x = x % 1
    quadrant = int(x * 4)
    y = x - Fraction(quadrant, 4)
    swap = y > Fraction(1, 8)
    if swap:
        y = Fraction(1, 4) - y
    if y == 0:
        c, s = Interval(1), Interval(0)
    elif y == Fraction(1, 8):
        c = s = isqrt_iv(Interval(2)) / 2
    else:
        c, s = _cos_sin_2pi(y)
    if swap:
        c, s = s, c
    # rotate by quadrant * 90 degrees
    for _ in range(quadrant):
        c, s = -s, c
    return CInterval(c, s)


def unit_phase(a: int, q: int) -> UnitPhase:
    if q < 1:
        raise ValueError(f"q must be positive, got {q}")
    a %= q
    g = math.gcd(a, q)
    a, q = a // g, q // g
    return UnitPhase(a, q, _phase(Fraction(a, q)))


@lru_cache(maxsize=256)
def _phase_table_cached(q: int, prec: int) -> tuple[CInterval, ...]:
    return tuple(_phase(Fraction(t, q)) for t in range(q))


def phase_table(q: int) -> tuple[CInterval, ...]:
    """``table[t] = e(t/q)`` for t = 0..q-1 at the current precision."""
    return _phase_table_cached(q, get_precision())
