"""Local factors 1 + A(n, p) of the singular series and the lower bound C.

A(n, q) = mu(q)/phi(q)^4 * sum_{(a,q)=1} C_2(q,a) C_3(q,a)^2 e(-an/q).

Two independent routes are provided. :func:`A_local` evaluates the sum as an
exact rational through the cyclotomic trace in :mod:`.cyclotomic`;
:func:`A_local_direct` sums interval phases over a, pairing a with q - a so
the imaginary part cancels. Tests hold them to each other.

The ``convention`` argument of the minimum-finding functions selects
``"standard"`` (tabulate 1 + A(n,p), as defined) or ``"flipped"`` (tabulate
1 - A(n,p)). The flipped table is what reproduces the published per-prime
minima; the standard one is the default and the one the bound C is
certified against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import cyclotomic
from .arith import mobius, phase_table, sieve_primes, totient
from .errors import ConsistencyError
from .export import write_csv
from .interval import CInterval, Interval, csum, exp, fprod, get_precision, sqrt
from .parallel import ordered_map
from .reports import ConstantReport, Import

CONVENTIONS = ("standard", "flipped")

#: primes whose exact minima enter the small-prime product
DEFAULT_SMALL_PRIMES = (5, 11) + tuple(p for p in range(17, 200) if all(p % d for d in range(2, p)))

IMAG_TOL = Fraction(1, 10**20)
PAPER_TAIL_IMPORT = "0.984127"
TAIL_CHUNK = 4096


# --- exponential sums ---------------------------------------------------------


def ramanujan_C(q: int, a: int, i: int, *, fast: bool = True) -> CInterval:
    """C_i(q, a) = sum over reduced residues m mod q of e(a m^i / q).

    With ``fast`` and q a prime = 2 mod 3, C_3(q, a) is returned as C_1(q, a)
    since cubing permutes the reduced residues.
    """
    if q < 1:
        raise ValueError(f"q must be positive, got {q}")
    if i not in (1, 2, 3):
        raise ValueError(f"exponent must be 1, 2 or 3, got {i}")
    if fast and i == 3 and q % 3 == 2 and _is_small_prime(q):
        i = 1
    tab = phase_table(q)
    return csum(tab[(a * pow(m, i, q)) % q] for m in range(1, q + 1) if math.gcd(m, q) == 1)


def _is_small_prime(q: int) -> bool:
    return q >= 2 and all(q % d for d in range(2, math.isqrt(q) + 1))


@lru_cache(maxsize=64)
def _C_rows(q: int, prec: int) -> tuple[tuple[CInterval, ...], tuple[CInterval, ...]]:
    units = [a for a in range(q) if math.gcd(a, q) == 1]
    c2 = {a: ramanujan_C(q, a, 2, fast=False) for a in units}
    c3 = {a: ramanujan_C(q, a, 3, fast=False) for a in units}
    return tuple(c2.get(a) for a in range(q)), tuple(c3.get(a) for a in range(q))


# --- A(n, q) --------------------------------------------------------------------


@lru_cache(maxsize=2048)
def _A_table(q: int) -> tuple[Fraction, ...]:
    return tuple(cyclotomic.A_exact_table(q))


def A_exact(n: int, q: int) -> Fraction:
    if q < 1:
        raise ValueError(f"q must be positive, got {q}")
    return _A_table(q)[n % q]


def A_local(n: int, q: int) -> Interval:
    """Enclosure of A(n, q); a point interval at the exact rational value."""
    return Interval(A_exact(n, q))


def A_local_direct(n: int, q: int) -> tuple[Interval, Interval]:
    """Direct interval summation of A(n, q).

    Returns ``(real part, imaginary residual)``. The residual is what is left
    of the imaginary part after pairing a with q - a; it must enclose 0 and
    be narrower than 1e-20, otherwise :class:`ConsistencyError` is raised.
    """
    if q < 1:
        raise ValueError(f"q must be positive, got {q}")
    mu = mobius(q)
    if mu == 0:
        return Interval(0), Interval(0)
    if q == 1:
        return Interval(1), Interval(0)
    c2, c3 = _C_rows(q, get_precision())
    tab = phase_table(q)
    terms = []
    for a in range(1, q // 2 + 1):
        if math.gcd(a, q) != 1:
            continue
        b = q - a
        za = c2[a] * c3[a] * c3[a] * tab[(-a * n) % q]
        if b == a:
            terms.append(za)
        else:
            zb = c2[b] * c3[b] * c3[b] * tab[(-b * n) % q]
            terms.append(za + zb)
    total = csum(terms)
    scale = Fraction(mu, totient(q) ** 4)
    re, im = total.re * scale, total.im * scale
    bound = max(abs(im.lo_fraction()), abs(im.hi_fraction()))
    if not im.contains(0) or bound >= IMAG_TOL:
        raise ConsistencyError(f"A({n},{q}): imaginary residual {im!r} exceeds tolerance")
    return re, im


# --- per-prime minima -------------------------------------------------------------


@dataclass(frozen=True)
class LocalFactorRecord:
    """Table of 1 + A(n, p) (or 1 - A under the flipped convention) over n = 1..p."""

    p: int
    values: tuple[Interval, ...]
    exact: tuple[Fraction, ...]
    argmin: int | None
    ties: tuple[int, ...]
    min: Interval
    convention: str = "standard"

    def __post_init__(self):
        if len(self.values) != self.p:
            raise ConsistencyError(f"table for p={self.p} has {len(self.values)} entries")

    def rows(self, digits: int = 20):
        for n, v in enumerate(self.values, start=1):
            yield (self.p, n, v.lo_str(digits), v.hi_str(digits))


def _check_convention(convention: str) -> int:
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    return 1 if convention == "standard" else -1


def local_factor_min(p: int, convention: str = "standard") -> LocalFactorRecord:
    """Full residue table for p and its certified minimum.

    The minimum is exact, so ties are exact equalities; they are all listed.
    ``argmin`` is None when more than one residue attains the minimum.
    """
    if p < 3:
        raise ValueError(f"local_factor_min needs p >= 3, got {p}")
    sign = _check_convention(convention)
    tab = _A_table(p)
    exact = tuple(1 + sign * tab[n % p] for n in range(1, p + 1))
    m = min(exact)
    ties = tuple(n for n, v in enumerate(exact, start=1) if v == m)
    return LocalFactorRecord(
        p=p,
        values=tuple(Interval(v) for v in exact),
        exact=exact,
        argmin=ties[0] if len(ties) == 1 else None,
        ties=ties,
        min=Interval(m),
        convention=convention,
    )


def product_small_primes(primes=DEFAULT_SMALL_PRIMES, convention: str = "standard") -> Interval:
    return fprod(local_factor_min(p, convention).min for p in primes)


def write_local_factor_csv(records, path):
    rows = [row for rec in records for row in rec.rows()]
    return write_csv(path, ["p", "n", "lo", "hi"], rows)


# --- closed-form tails ------------------------------------------------------------


@dataclass(frozen=True)
class TailFactor:
    p: int
    residue_class: int
    bound: Interval


def _weak_tail(p: int) -> Interval:
    s = sqrt(Interval(p))
    return (s + 1) / Interval(p - 1) ** 3


def _strong_tail(p: int) -> Interval:
    s = sqrt(Interval(p))
    return (s + 1) * (2 * s + 1) ** 2 / Interval(p - 1) ** 3


def tail_factor(p: int) -> TailFactor:
    """Closed-form lower bound for 1 + A(n, p), any n."""
    if p < 5 or p % 3 == 0:
        raise ValueError(f"tail_factor needs a prime p >= 5 not divisible by 3, got {p}")
    r = p % 3
    b = _weak_tail(p) if r == 2 else _strong_tail(p)
    return TailFactor(p, r, 1 - b)


def abs_bound(p: int) -> Interval:
    """Upper bound for |A(n, p)| valid for every prime p >= 3 and every n."""
    return _strong_tail(p)


def _tail_chunk(primes: tuple[int, ...]) -> Interval:
    return fprod(tail_factor(p).bound for p in primes)


def tail_product(lo: int, hi: int, *, workers: int | None = None) -> Interval:
    """Product of tail_factor bounds over primes lo < p < hi.

    Primes are split into fixed-size chunks whose partial products are
    multiplied in ascending order, so the result does not depend on
    ``workers``.
    """
    if lo < 199 or hi <= lo:
        raise ValueError(f"need 199 <= lo < hi, got ({lo}, {hi})")
    key = (lo, hi, get_precision())
    if key not in _TAIL_CACHE:
        _TAIL_CACHE[key] = _tail_product(lo, hi, workers)
    return _TAIL_CACHE[key]


_TAIL_CACHE: dict[tuple[int, int, int], Interval] = {}


def _tail_product(lo: int, hi: int, workers: int | None) -> Interval:
    table = sieve_primes(hi)
    ps = [int(p) for p in table.between(lo + 1, hi - 1)]
    chunks = [tuple(ps[i : i + TAIL_CHUNK]) for i in range(0, len(ps), TAIL_CHUNK)]
    return fprod(ordered_map(_tail_chunk, chunks, workers))


def analytic_tail(X: int = 10**6) -> Interval:
    """Lower bound for the product of 1 + A(n, p) over all primes p > X.

    Uses |A(n,p)| <= 5 p^{-3/2}, valid for p >= X because the ratio
    abs_bound(p) * p^{3/2} decreases in p and is checked to be at most 5 at
    X. Then prod(1 - x_p) >= 1 - sum x_p >= 1 - 5 * int_X^inf t^{-3/2} dt.
    """
    if X < 100:
        raise ValueError("analytic tail needs X >= 100")
    s = sqrt(Interval(X))
    ratio = (1 + 1 / s) * (2 + 1 / s) ** 2 / (1 - Interval(Fraction(1, X))) ** 3
    if not ratio.le(5):
        raise ConsistencyError(f"ratio {ratio!r} exceeds 5 at X={X}")
    lower = 1 - 10 / s
    return Interval(lower.lo_fraction())


# --- the constant C -----------------------------------------------------------------


@dataclass(frozen=True)
class CChain:
    small: Interval
    mid: Interval
    tail: Interval
    total: Interval


def c_chain(prime_limit: int = 10**6, tail: str = "analytic", convention: str = "standard",
            *, workers: int | None = None, imported_tail: str = PAPER_TAIL_IMPORT) -> CChain:
    """Pieces of the lower bound C: small primes, (199, limit), and p > limit."""
    small = product_small_primes(convention=convention)
    mid = tail_product(199, prime_limit, workers=workers)
    if tail == "analytic":
        t = analytic_tail(prime_limit)
    elif tail == "imported":
        t = Interval(imported_tail)
    else:
        raise ValueError(f"tail must be 'analytic' or 'imported', got {tail!r}")
    return CChain(small, mid, t, small * mid * t)


def constant_C(prime_limit: int = 10**6, tail: str = "analytic", convention: str = "standard",
               *, workers: int | None = None, imported_tail: str = PAPER_TAIL_IMPORT) -> ConstantReport:
    ch = c_chain(prime_limit, tail, convention, workers=workers, imported_tail=imported_tail)
    imports = []
    if tail == "imported":
        imports.append(Import("tail beyond 10^6", imported_tail, "published product bound"))
    notes = [
        f"small primes: [{ch.small.lo_str(10)}, {ch.small.hi_str(10)}]",
        f"(199, {prime_limit}): [{ch.mid.lo_str(10)}, {ch.mid.hi_str(10)}]",
        f"p > {prime_limit} ({tail}): {ch.tail.lo_str(10)}",
        f"convention: {convention}",
    ]
    return ConstantReport("C", "0.902985", ">=", ch.total, Fraction(1, 10**6), imports=imports, notes=notes)


# --- identities and truncated series ----------------------------------------------------


def sum_sq_identity(p: int) -> Interval:
    """sum_{j=1}^p (1 + A(j,p))^2, after checking sum_j A(j,p) = 0 exactly."""
    tab = _A_table(p)
    if sum(tab) != 0:
        raise ConsistencyError(f"sum of A(j,{p}) is {sum(tab)}, expected 0")
    return Interval(sum((1 + a) ** 2 for a in tab))


def _exact_hull(p: int) -> Interval:
    tab = _A_table(p)
    return Interval(1 + min(tab), 1 + max(tab))


def singular_series_truncated(n: int, Q: int, *, tail_limit: int = 10**5) -> Interval:
    """Enclosure of prod_p (1 + A(n,p)).

    Primes p <= Q contribute their exact factor. Primes in (Q, 17) contribute
    the hull of their exact table over all residues, primes up to
    ``tail_limit`` the interval 1 +- abs_bound(p), and the rest
    [1 - 10/sqrt(X), exp(10/sqrt(X))].
    """
    if n % 2:
        raise ValueError(f"n must be even, got {n}")
    if Q < 2:
        raise ValueError(f"Q must be at least 2, got {Q}")
    X = max(tail_limit, Q + 1)
    table = sieve_primes(X)
    head = Fraction(1)
    for p in table.between(2, Q):
        head *= 1 + A_exact(n, int(p))
    factors = [Interval(head)]
    for p in table.between(Q + 1, X):
        p = int(p)
        if p < 17:
            factors.append(_exact_hull(p))
        else:
            b = abs_bound(p)
            factors.append(Interval((1 - b).lo, (1 + b).hi))
    far = analytic_tail(X)
    factors.append(Interval(far.lo, exp(10 / sqrt(Interval(X))).hi))
    return fprod(factors)
