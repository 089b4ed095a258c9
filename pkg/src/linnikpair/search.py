"""Witness search for n = p1 + p2^2 + p3^3 + p4^3 + 2^{v_1} + ... + 2^{v_k}.

The core search fixes (p3, p4), walks p2 upward and tests the residual for
primality against a sieve bitmap. Enumeration order is (p3, p4, p2)
ascending, so the returned witness is the first one in that order.
"""
from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import kernels
from .arith import is_prime, prime_mask, sieve_primes
from .errors import WorkBoundError
from .export import write_csv, write_jsonl
from .interval import Interval

MIN_CORE = 2 + 4 + 8 + 8
MAX_TARGET = 10**10
BITMAP_LIMIT = 2 * 10**8
BRUTE_MAX = 10**4


@dataclass(frozen=True)
class RepresentationWitness:
    n: int
    p1: int
    p2: int
    p3: int
    p4: int
    vs: tuple[int, ...] = ()
    constrained: bool = False
    N: int | None = None  # scale defining the dyadic ranges when constrained

    def to_dict(self) -> dict:
        return {"n": self.n, "p1": self.p1, "p2": self.p2, "p3": self.p3, "p4": self.p4,
                "vs": list(self.vs), "constrained": self.constrained, "N": self.N}


@dataclass(frozen=True)
class PairWitness:
    first: RepresentationWitness
    second: RepresentationWitness

    @property
    def vs(self) -> tuple[int, ...]:
        return self.first.vs


@dataclass(frozen=True)
class Verdict:
    ok: bool
    code: str = "ok"

    def __bool__(self):
        return self.ok


@dataclass
class SearchStats:
    n: int
    found: bool
    probes: int
    millis: float


# --- ranges ---------------------------------------------------------------------


def dyadic_ranges(N: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """Integer ranges U < p3 <= 2U and V < p4 <= 2V for scale N."""
    from .major_arc import FrakJParams

    pr = FrakJParams(N, N)
    U, V = pr.U, pr.V
    return _open_closed(U), _open_closed(V)


def _open_closed(X: Interval) -> tuple[int, int]:
    lo = math.floor(X.lo_fraction()) + 1
    hi = math.floor(2 * X.lo_fraction())
    if math.floor(X.hi_fraction()) + 1 != lo or math.floor(2 * X.hi_fraction()) != hi:
        raise ArithmeticError("range endpoint too close to an integer")
    return lo, hi


# --- verification ----------------------------------------------------------------------


def verify_witness(w: RepresentationWitness) -> Verdict:
    """Exact check independent of the search code."""
    if w.n % 2:
        return Verdict(False, "odd n")
    for name, p in (("p1", w.p1), ("p2", w.p2), ("p3", w.p3), ("p4", w.p4)):
        if not is_prime(p):
            return Verdict(False, f"composite {name}")
    if any(v < 1 for v in w.vs):
        return Verdict(False, "bad exponent")
    total = w.p1 + w.p2**2 + w.p3**3 + w.p4**3 + sum(1 << v for v in w.vs)
    if total != w.n:
        return Verdict(False, "sum mismatch")
    if w.constrained:
        N = w.N if w.N is not None else w.n
        (a3, b3), (a4, b4) = dyadic_ranges(N)
        if not a3 <= w.p3 <= b3:
            return Verdict(False, "range p3")
        if not a4 <= w.p4 <= b4:
            return Verdict(False, "range p4")
        if w.p2 * w.p2 > N or w.p1 > N:
            return Verdict(False, "range p2")
    return Verdict(True)


# --- core search ---------------------------------------------------------------------------


@lru_cache(maxsize=4)
def _tables(limit: int):
    primes = sieve_primes(max(limit, 2)).primes
    return primes, prime_mask(max(limit, 2))


def _core_arrays(n: int, constrained: bool, N: int | None):
    primes, mask = _tables(n)
    cubes = primes ** 3
    squares = primes ** 2
    if constrained:
        (a3, b3), (a4, b4) = dyadic_ranges(N or n)
        c3 = cubes[(primes >= a3) & (primes <= b3)]
        c4 = cubes[(primes >= a4) & (primes <= b4)]
        s2 = squares[squares <= (N or n)]
    else:
        c3 = c4 = cubes[cubes <= n]
        s2 = squares[squares <= n]
    return c3.astype(np.int64), c4.astype(np.int64), s2.astype(np.int64), mask


def _core_find_bitmap(r: int, constrained: bool, N: int | None, limit: int):
    primes, mask = _tables(limit)
    c3, c4, s2, _ = _core_arrays(limit, constrained, N)
    i, j, t, probes = kernels.mitm_probe(r, c3, c4, s2, mask)
    if i < 0:
        return None, probes
    p3 = round(int(c3[i]) ** (1 / 3))
    p4 = round(int(c4[j]) ** (1 / 3))
    p2 = math.isqrt(int(s2[t]))
    p3 = _fix_cube(p3, int(c3[i]))
    p4 = _fix_cube(p4, int(c4[j]))
    return (r - int(s2[t]) - int(c3[i]) - int(c4[j]), p2, p3, p4), probes


def _fix_cube(guess: int, cube: int) -> int:
    for g in (guess - 1, guess, guess + 1):
        if g**3 == cube:
            return g
    raise AssertionError("cube root mismatch")


def _core_find_mr(r: int, constrained: bool, N: int | None):
    # large targets: primes for p2..p4 from a small sieve, p1 by Miller-Rabin
    top = math.isqrt(r) + 1
    primes = [int(p) for p in sieve_primes(max(top, 2)).primes]
    if constrained:
        (a3, b3), (a4, b4) = dyadic_ranges(N or r)
        P3 = [p for p in primes if a3 <= p <= b3]
        P4 = [p for p in primes if a4 <= p <= b4]
    else:
        P3 = P4 = [p for p in primes if p**3 <= r]
    probes = 0
    for p3 in P3:
        r3 = r - p3**3
        if r3 < 14:
            break
        for p4 in P4:
            r4 = r3 - p4**3
            if r4 < 6:
                break
            for p2 in primes:
                p1 = r4 - p2 * p2
                if p1 < 2:
                    break
                probes += 1
                if is_prime(p1):
                    return (p1, p2, p3, p4), probes
    return None, probes


def _core_find(r: int, constrained: bool, N: int | None, limit: int | None = None):
    if r < MIN_CORE:
        return None, 0
    lim = max(limit or r, r)
    if lim <= BITMAP_LIMIT:
        return _core_find_bitmap(r, constrained, N, lim)
    return _core_find_mr(r, constrained, N)


# --- multisets of exponents -------------------------------------------------------------------


def power_multisets(k: int, L: int, max_sum: int):
    """Nondecreasing k-tuples of exponents in [1, L], ordered by
    (sum of 2^v, tuple), skipping any whose power sum exceeds ``max_sum``."""
    if k == 0:
        if max_sum >= 0:
            yield ()
        return
    start = (1,) * k
    s0 = 2 * k
    if s0 > max_sum or L < 1:
        return
    heap = [(s0, start)]
    seen = {start}
    while heap:
        s, t = heapq.heappop(heap)
        yield t
        for i in range(k):
            if t[i] >= L or (i + 1 < k and t[i] == t[i + 1]):
                continue
            u = t[:i] + (t[i] + 1,) + t[i + 1 :]
            su = s + (1 << t[i])  # 2^{v+1} - 2^v
            if su <= max_sum and u not in seen:
                seen.add(u)
                heapq.heappush(heap, (su, u))


# --- public searches ----------------------------------------------------------------------------


def mitm_find(n: int, constrained: bool = False, *, k: int = 0, L: int | None = None,
              N: int | None = None, stats: list | None = None) -> RepresentationWitness | None:
    """First witness for n with exactly k powers of two, or None.

    Exponent multisets are tried in increasing order of their power sum.
    """
    if n % 2:
        raise ValueError(f"n must be even, got {n}")
    if n < MIN_CORE:
        raise ValueError(f"n must be at least {MIN_CORE}")
    if n > MAX_TARGET:
        raise WorkBoundError(f"n = {n} exceeds the search bound {MAX_TARGET}")
    L = L if L is not None else max(1, n.bit_length())
    t0 = time.perf_counter()
    probes = 0
    found = None
    for vs in power_multisets(k, L, n - MIN_CORE):
        r = n - sum(1 << v for v in vs)
        core, pr = _core_find(r, constrained, N, n)
        probes += pr
        if core is not None:
            found = RepresentationWitness(n, *core, vs=tuple(vs), constrained=constrained, N=N)
            break
    if stats is not None:
        stats.append(SearchStats(n, found is not None, probes, (time.perf_counter() - t0) * 1e3))
    return found


def pair_find(N1: int, N2: int, k: int, L_bound: int, *, constrained: bool = False,
              max_multisets: int = 10**6) -> PairWitness | None:
    """Shared exponent multiset vs with both N_i - sum 2^v representable."""
    if not N1 > N2:
        raise ValueError("need N1 > N2")
    if N1 % 2 or N2 % 2:
        raise ValueError("N1 and N2 must be even")
    if k < 0:
        raise ValueError("k must be non-negative")
    cache: dict[tuple[int, int], tuple] = {}

    def core(r, N):
        key = (r, N)
        if key not in cache:
            cache[key] = _core_find(r, constrained, N if constrained else None, N1)[0]
        return cache[key]

    for count, vs in enumerate(power_multisets(k, L_bound, N2 - MIN_CORE)):
        if count >= max_multisets:
            break
        s = sum(1 << v for v in vs)
        c2 = core(N2 - s, N2)
        if c2 is None:
            continue
        c1 = core(N1 - s, N1)
        if c1 is None:
            continue
        w1 = RepresentationWitness(N1, *c1, vs=tuple(vs), constrained=constrained, N=N1 if constrained else None)
        w2 = RepresentationWitness(N2, *c2, vs=tuple(vs), constrained=constrained, N=N2 if constrained else None)
        return PairWitness(w1, w2)
    return None


def brute_oracle(n: int, max_k: int, *, exact_k: bool = True) -> int:
    """Number of (p1, p2, p3, p4, vs) representations of n.

    Counts ordered prime quadruples times exponent multisets of size exactly
    ``max_k`` (or of every size up to it when ``exact_k`` is false), with
    2^v <= n. Uses the brute quadruple loop, not the search code.
    """
    if n > BRUTE_MAX:
        raise WorkBoundError(f"brute_oracle is limited to n <= {BRUTE_MAX}")
    primes = sieve_primes(max(n, 2)).primes
    L = max(1, n.bit_length())
    sizes = [max_k] if exact_k else range(max_k + 1)
    total = 0
    for k in sizes:
        for vs in power_multisets(k, L, n - MIN_CORE):
            total += kernels.brute_count(n - sum(1 << v for v in vs), primes)
    return total


# --- export ----------------------------------------------------------------------------------------


def write_witnesses_jsonl(witnesses, path):
    return write_jsonl(path, [w.to_dict() for w in witnesses])


def write_coverage_csv(stats: list[SearchStats], path):
    return write_csv(path, ["n", "found", "probes", "millis"],
                     [(s.n, int(s.found), s.probes, f"{s.millis:.3f}") for s in stats])
