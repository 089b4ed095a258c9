"""Cubic exponential sums T_d(q) and the upper-bound sieve constant chain.

For prime p the complete sum C(p, a) = sum_{p∤m} e(a m^3 / p) only depends
on the coset of a modulo the subgroup of cubes, so at most three distinct
values occur; T_1(p) and T_p(p) reduce to short sums over those cosets.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import is_prime, phase_table, sieve_primes, totient, zeta_interval
from .errors import ConsistencyError
from .export import write_csv
from .interval import CInterval, Interval, csum, euler_gamma, exp, fprod, sqrt
from .parallel import ordered_map
from .reports import ConstantReport, Import

CUBIC_MAX_Q = 10**4
T_MAX_P = 4000
ENV_PREFACTOR = Fraction(12304, 10**4)
SPLIT = 4000

IMPORT_40197 = Import("Mertens-type product", "40.197", "cited sieve product bound")
IMPORT_44062 = Import("J_i bound", "440.62", "cited singular-integral bound")
IMPORT_GAMMA = Import("Euler gamma", "0.5772156649...", "computed by mpmath, not imported")


# --- cubic sums ----------------------------------------------------------------------


@dataclass(frozen=True)
class CubicSumTable:
    """``S_vals[a-1] = S(q, a)``, ``C_vals[a-1] = C(q, a)`` for a = 1..q."""

    q: int
    S_vals: tuple[CInterval, ...]
    C_vals: tuple[CInterval, ...]

    def S(self, a: int) -> CInterval:
        return self.S_vals[(a - 1) % self.q]

    def C(self, a: int) -> CInterval:
        return self.C_vals[(a - 1) % self.q]


def _cube_hist(q: int, coprime_only: bool) -> dict[int, int]:
    h: dict[int, int] = {}
    for m in range(1, q + 1):
        if coprime_only and math.gcd(m, q) != 1:
            continue
        t = pow(m, 3, q)
        h[t] = h.get(t, 0) + 1
    return h


def _eval_hist(q: int, hist: dict[int, int], a: int) -> CInterval:
    tab = phase_table(q)
    return csum(tab[(a * t) % q] * c for t, c in sorted(hist.items()))


def cubic_sums(q: int) -> CubicSumTable:
    """S(q, a) and C(q, a) for every a = 1..q.

    Both sums are constant on the orbits a -> a u^3 (u a unit), so each orbit
    is evaluated once from the histogram of cube residues.
    """
    if q < 1 or q > CUBIC_MAX_Q:
        raise ValueError(f"cubic_sums needs 1 <= q <= {CUBIC_MAX_Q}, got {q}")
    hs, hc = _cube_hist(q, False), _cube_hist(q, True)
    cubes = sorted({pow(u, 3, q) for u in range(1, q + 1) if math.gcd(u, q) == 1})
    S: list = [None] * q
    C: list = [None] * q
    for a in range(1, q + 1):
        if S[a - 1] is not None:
            continue
        s, c = _eval_hist(q, hs, a), _eval_hist(q, hc, a)
        for u3 in cubes:
            b = (a * u3) % q or q
            S[b - 1], C[b - 1] = s, c
    return CubicSumTable(q, tuple(S), tuple(C))


# --- T_d(q) --------------------------------------------------------------------------


@dataclass(frozen=True)
class TValue:
    q: int
    d: int
    value: Interval


def _T_general(q: int, d: int) -> Interval:
    tab = cubic_sums(q)
    terms = []
    d3 = pow(d, 3, q)
    for a in range(1, q + 1):
        if math.gcd(a, q) != 1:
            continue
        c = tab.C(a)
        cbar = c.conj()
        terms.append(tab.S(a * d3) * c**3 * cbar**4)
    total = csum(terms)
    _check_real(total, f"T_{d}({q})")
    return total.re / (q * Interval(totient(q)) ** 7)


def _check_real(z: CInterval, what: str) -> None:
    im = z.im
    if not im.contains(0) or max(abs(im.lo_fraction()), abs(im.hi_fraction())) > Fraction(1, 10**20):
        raise ConsistencyError(f"{what}: imaginary part {im!r}")


def _coset_reps(p: int) -> list[tuple[int, int]]:
    """(representative, coset size) for the cosets of the cube subgroup mod p."""
    cubes = {pow(u, 3, p) for u in range(1, p)}
    seen: set[int] = set()
    out = []
    for a in range(1, p):
        if a in seen:
            continue
        orbit = {(a * c) % p for c in cubes}
        seen |= orbit
        out.append((a, len(orbit)))
    return out


def _T_prime(p: int) -> tuple[Interval, Interval]:
    """(T_1(p), T_p(p)) by coset grouping."""
    hc = _cube_hist(p, True)
    t1, tp = [], []
    for a, size in _coset_reps(p):
        c = _eval_hist(p, hc, a)
        w = c**3 * c.conj() ** 4 * size
        tp.append(w)
        t1.append((c + 1) * w)  # S(p, a) = C(p, a) + 1
    phi7 = Interval(p - 1) ** 7
    s1, sp = csum(t1), csum(tp)
    _check_real(s1, f"T_1({p})")
    _check_real(sp, f"T_{p}({p})")
    # S(p, a p^3) = S(p, 0) = p cancels the 1/p
    return s1.re / (p * phi7), sp.re / phi7


def T_value(q: int, d: int = 1, *, fast: bool = True) -> TValue:
    """T_d(q) for q prime or q = 9, d in {1, q}.

    With ``fast`` and q a prime = 2 mod 3, T_1(q) = 0 is returned outright
    (S(q, a) vanishes for every unit a).
    """
    if d not in (1, q):
        raise ValueError(f"d must be 1 or q, got {d}")
    if q > T_MAX_P:
        raise ValueError(f"T_value needs q <= {T_MAX_P}")
    if is_prime(q) and q > 3:
        if fast and d == 1 and q % 3 == 2:
            return TValue(q, d, Interval(0))
        t1, tp = _T_prime(q)
        return TValue(q, d, t1 if d == 1 else tp)
    if q in (3, 9) or q < 50:
        return TValue(q, d, _T_general(q, d))
    raise ValueError(f"T_value supports primes and small composites, got {q}")


@dataclass(frozen=True)
class TRow:
    p: int
    T1: Interval
    Tp: Interval
    envelope: Interval | None


def _row(p: int) -> TRow:
    if p % 3 == 2:
        t1 = Interval(0)
        _, tp = _T_prime(p)
    else:
        t1, tp = _T_prime(p)
    env = ratio_envelope(p) if p >= 13 else None
    return TRow(p, t1, tp, env)


def T_table(lo: int = 5, hi: int = 500, *, workers: int | None = None) -> list[TRow]:
    ps = [int(p) for p in sieve_primes(max(hi, 2)).between(lo, hi)]
    return ordered_map(_row, ps, workers)


def write_T_csv(rows: list[TRow], path, digits: int = 20):
    out = []
    for r in rows:
        env = r.envelope.hi_str(digits) if r.envelope is not None else ""
        out.append((r.p, r.T1.lo_str(digits), r.T1.hi_str(digits), r.Tp.lo_str(digits), r.Tp.hi_str(digits), env))
    return write_csv(path, ["p", "T1_lo", "T1_hi", "Tp_lo", "Tp_hi", "envelope"], out)


# --- envelopes ------------------------------------------------------------------------------


def T1_envelope(p) -> Interval:
    s = sqrt(Interval(p))
    return 2 * (2 * s + 1) ** 5 * (2 * Interval(p) + 1) / (s * Interval(p - 1) ** 6)


def Tp_envelope(p) -> Interval:
    s = sqrt(Interval(p))
    return (2 * s + 1) ** 5 * (2 * Interval(p) + 1) / Interval(p - 1) ** 6


def ratio_envelope(p: int) -> Interval:
    """1.2304 (2 sqrt p + 1)^5 (2p + 1)(2 + sqrt p) / ((p - 1)^7 sqrt p).

    Also checks that 1 - T1_envelope(p) > 0 and that the simplified form
    dominates the unsimplified quotient at this p.
    """
    if p < 13:
        raise ValueError(f"ratio envelope is stated for p >= 13, got {p}")
    t1 = T1_envelope(p)
    if not (1 - t1).certainly_positive():
        raise ConsistencyError(f"denominator 1 - |T_1({p})| envelope not positive")
    s = sqrt(Interval(p))
    env = ENV_PREFACTOR * (2 * s + 1) ** 5 * (2 * Interval(p) + 1) * (2 + s) / (Interval(p - 1) ** 7 * s)
    raw = (Tp_envelope(p) + t1) / ((p - 1) * (1 - t1))
    if not raw.le(env):
        raise ConsistencyError(f"simplified envelope fails to dominate at p = {p}")
    return env


def prefactor_check() -> Interval:
    """1 / (1 - T1_envelope(13)), which must not exceed 1.2304."""
    return 1 / (1 - T1_envelope(13))


def M_constants() -> tuple[Interval, Interval]:
    X = Interval(SPLIT)
    r = 1 / sqrt(X)
    common = (2 + r) ** 5 * (2 + 1 / X)
    m1 = ENV_PREFACTOR * (1 + 2 * r) * common / (1 - 1 / X) ** 7
    m2 = 2 * common / (1 - 1 / X) ** 6
    return m1, m2


def zeta_tail(s: Fraction, M: Interval, cutoff: int = SPLIT) -> Interval:
    """(zeta(s)/zeta(2s) * prod_{p<cutoff} (1 + p^-s)^-1)^M = (prod_{p>=cutoff} (1 + p^-s))^M."""
    s = Fraction(s)
    ratio = zeta_interval(s) / zeta_interval(2 * s)
    ps = sieve_primes(cutoff).between(2, cutoff - 1)
    head = fprod(1 + Interval(int(p)) ** (-Interval(s)) for p in ps)
    return (ratio / head) ** M


# --- products ------------------------------------------------------------------------------


def _exact_factor(row: TRow) -> Interval:
    p = row.p
    return 1 - (row.Tp - row.T1) / ((p - 1) * (1 + row.T1))


def product_mid_range(lo: int = 11, hi: int = 500, mode: str = "exact_T", *,
                      rows: list[TRow] | None = None, workers: int | None = None) -> Interval:
    """exact_T: prod over lo <= p <= hi of 1 - (T_p - T_1)/((p-1)(1+T_1)).
    envelope: prod over lo < p <= hi of 1 + ratio_envelope(p)."""
    if mode == "exact_T":
        if rows is None:
            rows = T_table(lo, hi, workers=workers)
        return fprod(_exact_factor(r) for r in rows if lo <= r.p <= hi)
    if mode == "envelope":
        ps = [int(p) for p in sieve_primes(hi).between(lo + 1, hi)]
        return fprod(1 + ratio_envelope(p) for p in ps)
    raise ValueError(f"mode must be 'exact_T' or 'envelope', got {mode!r}")


@dataclass(frozen=True)
class SieveChain:
    rows: list[TRow]
    exact_product: Interval
    envelope_product: Interval
    zeta7: Interval
    combined: Interval
    M1: Interval
    M2: Interval
    T1_3: Interval
    T1_9: Interval
    s1_head: Interval
    s1_tail: Interval
    s1_mid: Interval
    frakS1: Interval


def sieve_chain(*, workers: int | None = None) -> SieveChain:
    rows = T_table(5, 500, workers=workers)
    m1, m2 = M_constants()
    exact = product_mid_range(11, 500, "exact_T", rows=rows)
    env = product_mid_range(500, SPLIT, "envelope")
    z7 = zeta_tail(Fraction(7, 2), m1)
    t13 = T_value(3).value
    t19 = T_value(9).value
    head = (1 + t13 + t19) * fprod(1 + r.T1 for r in rows)
    z3 = zeta_tail(Fraction(3), m2)
    mid = fprod(1 + T1_envelope(int(p)) for p in sieve_primes(SPLIT).between(501, SPLIT))
    return SieveChain(rows, exact, env, z7, exact * z7 * env, m1, m2, t13, t19, head, z3, mid, head * z3 * mid)


def W_coefficient(chain: SieveChain | None = None, imported="40.197") -> ConstantReport:
    chain = chain or sieve_chain()
    imp = Interval(imported)
    value = imp * chain.combined
    notes = [
        f"exact-T product over [11, 500]: [{chain.exact_product.lo_str(12)}, {chain.exact_product.hi_str(12)}]",
        f"envelope product over (500, 4000]: hi {chain.envelope_product.hi_str(12)}",
        f"zeta(7/2) tail: hi {chain.zeta7.hi_str(12)}",
        f"combined: hi {chain.combined.hi_str(12)}",
    ]
    return ConstantReport("W_coefficient", "41.379367", "<=", value, imports=[IMPORT_40197], notes=notes)


def frakS1_bound(chain: SieveChain | None = None) -> ConstantReport:
    chain = chain or sieve_chain()
    notes = [
        f"T_1(3) = [{chain.T1_3.lo_str(12)}, {chain.T1_3.hi_str(12)}]",
        f"T_1(9) = [{chain.T1_9.lo_str(12)}, {chain.T1_9.hi_str(12)}]",
        f"(1+T_1(3)+T_1(9)) prod_(5<=p<=500)(1+T_1(p)): hi {chain.s1_head.hi_str(12)} (<= 3.0963)",
        f"zeta(3) tail: hi {chain.s1_tail.hi_str(14)} (<= 1.00000047413)",
        f"500-4000 envelope: hi {chain.s1_mid.hi_str(14)} (<= 1.00003994288)",
    ]
    return ConstantReport("frakS1", "3.096427", "<=", chain.frakS1, notes=notes)


def lemma212_chain(W=None, S1=None, imported="440.62") -> ConstantReport:
    """e^gamma * 440.62 * W * S1, with W and S1 defaulting to the published
    bounds 41.379367 and 3.096427 (each certified separately)."""
    W = Interval(W if W is not None else "41.379367")
    S1 = Interval(S1 if S1 is not None else "3.096427")
    eg = exp(euler_gamma())
    inner = W * S1
    value = eg * Interval(imported) * inner
    notes = [
        f"W * S1 = [{inner.lo_str(12)}, {inner.hi_str(12)}] (published 128.1282)",
        f"e^gamma = [{eg.lo_str(12)}, {eg.hi_str(12)}]",
    ]
    return ConstantReport("lemma212", "100551.95119", "<=", value, Fraction(1, 100), relative=True,
                          imports=[IMPORT_44062], notes=notes)


SHAPE_FACTOR = Fraction(1, 3) ** 4 * Fraction(5, 18) ** 4


def lemma213_214_constants(chain_value="100551.95119") -> tuple[ConstantReport, ConstantReport]:
    c = Interval(chain_value) * SHAPE_FACTOR
    r13 = ConstantReport("lemma213", "7.390869", "<=", c, Fraction(1, 10**5),
                         notes=[f"(1/3)^4 (5/18)^4 = {SHAPE_FACTOR}", f"input chain value {chain_value}"])
    r14 = ConstantReport("lemma214", "54.62495", "<=", c * c, Fraction(1, 10**4),
                         notes=["square of the lemma213 constant"])
    return r13, r14
