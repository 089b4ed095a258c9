"""Exact arithmetic in Z[x]/(x^q - 1) and traces down to Q.

A complete exponential sum such as C_i(q, 1) = sum_{(m,q)=1} e(m^i/q) is the
image of the integer polynomial sum_m x^{m^i mod q} under x -> e(1/q), and
C_i(q, a) is its image under x -> e(a/q). Summing a product of such sums over
all a coprime to q therefore only needs the product's coefficient vector P:

    sum_{(a,q)=1} P(e(a/q)) = sum_j P_j c_q(j),

with c_q the Ramanujan sum. Everything here is exact integer arithmetic.
Products use Kronecker substitution on Python integers, which is valid
because every polynomial we multiply has non-negative coefficients.
"""
from __future__ import annotations

import math
from fractions import Fraction

from .arith import mobius, ramanujan_sum, totient


def power_poly(q: int, exponent: int, *, coprime_only: bool = True, scale: int = 1) -> list[int]:
    """Coefficients of sum_m x^{scale * m^exponent mod q} for m = 1..q."""
    out = [0] * q
    for m in range(1, q + 1):
        if coprime_only and math.gcd(m, q) != 1:
            continue
        out[(scale * pow(m, exponent, q)) % q] += 1
    return out


def reflect(poly: list[int]) -> list[int]:
    """x -> x^{-1}, i.e. complex conjugation of every evaluation."""
    q = len(poly)
    return [poly[(-j) % q] for j in range(q)]


def shift(poly: list[int], t: int) -> list[int]:
    """Multiply by x^t."""
    q = len(poly)
    return [poly[(j - t) % q] for j in range(q)]


def _pack(poly: list[int], nbytes: int) -> int:
    return int.from_bytes(b"".join(c.to_bytes(nbytes, "little") for c in poly), "little")


def mulmod(a: list[int], b: list[int]) -> list[int]:
    """Product of two non-negative coefficient vectors modulo x^q - 1."""
    q = len(a)
    if len(b) != q:
        raise ValueError("length mismatch")
    if min(a) < 0 or min(b) < 0:
        raise ValueError("Kronecker packing needs non-negative coefficients")
    bound = max(a) * max(b) * q
    nbytes = max(1, (bound.bit_length() + 8) // 8)
    prod = _pack(a, nbytes) * _pack(b, nbytes)
    raw = prod.to_bytes(nbytes * (2 * q), "little")
    out = [0] * q
    for j in range(2 * q - 1):
        c = int.from_bytes(raw[j * nbytes : (j + 1) * nbytes], "little")
        if c:
            out[j % q] += c
    return out


def product(*polys: list[int]) -> list[int]:
    acc = polys[0]
    for p in polys[1:]:
        acc = mulmod(acc, p)
    return acc


def trace(poly: list[int]) -> int:
    """sum over a coprime to q of poly(e(a/q)); an exact integer."""
    q = len(poly)
    cq = _ramanujan_row(q)
    return sum(c * r for c, r in zip(poly, cq) if c)


_ROWS: dict[int, list[int]] = {}


def _ramanujan_row(q: int) -> list[int]:
    row = _ROWS.get(q)
    if row is None:
        row = [ramanujan_sum(q, j) for j in range(q)]
        _ROWS[q] = row
    return row


def singular_numerators(q: int) -> list[int]:
    """``S[n] = sum_{(a,q)=1} C_2(q,a) C_3(q,a)^2 e(-an/q)`` for n = 0..q-1."""
    c2 = power_poly(q, 2)
    c3 = power_poly(q, 3)
    P = product(c2, c3, c3)
    cq = _ramanujan_row(q)
    # coefficient j of x^{-n} P is P[(j + n) mod q]
    return [sum(P[(j + n) % q] * cq[j] for j in range(q) if cq[j]) for n in range(q)]


def A_exact_table(q: int) -> list[Fraction]:
    """Exact A(n, q) for n = 0..q-1."""
    mu = mobius(q)
    if mu == 0:
        return [Fraction(0)] * q
    phi4 = totient(q) ** 4
    return [Fraction(mu * s, phi4) for s in singular_numerators(q)]


def T_exact(q: int, d: int) -> Fraction:
    """Exact T_d(q) = sum_{(a,q)=1} S(q, a d^3) C(q,a)^3 conj(C(q,a))^4 / (q phi(q)^7)."""
    s = power_poly(q, 3, coprime_only=False, scale=pow(d, 3, q))
    c = power_poly(q, 3)
    cbar = reflect(c)
    P = product(s, c, c, c, cbar, cbar, cbar, cbar)
    return Fraction(trace(P), q * totient(q) ** 7)
