"""Hot inner loops, each in a numba flavour and a pure-numpy flavour.

The public wrappers at the bottom of each section dispatch on
:func:`linnikpair._accel.use_numba`. Both flavours must return identical
results; ``tests/test_kernels.py`` checks that and ``benchmarks/`` times them.
"""
from __future__ import annotations

import math

import numpy as np

from ._accel import njit, use_numba

# ---------------------------------------------------------------------------
# prime sieve
# ---------------------------------------------------------------------------


@njit
def _sieve_nb(limit):
    mark = np.ones(limit + 1, dtype=np.bool_)
    mark[0] = False
    if limit >= 1:
        mark[1] = False
    i = 2
    while i * i <= limit:
        if mark[i]:
            for j in range(i * i, limit + 1, i):
                mark[j] = False
        i += 1
    return mark


def _sieve_np(limit):
    mark = np.ones(limit + 1, dtype=np.bool_)
    mark[:2] = False
    mark[4::2] = False
    for i in range(3, math.isqrt(limit) + 1, 2):
        if mark[i]:
            mark[i * i :: 2 * i] = False
    return mark


def prime_mask(limit: int) -> np.ndarray:
    """Boolean array ``m`` of length ``limit + 1`` with ``m[k]`` true iff k is prime."""
    if use_numba():
        return _sieve_nb(limit)
    return _sieve_np(limit)


# ---------------------------------------------------------------------------
# residue-class DP for sums of powers of two
# ---------------------------------------------------------------------------


@njit
def _residue_dp_nb(dist, k, q):
    cur = np.zeros(q, dtype=np.int64)
    cur[0] = 1
    support = np.nonzero(dist)[0]
    for _ in range(k):
        nxt = np.zeros(q, dtype=np.int64)
        for r in range(q):
            c = cur[r]
            if c == 0:
                continue
            for s in support:
                nxt[(r + s) % q] += c * dist[s]
        cur = nxt
    return cur


def _residue_dp_np(dist, k, q):
    dtype = dist.dtype
    cur = np.zeros(q, dtype=dtype)
    cur[0] = 1
    support = np.nonzero(dist)[0]
    for _ in range(k):
        nxt = np.zeros(q, dtype=dtype)
        for s in support:
            nxt += np.roll(cur, int(s)) * dist[s]
        cur = nxt
    return cur


def residue_dp(dist: np.ndarray, k: int, q: int) -> np.ndarray:
    """Distribution mod q of the sum of k independent draws from ``dist``.

    ``dist[s]`` is the multiplicity of residue s. Object-dtype input is
    routed to the numpy path (numba has no big integers).
    """
    if use_numba() and dist.dtype == np.int64:
        return _residue_dp_nb(dist, k, q)
    return _residue_dp_np(dist, k, q)


# ---------------------------------------------------------------------------
# k-fold convolution of a sparse signed distribution
# ---------------------------------------------------------------------------


@njit
def _signed_power_nb(offsets, weights, k, lo, width):
    cur = np.zeros(1, dtype=np.int64)
    cur[0] = 1
    cur_lo = 0
    for layer in range(1, k + 1):
        new_lo = layer * lo
        nxt = np.zeros(layer * (width - 1) + 1, dtype=np.int64)
        for i in range(cur.shape[0]):
            c = cur[i]
            if c == 0:
                continue
            base = cur_lo + i - new_lo
            for t in range(offsets.shape[0]):
                nxt[base + offsets[t]] += c * weights[t]
        cur = nxt
        cur_lo = new_lo
    return cur


def _signed_power_np(offsets, weights, k, lo, width):
    dtype = weights.dtype
    cur = np.ones(1, dtype=dtype)
    cur_lo = 0
    for layer in range(1, k + 1):
        new_lo = layer * lo
        nxt = np.zeros(layer * (width - 1) + 1, dtype=dtype)
        n = cur.shape[0]
        for off, w in zip(offsets.tolist(), weights.tolist()):
            start = cur_lo + off - new_lo
            nxt[start : start + n] += cur * w
        cur = nxt
        cur_lo = new_lo
    return cur


def signed_power(offsets: np.ndarray, weights: np.ndarray, k: int) -> tuple[int, np.ndarray]:
    """Histogram of the sum of k draws; returns ``(lowest value, counts)``.

    ``offsets`` may be negative. ``counts[i]`` is the multiplicity of the
    value ``lowest + i``.
    """
    lo = int(offsets.min())
    hi = int(offsets.max())
    width = hi - lo + 1
    rel = (offsets - lo).astype(np.int64)
    if k == 0:
        return 0, np.ones(1, dtype=weights.dtype)
    if use_numba() and weights.dtype == np.int64:
        counts = _signed_power_nb(rel, weights, k, 0, width)
    else:
        counts = _signed_power_np(rel, weights, k, 0, width)
    return k * lo, counts


# ---------------------------------------------------------------------------
# |G(alpha)| on a uniform grid
# ---------------------------------------------------------------------------


@njit(parallel=False)
def _elambda_count_nb(L, M, thresh2):
    count = 0
    two_pi = 2.0 * np.pi
    for m in range(M):
        ang = two_pi * ((2 * m) % M) / M
        zr = math.cos(ang)
        zi = math.sin(ang)
        sr = 0.0
        si = 0.0
        for _ in range(L):
            sr += zr
            si += zi
            zr, zi = zr * zr - zi * zi, 2.0 * zr * zi
        if sr * sr + si * si >= thresh2:
            count += 1
    return count


def _elambda_count_np(L, M, thresh2, chunk=1 << 20):
    count = 0
    for start in range(0, M, chunk):
        m = np.arange(start, min(M, start + chunk), dtype=np.int64)
        ang = 2.0 * np.pi * ((2 * m) % M) / M
        z = np.exp(1j * ang)
        s = np.zeros_like(z)
        for _ in range(L):
            s += z
            z = z * z
        count += int(np.count_nonzero(s.real * s.real + s.imag * s.imag >= thresh2))
    return count


def elambda_count(L: int, M: int, thresh: float) -> int:
    """Number of grid points m/M, 0 <= m < M, with |sum_{v<=L} e(2^v m/M)| >= thresh."""
    t2 = float(thresh) ** 2
    if use_numba():
        return int(_elambda_count_nb(L, M, t2))
    return _elambda_count_np(L, M, t2)


# ---------------------------------------------------------------------------
# exact singular-integral lattice sum
# ---------------------------------------------------------------------------


@njit
def _frakj_nb(n, N, a3, b3, a4, b4, prefix):
    total = 0.0
    for m3 in range(a3, b3 + 1):
        w3 = m3 ** (-2.0 / 3.0)
        row = 0.0
        for m4 in range(a4, b4 + 1):
            rest = n - m3 - m4
            hi = min(N, rest - 1)
            lo = max(1, rest - N)
            if hi < lo:
                continue
            row += m4 ** (-2.0 / 3.0) * (prefix[hi] - prefix[lo - 1])
        total += w3 * row
    return total


def _frakj_np(n, N, a3, b3, a4, b4, prefix):
    m4 = np.arange(a4, b4 + 1, dtype=np.int64)
    w4 = m4.astype(np.float64) ** (-2.0 / 3.0)
    total = 0.0
    for m3 in range(a3, b3 + 1):
        rest = n - m3 - m4
        hi = np.minimum(N, rest - 1)
        lo = np.maximum(1, rest - N)
        ok = hi >= lo
        vals = np.where(ok, prefix[np.where(ok, hi, 0)] - prefix[np.where(ok, lo - 1, 0)], 0.0)
        # left-to-right accumulation to mirror the compiled loop's rounding budget
        row = 0.0
        for v in (w4 * vals).tolist():
            row += v
        total += m3 ** (-2.0 / 3.0) * row
    return total


def frakj_lattice_sum(n, N, a3, b3, a4, b4, prefix) -> float:
    """Float sum of m3^{-2/3} m4^{-2/3} sum_{m2} m2^{-1/2} over the box.

    ``prefix[x]`` must hold sum_{m<=x} m^{-1/2} with ``prefix[0] = 0``.
    """
    if use_numba():
        return float(_frakj_nb(n, N, a3, b3, a4, b4, prefix))
    return float(_frakj_np(n, N, a3, b3, a4, b4, prefix))


# ---------------------------------------------------------------------------
# midpoint rule for the continuous surrogate in cube-root coordinates
# ---------------------------------------------------------------------------


@njit
def _midpoint_nb(Y, u0, u1, w0, w1, K):
    hu = (u1 - u0) / K
    hw = (w1 - w0) / K
    total = 0.0
    for i in range(K):
        u = u0 + (i + 0.5) * hu
        u3 = u * u * u
        row = 0.0
        for j in range(K):
            w = w0 + (j + 0.5) * hw
            row += math.sqrt(Y - u3 - w * w * w)
        total += row
    return total * hu * hw


def _midpoint_np(Y, u0, u1, w0, w1, K):
    hu = (u1 - u0) / K
    hw = (w1 - w0) / K
    u = u0 + (np.arange(K) + 0.5) * hu
    w = w0 + (np.arange(K) + 0.5) * hw
    w3 = w * w * w
    total = 0.0
    for ui in u.tolist():
        total += float(np.sqrt(Y - ui * ui * ui - w3).sum())
    return total * hu * hw


def midpoint_sqrt_cubes(Y, u0, u1, w0, w1, K) -> float:
    """Midpoint-rule value of the integral of sqrt(Y - u^3 - w^3) over a box."""
    if use_numba():
        return float(_midpoint_nb(Y, u0, u1, w0, w1, K))
    return float(_midpoint_np(Y, u0, u1, w0, w1, K))


# ---------------------------------------------------------------------------
# meet-in-the-middle witness search
# ---------------------------------------------------------------------------


@njit
def _mitm_nb(target, cubes3, cubes4, squares2, is_prime):
    probes = 0
    for i in range(cubes3.shape[0]):
        r3 = target - cubes3[i]
        if r3 < 2 + 4 + 8:
            break
        for j in range(cubes4.shape[0]):
            r4 = r3 - cubes4[j]
            if r4 < 2 + 4:
                break
            for t in range(squares2.shape[0]):
                p1 = r4 - squares2[t]
                if p1 < 2:
                    break
                probes += 1
                if is_prime[p1]:
                    return i, j, t, probes
    return -1, -1, -1, probes


def _mitm_np(target, cubes3, cubes4, squares2, is_prime):
    probes = 0
    for i in range(cubes3.shape[0]):
        r3 = target - int(cubes3[i])
        if r3 < 14:
            break
        for j in range(cubes4.shape[0]):
            r4 = r3 - int(cubes4[j])
            if r4 < 6:
                break
            p1 = r4 - squares2
            p1 = p1[p1 >= 2]
            if p1.size == 0:
                continue
            hit = np.flatnonzero(is_prime[p1])
            if hit.size:
                probes += int(hit[0]) + 1
                return i, j, int(hit[0]), probes
            probes += int(p1.size)
    return -1, -1, -1, probes


def mitm_probe(target, cubes3, cubes4, squares2, is_prime) -> tuple[int, int, int, int]:
    """First (i, j, t) in lexicographic order with target - c3[i] - c4[j] - s2[t] prime.

    All three arrays must be ascending. Returns ``(-1, -1, -1, probes)`` when
    nothing is found.
    """
    if use_numba():
        i, j, t, probes = _mitm_nb(target, cubes3, cubes4, squares2, is_prime)
        return int(i), int(j), int(t), int(probes)
    return _mitm_np(target, cubes3, cubes4, squares2, is_prime)


# ---------------------------------------------------------------------------
# brute-force representation counts
# ---------------------------------------------------------------------------


@njit
def _brute_nb(target, primes):
    count = 0
    n = primes.shape[0]
    for a in range(n):
        c4 = primes[a] ** 3
        if c4 + 8 + 4 + 2 > target:
            break
        for b in range(n):
            c3 = primes[b] ** 3
            if c4 + c3 + 4 + 2 > target:
                break
            for c in range(n):
                s2 = primes[c] ** 2
                if c4 + c3 + s2 + 2 > target:
                    break
                for d in range(n):
                    p1 = primes[d]
                    tot = c4 + c3 + s2 + p1
                    if tot > target:
                        break
                    if tot == target:
                        count += 1
    return count


def representation_counts_np(limit: int, primes: np.ndarray) -> np.ndarray:
    """``R[m]`` = #{(p1,p2,p3,p4): p1 + p2^2 + p3^3 + p4^3 = m} for m <= limit."""
    primes = primes[primes <= limit]
    c = primes ** 3
    c = c[c <= limit]
    s = primes ** 2
    s = s[s <= limit]
    cubes = np.bincount((c[:, None] + c[None, :]).ravel(), minlength=limit + 1)[: limit + 1]
    tri = np.zeros(limit + 1, dtype=np.int64)
    nz = np.flatnonzero(cubes)
    for t in nz.tolist():
        ss = s[s + t <= limit]
        np.add.at(tri, ss + t, cubes[t])
    ind = np.zeros(limit + 1, dtype=np.int64)
    ind[primes] = 1
    full = np.convolve(ind, tri)[: limit + 1]
    return full.astype(np.int64)


def brute_count(target: int, primes: np.ndarray) -> int:
    """Ordered quadruples of primes (p1, p2, p3, p4) with p1 + p2^2 + p3^3 + p4^3 = target."""
    if target < 22:
        return 0
    if use_numba():
        return int(_brute_nb(target, primes[primes <= target]))
    return int(representation_counts_np(target, primes)[target])
