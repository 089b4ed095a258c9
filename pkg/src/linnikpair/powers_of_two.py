"""Sums of powers of two: the profile f(r) mod q, exact residue counts,
signed-difference histograms and a grid estimate of the large-value set of
G(alpha) = sum_{v<=L} e(2^v alpha)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .arith import multiplicative_order, phase_table
from .errors import ConsistencyError, WorkBoundError
from .export import write_csv
from .interval import CInterval, Interval, csum, get_precision, working_precision
from .reports import ConstantReport
from .singular_series import constant_C, sum_sq_identity

DP_WORK_BOUND = 10**7
HIST_MAX_CELLS = 1 << 27
LEMMA24_PRIMES = (3, 7, 13)
INT64_SAFE = 1 << 62


# --- f(r) profile ----------------------------------------------------------------


@dataclass(frozen=True)
class TwoAdicProfile:
    q: int
    rho: int
    f_table: tuple[Interval, ...]  # f_table[r - 1] = f(r), r = 1..q
    argmax: int
    max_value: Interval
    ties: tuple[int, ...]
    separated: bool
    precision: int

    def f(self, r: int) -> Interval:
        return self.f_table[(r - 1) % self.q]


def _doubling_classes(q: int) -> list[list[int]]:
    # r ~ 2r and r ~ -r give literally the same multiset of phases up to conjugation
    seen = [False] * q
    out = []
    for r in range(1, q):
        if seen[r]:
            continue
        cls = []
        stack = [r]
        while stack:
            x = stack.pop()
            if seen[x]:
                continue
            seen[x] = True
            cls.append(x)
            stack.extend(((2 * x) % q, (-x) % q))
        out.append(sorted(cls))
    return out


def _g(q: int, rho: int, r: int) -> CInterval:
    tab = phase_table(q)
    return csum(tab[(r * pow(2, v, q)) % q] for v in range(1, rho + 1))


def two_adic_profile(q: int, *, max_escalation: int = 4) -> TwoAdicProfile:
    """f(r) = |sum_{v=1}^{rho} e(r 2^v / q)| for r = 1..q, with a certified
    maximum over 1 <= r <= q - 1.

    Residues related by doubling or negation have equal f exactly and are
    grouped. The top group must be separated from the runner-up by interval
    bounds; precision is doubled up to ``max_escalation`` times the starting
    value before giving up and reporting the unresolved groups as ties.
    """
    if q < 3 or q % 2 == 0:
        raise ValueError(f"q must be odd and >= 3, got {q}")
    rho = multiplicative_order(2, q)
    classes = _doubling_classes(q)
    base = get_precision()
    prec = base
    while True:
        with working_precision(prec):
            reps = {cls[0]: _g(q, rho, cls[0]).abs() for cls in classes}
            table = [None] * q
            for cls in classes:
                for r in cls:
                    table[r - 1] = reps[cls[0]]
            table[q - 1] = Interval(rho)
            order = sorted(classes, key=lambda c: reps[c[0]].hi, reverse=True)
            top = reps[order[0][0]]
            tied = [c for c in order if reps[c[0]].overlaps(top)]
            separated = len(tied) == 1
        if separated or prec >= max_escalation * base:
            break
        prec *= 2
    ties = tuple(sorted(r for c in tied for r in c))
    return TwoAdicProfile(q, rho, tuple(table), ties[0], top, ties, separated, prec)


def parseval_f(profile: TwoAdicProfile) -> int:
    """sum_r f(r)^2, isolated as an integer; must equal q * rho."""
    s = Interval(0)
    for v in profile.f_table:
        s = s + v * v
    return _isolate_integer(s, "sum of f(r)^2")


def _isolate_integer(x: Interval, what: str) -> int:
    lo, hi = x.lo_fraction(), x.hi_fraction()
    n = math.ceil(lo)
    if n > hi or n + 1 <= hi:
        raise ConsistencyError(f"{what}: {x!r} does not isolate an integer")
    return n


# --- density at q = 273 and the two-adic constant ---------------------------------


def lemma24_density(q: int = 273, k: int = 27) -> Interval:
    """(1/q)(1 - (q - 1)(max f / rho)^k)."""
    prof = two_adic_profile(q)
    ratio = prof.max_value / prof.rho
    return (1 - (q - 1) * ratio**k) / q


def lemma24_constant(k: int = 27, C=None, *, convention: str = "standard") -> ConstantReport:
    """(2C)^2 * 273 * density(273, k).

    ``C`` defaults to the certified constant_C() enclosure. The factor 273
    stands for sum_j prod_{p in {3,7,13}} (1 + A(j,p))^2, which by the Chinese
    remainder theorem is the product of the per-prime sums; that product is
    checked to be at least 273 here.
    """
    if C is None:
        C = constant_C(convention=convention).computed
    C = C if isinstance(C, Interval) else Interval(C)
    sq = Interval(1)
    for p in LEMMA24_PRIMES:
        sq = sq * sum_sq_identity(p)
    if not sq.ge(273):
        raise ConsistencyError(f"sum of squares product {sq!r} below 273")
    dens = lemma24_density(273, k)
    value = (2 * C) ** 2 * 273 * dens
    notes = [
        f"k = {k}",
        f"C = [{C.lo_str(10)}, {C.hi_str(10)}]",
        f"density = [{dens.lo_str(10)}, {dens.hi_str(10)}]",
        f"prod over 3, 7, 13 of sum (1+A)^2 = [{sq.lo_str(10)}, {sq.hi_str(10)}] >= 273",
        f"convention: {convention}",
    ]
    return ConstantReport("lemma24", "3.261435", ">=", value, Fraction(1, 10**6), notes=notes)


# --- exact residue counts --------------------------------------------------------------


@dataclass(frozen=True)
class PowerSumCount:
    q: int
    k: int
    L: int
    j: int
    count: int


def _power_dist(q: int, L: int, dtype) -> np.ndarray:
    d = np.zeros(q, dtype=dtype)
    for v in range(1, L + 1):
        d[pow(2, v, q)] += 1
    return d


def power_sum_distribution(q: int, k: int, L: int, *, work_bound: int = DP_WORK_BOUND) -> np.ndarray:
    """``out[j]`` = #{(v_1..v_k) in [1, L]^k : sum 2^{v_i} = j mod q}."""
    if q < 1 or k < 0 or L < 1:
        raise ValueError("need q >= 1, k >= 0, L >= 1")
    if k * L > work_bound:
        raise WorkBoundError(f"k*L = {k * L} exceeds the work bound {work_bound}")
    dtype = np.int64 if L**k < INT64_SAFE else object
    return kernels.residue_dp(_power_dist(q, L, dtype), k, q)


def power_sum_count_dp(q: int, k: int, L: int, j: int, *, work_bound: int = DP_WORK_BOUND) -> PowerSumCount:
    dist = power_sum_distribution(q, k, L, work_bound=work_bound)
    return PowerSumCount(q, k, L, j % q, int(dist[j % q]))


def power_sum_count_expsum(q: int, k: int, j: int, L: int | None = None, *, max_escalation: int = 4) -> Interval:
    """(1/q) sum_{r=1}^q e(-rj/q) g(r)^k with g(r) = sum_{v<=L} e(r 2^v/q).

    Exact only when L is a whole number of periods of 2 mod q. The returned
    interval is certified to contain exactly one integer.
    """
    rho = multiplicative_order(2, q)
    L = rho if L is None else L
    if L % rho:
        raise ValueError(f"L = {L} is not a multiple of the period {rho}")
    base = get_precision()
    prec = base
    while True:
        with working_precision(prec):
            tab = phase_table(q)
            terms = []
            for r in range(1, q + 1):
                g = _g(q, rho, r) * (L // rho)
                terms.append(tab[(-r * j) % q] * g**k)
            total = csum(terms)
            re, im = total.re / q, total.im / q
            lo, hi = re.lo_fraction(), re.hi_fraction()
            n = math.ceil(lo)
            ok = n <= hi < n + 1 and im.contains(0) and hi - lo < 1
        if ok:
            return re
        if prec >= max_escalation * base:
            raise ConsistencyError(f"expsum count ({q},{k},{j}) not isolated: {re!r}")
        prec *= 2


def expsum_integer(q: int, k: int, j: int, L: int | None = None) -> int:
    return _isolate_integer(power_sum_count_expsum(q, k, j, L), "expsum count")


# --- signed histogram r_k(h) -------------------------------------------------------------


@dataclass(frozen=True)
class RkHistogram:
    """r_k(h) for h in [lowest, lowest + len(counts) - 1]."""

    k: int
    L: int
    lowest: int
    counts: np.ndarray = field(repr=False)

    def __getitem__(self, h: int) -> int:
        i = h - self.lowest
        if 0 <= i < len(self.counts):
            return int(self.counts[i])
        return 0

    def total(self) -> int:
        return int(sum(int(c) for c in self.counts))

    def items(self):
        for i in np.flatnonzero(self.counts):
            yield self.lowest + int(i), int(self.counts[i])

    def write_csv(self, path):
        return write_csv(path, ["h", "count"], self.items())


def r_k_histogram(k: int, L: int, *, lower: int = 4, max_cells: int = HIST_MAX_CELLS) -> RkHistogram:
    """Number of (v_j, u_j) in [lower, L]^{2k} with sum 2^{v_j} - 2^{u_j} = h."""
    if k < 0 or L < lower:
        raise ValueError("need k >= 0 and L >= lower")
    span = 2 ** L - 2 ** lower
    cells = 2 * k * span + 1
    if cells > max_cells:
        raise WorkBoundError(f"histogram needs {cells} cells, bound is {max_cells}")
    diffs: dict[int, int] = {}
    for v in range(lower, L + 1):
        for u in range(lower, L + 1):
            h = 2**v - 2**u
            diffs[h] = diffs.get(h, 0) + 1
    total = (L - lower + 1) ** (2 * k)
    dtype = np.int64 if total < INT64_SAFE else object
    offsets = np.array(sorted(diffs), dtype=np.int64)
    weights = np.array([diffs[h] for h in sorted(diffs)], dtype=dtype)
    lowest, counts = kernels.signed_power(offsets, weights, k)
    return RkHistogram(k, L, lowest, counts)


# --- empirical E_lambda --------------------------------------------------------------------


@dataclass(frozen=True)
class EMeasure:
    """Grid estimate of meas{alpha : |G(alpha)| >= lambda L}. Not rigorous."""

    lam: float
    L: int
    grid: int
    measure: float
    exponent_fit: float | None
    fit_points: tuple[tuple[int, float], ...] = ()

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "L": self.L,
            "grid": self.grid,
            "measure": self.measure,
            "exponent_fit": self.exponent_fit,
            "rigorous": False,
        }


def default_grid(L: int, q: int = 273) -> int:
    return (1 << L) * q


def grid_measure(lam: float, L: int, grid_size: int | None = None) -> float:
    M = default_grid(L) if grid_size is None else int(grid_size)
    if M < (1 << L):
        raise ValueError(f"grid of {M} points under-samples G at L = {L}")
    if not 0 <= lam <= 1:
        raise ValueError("lambda must lie in [0, 1]")
    # tiny slack so that exactly aligned points survive float rounding
    thresh = lam * L * (1 - 1e-12)
    return kernels.elambda_count(L, M, thresh) / M


def measure_E_lambda_empirical(lam: float, L: int, grid_size: int | None = None,
                               fit_Ls=None) -> EMeasure:
    """Measure at L plus a least-squares exponent from log meas vs log 2^L.

    ``fit_Ls`` defaults to every fourth L from L - 8 up to L (at least 4);
    each uses its own aligned grid 2^L' * 273.
    """
    m = grid_measure(lam, L, grid_size)
    if fit_Ls is None:
        fit_Ls = [x for x in range(L - 8, L, 4) if x >= 4]
    pts = [(x, grid_measure(lam, x)) for x in fit_Ls if x != L] + [(L, m)]
    pts = sorted(pts)
    usable = [(x, y) for x, y in pts if y > 0]
    slope = None
    if len(usable) >= 2:
        xs = np.array([x * math.log(2) for x, _ in usable])
        ys = np.array([math.log(y) for _, y in usable])
        slope = -float(np.polyfit(xs, ys, 1)[0])
    return EMeasure(float(lam), L, default_grid(L) if grid_size is None else int(grid_size), m, slope, tuple(pts))
