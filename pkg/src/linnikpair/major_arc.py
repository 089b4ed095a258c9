"""The singular integral J(n), the main-term constant, and Parseval checks.

J(n) sums m2^{-1/2} (m3 m4)^{-2/3} over m1 + m2 + m3 + m4 = n with
m1, m2 in [1, N], m3 in [U^3, 8U^3], m4 in [V^3, 8V^3].

For a continuous stand-in, put x3 = u^3 and x4 = w^3. Then
(x3 x4)^{-2/3} dx3 dx4 = 9 du dw and

    Jc(n) = int_U^{2U} int_V^{2V} 18 sqrt(n - u^3 - w^3) dw du,

which is smooth on the box. It is evaluated with a midpoint rule whose
error is bounded through explicit second derivatives, plus an allowance
for floating-point rounding.

Because every summand is decreasing in m3 and m4, the discrete sum is
trapped between two shifted integrals of the same shape; see
:func:`discrete_bracket`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .arith import sieve_primes
from .errors import WorkBoundError
from .interval import CInterval, Interval, csum, fsum, log, sqrt
from .reports import ConstantReport, Import

DELTA = Fraction(1, 10**4)
C2 = "2.338190371"
EXACT_MAX_N = 10**5
UNIT = 2.0**-53


@dataclass(frozen=True)
class FrakJParams:
    N: int
    n: int
    delta: Fraction = DELTA

    def __post_init__(self):
        if self.N < 100:
            raise ValueError("N must be at least 100")
        lo = (1 - Fraction(self.delta)) * self.N
        if not (lo <= self.n <= self.N):
            raise ValueError(f"n = {self.n} outside the window [(1-delta)N, N]")

    @classmethod
    def edge(cls, N: int, side: str = "right", delta: Fraction = DELTA) -> "FrakJParams":
        """Parameters at n = N (``right``) or the least integer n >= (1 - delta)N (``left``)."""
        if side == "right":
            return cls(N, N, delta)
        return cls(N, math.ceil((1 - Fraction(delta)) * N), delta)

    @property
    def U3(self) -> Fraction:
        return Fraction(self.N) / (16 * (1 + Fraction(self.delta)))

    @property
    def U(self) -> Interval:
        return Interval(self.U3) ** Fraction(1, 3)

    @property
    def V(self) -> Interval:
        return Interval(self.U3) ** Fraction(5, 18)

    @property
    def V3(self) -> Interval:
        return Interval(self.U3) ** Fraction(5, 6)

    def m3_range(self) -> tuple[int, int]:
        return math.ceil(self.U3), math.floor(8 * self.U3)

    def m4_range(self) -> tuple[int, int]:
        v3 = self.V3
        a = {math.ceil(v3.lo_fraction()), math.ceil(v3.hi_fraction())}
        b = {math.floor(8 * v3.lo_fraction()), math.floor(8 * v3.hi_fraction())}
        if len(a) != 1 or len(b) != 1:
            raise ArithmeticError("V^3 too close to an integer to round at this precision")
        return a.pop(), b.pop()


# --- exact lattice sum ------------------------------------------------------------


def _prefix(N: int) -> np.ndarray:
    m = np.arange(1, N + 1, dtype=np.float64)
    return np.concatenate(([0.0], np.cumsum(m**-0.5)))


def frakJ_exact(params: FrakJParams, *, m3_split: tuple[int, int] | None = None) -> Interval:
    """Direct summation with prefix sums over m2, in floating point, with an
    a-priori bound on the accumulated rounding error.

    ``m3_split`` restricts m3 to a sub-range (used to test additivity).
    """
    N, n = params.N, params.n
    if N > EXACT_MAX_N:
        raise WorkBoundError(f"N = {N} exceeds {EXACT_MAX_N}; use frakJ_continuous")
    a3, b3 = params.m3_range()
    if m3_split is not None:
        a3, b3 = max(a3, m3_split[0]), min(b3, m3_split[1])
    a4, b4 = params.m4_range()
    if n < a3 + a4 + 2 or a3 > b3:
        return Interval(0)
    prefix = _prefix(N)
    val = kernels.frakj_lattice_sum(n, N, a3, b3, a4, b4, prefix)
    # prefix entries carry relative error <= (N+2)u; weights <= 2u each;
    # the two nested accumulations add (b3-a3) + (b4-a4) + 2 more
    rel = (N + 2 + 2 * 2 + (b3 - a3) + (b4 - a4) + 8) * UNIT
    # a difference of two prefix entries loses relative accuracy; bound it
    # by the absolute error of the larger entry, at most 2 sqrt(N) * (N+2)u
    w3 = sum(m ** (-2.0 / 3.0) for m in range(a3, b3 + 1))
    w4 = sum(m ** (-2.0 / 3.0) for m in range(a4, b4 + 1))
    absdiff = 2 * 2 * math.sqrt(N) * (N + 2) * UNIT * w3 * w4
    err = 2 * (val * rel + absdiff)
    return Interval(val - err, val + err)


# --- continuous surrogate ---------------------------------------------------------


def _box_integral(Y: int, u0: Interval, u1: Interval, w0: Interval, w1: Interval, K: int) -> Interval:
    """Enclosure of int int sqrt(Y - u^3 - w^3) over [u0,u1] x [w0,w1].

    The box endpoints are rounded outward for the error bounds and inward
    for the midpoint evaluation; the difference is covered by the
    integrand's maximum times the slab areas.
    """
    fu0, fu1 = float(u0.mid), float(u1.mid)
    fw0, fw1 = float(w0.mid), float(w1.mid)
    val = kernels.midpoint_sqrt_cubes(float(Y), fu0, fu1, fw0, fw1, K)
    ub, wb = u1.hi, w1.hi
    ua, wa = u0.lo, w0.lo
    R = Interval(Y) - Interval(ub) ** 3 - Interval(wb) ** 3
    if not R.certainly_positive():
        raise ValueError("integrand vanishes on the box")
    Rmin = R.lo
    hu = (Interval(ub) - Interval(fu0)) / K
    hw = (Interval(wb) - Interval(fw0)) / K
    area = (Interval(ub) - Interval(ua)) * (Interval(wb) - Interval(wa))
    sR = sqrt(Interval(Rmin))
    # |d^2/du^2 sqrt(R)| <= 3u/sqrt(R) + (9/4) u^4 / R^{3/2}
    duu = 3 * Interval(ub) / sR + Fraction(9, 4) * Interval(ub) ** 4 / (sR * Interval(Rmin))
    dww = 3 * Interval(wb) / sR + Fraction(9, 4) * Interval(wb) ** 4 / (sR * Interval(Rmin))
    quad = area * (hu * hu * duu + hw * hw * dww) / 24
    fmax = sqrt(Interval(Y))
    # node placement error: each node is off by a few ulps of its coordinate
    grad = Fraction(3, 2) * (Interval(ub) ** 2 + Interval(wb) ** 2) / sR
    node = area * grad * Interval(ub + wb) * (8 * UNIT)
    rounding = area * fmax * ((2 * K + 20) * UNIT)
    # mismatch between float box and the true box
    slab = fmax * (
        (abs(Interval(fu0) - u0) + abs(Interval(fu1) - u1)) * (Interval(wb) - Interval(wa))
        + (abs(Interval(fw0) - w0) + abs(Interval(fw1) - w1)) * (Interval(ub) - Interval(ua))
    )
    err = (quad + node + rounding + slab).hi
    return Interval(Interval(val) - err, Interval(val) + err)


@dataclass(frozen=True)
class FrakJContinuous:
    params: FrakJParams
    surrogate: Interval  # Jc(n) on the nominal box
    discrete: Interval  # enclosure of the lattice sum J(n)
    K: int

    @property
    def ratio(self) -> Interval:
        """surrogate / N^{10/9}."""
        return self.surrogate / Interval(self.params.N) ** Fraction(10, 9)

    @property
    def declared_error(self) -> Fraction:
        """Largest possible gap between the surrogate and the lattice sum."""
        return max(self.surrogate.hi_fraction() - self.discrete.lo_fraction(),
                   self.discrete.hi_fraction() - self.surrogate.lo_fraction())

    @property
    def discrete_ratio(self) -> Interval:
        return self.discrete / Interval(self.params.N) ** Fraction(10, 9)

    def to_dict(self, digits: int = 20) -> dict:
        return {
            "N": self.params.N,
            "n": self.params.n,
            "lo": self.surrogate.lo_str(digits),
            "hi": self.surrogate.hi_str(digits),
            "discrete_lo": self.discrete.lo_str(digits),
            "discrete_hi": self.discrete.hi_str(digits),
            "method": f"midpoint K={self.K}",
        }


def _cuberoot(x) -> Interval:
    return Interval(x) ** Fraction(1, 3)


def discrete_bracket(params: FrakJParams, K: int) -> Interval:
    """Enclosure of J(n) from shifted integrals.

    With S(X) = sum_{m<=X} m^{-1/2} one has 2 sqrt(X+1) - 2 <= S(X) <= 2 sqrt(X) - 1.
    Writing a3..b3, a4..b4 for the integer ranges, monotonicity gives

        J >= int_{a3}^{b3+1} int_{a4}^{b4+1} (x3 x4)^{-2/3} (2 sqrt(n - x3 - x4) - 2)
        J <= int_{a3-1}^{b3} int_{a4-1}^{b4} (x3 x4)^{-2/3} (2 sqrt(n - x3 - x4) - 1).

    The m1 <= N and m2 <= N limits never bind inside the window.
    """
    n, N = params.n, params.N
    a3, b3 = params.m3_range()
    a4, b4 = params.m4_range()
    assert n - a3 - a4 - 1 < N and n - N <= 0

    def piece(x3a, x3b, x4a, x4b, c):
        ua, ub, wa, wb = _cuberoot(x3a), _cuberoot(x3b), _cuberoot(x4a), _cuberoot(x4b)
        sq = _box_integral(n, ua, ub, wa, wb, K) * 18
        const = (ub - ua) * (wb - wa) * 9 * c
        return sq - const

    lower = piece(a3, b3 + 1, a4, b4 + 1, 2)
    upper = piece(a3 - 1, b3, a4 - 1, b4, 1)
    return Interval(lower.lo, upper.hi)


def frakJ_continuous(params: FrakJParams, *, K: int = 256, rel_tol: float = 1e-9, K_max: int = 4096) -> FrakJContinuous:
    """Surrogate Jc(n) on [U, 2U] x [V, 2V], and the discrete enclosure.

    K doubles until the surrogate's relative width is below ``rel_tol`` or
    ``K_max`` is reached; the last (still rigorous) enclosure is returned.
    """
    U, V = params.U, params.V
    while True:
        sur = _box_integral(params.n, U, 2 * U, V, 2 * V, K) * 18
        width = sur.hi_fraction() - sur.lo_fraction()
        if width <= Fraction(rel_tol) * sur.lo_fraction() or K >= K_max:
            break
        K *= 2
    return FrakJContinuous(params, sur, discrete_bracket(params, K), K)


def window_check(N: int = 10**18, C=C2, **kw) -> tuple[Interval, list[FrakJContinuous]]:
    """Surrogate ratio at both window edges.

    Jc(n) increases with n, so the left edge is the infimum over the window.
    Returns (infimum ratio, [left, right] evaluations).
    """
    left = frakJ_continuous(FrakJParams.edge(N, "left"), **kw)
    right = frakJ_continuous(FrakJParams.edge(N, "right"), **kw)
    return left.ratio, [left, right]


def lemma22_report(N: int = 10**18, **kw) -> ConstantReport:
    inf_ratio, evals = window_check(N, **kw)
    notes = [
        f"N = {N}; surrogate ratio at n = ceil((1-delta)N): [{evals[0].ratio.lo_str(12)}, {evals[0].ratio.hi_str(12)}]",
        f"at n = N: [{evals[1].ratio.lo_str(12)}, {evals[1].ratio.hi_str(12)}]",
        "the surrogate increases in n, so the left edge is its window infimum",
    ]
    return ConstantReport("lemma22_surrogate", C2, ">=", inf_ratio, notes=notes,
                          imports=[Import("C2", C2, "cited prior work; checked against the surrogate")])


# --- main-term constant ------------------------------------------------------------------


def lemma25_constant(lemma24_value="3.261435", c2=C2) -> ConstantReport:
    """(1 / (2^2 3^4)) * lemma24 * C2^2."""
    l24 = lemma24_value if isinstance(lemma24_value, Interval) else Interval(lemma24_value)
    c = c2 if isinstance(c2, Interval) else Interval(c2)
    value = l24 * c * c / 324
    notes = [f"C2^2 = [{(c * c).lo_str(12)}, {(c * c).hi_str(12)}]"]
    return ConstantReport("lemma25", "0.055033", ">=", value, Fraction(1, 10**6), notes=notes)


# --- Parseval -----------------------------------------------------------------------------


@dataclass(frozen=True)
class ParsevalResult:
    which: str
    N: int
    integral: float  # (1/M) sum over a grid of |h(m/M)|^2, exact up to float error
    diagonal: Interval  # sum of log^2 p over the relevant primes
    trivial_bound: Interval  # N log N
    equal: bool
    within_bound: bool


def _exponents_and_weights(which: str, N: int) -> tuple[np.ndarray, list[int]]:
    if which == "f":
        ps = sieve_primes(max(N, 2)).between(2, N)
        return ps, [int(p) for p in ps]
    if which == "g":
        r = math.isqrt(N)
        ps = sieve_primes(max(r, 2)).between(2, r)
        return ps * ps, [int(p) for p in ps]
    raise ValueError(f"which must be 'f' or 'g', got {which!r}")


def parseval_identity(which: str, N: int) -> ParsevalResult:
    """Integral of |h|^2 over [0, 1] against the diagonal sum of log^2 p.

    Frequencies are distinct integers below M, so the grid average over M
    points equals the integral exactly; it is evaluated by FFT.
    """
    if N > 10**6:
        raise WorkBoundError("parseval_identity is limited to N <= 10^6")
    freqs, primes = _exponents_and_weights(which, N)
    M = 1 << int(max(int(freqs.max()) if len(freqs) else 1, 1)).bit_length()
    vec = np.zeros(M)
    vec[freqs] = np.log(np.array(primes, dtype=np.float64))
    integral = float(np.mean(np.abs(np.fft.fft(vec)) ** 2))
    diag = fsum(log(Interval(p)) ** 2 for p in primes)
    bound = Interval(N) * log(Interval(N))
    tol = 1e-9 * max(1.0, float(diag.hi))
    return ParsevalResult(which, N, integral, diag, bound,
                          abs(integral - float(diag.mid)) <= tol, diag.le(bound) or diag.hi <= bound.lo)


def rieger_sanity(N: int = 10**4) -> tuple[Interval, Interval]:
    """sum_m R(m)^2 with R(m) = sum_{p1^2 + p2^2 = m} log p1 log p2, i.e. the
    integral of |g|^4, together with its ratio to N log^2 N."""
    r = math.isqrt(N)
    ps = [int(p) for p in sieve_primes(max(r, 2)).between(2, r)]
    logs = {p: log(Interval(p)) for p in ps}
    R: dict[int, Interval] = {}
    for p1 in ps:
        for p2 in ps:
            m = p1 * p1 + p2 * p2
            R[m] = R.get(m, Interval(0)) + logs[p1] * logs[p2]
    total = fsum(v * v for _, v in sorted(R.items()))
    LN = log(Interval(N))
    return total, total / (Interval(N) * LN * LN)


# --- generating-function samples -------------------------------------------------------------


@dataclass(frozen=True)
class GenFnSample:
    which: str
    alpha: Fraction
    value: CInterval
    bound: Interval


def genfn_sample(which: str, alpha: Fraction, N: int) -> GenFnSample:
    """f, g, S, T or G at a rational point, as an interval complex number.

    ``bound`` is the trivial bound (sum of the weights), which |value| must
    not exceed.
    """
    from .arith import unit_phase

    alpha = Fraction(alpha)
    if which == "G":
        L = int(math.log2(N))
        terms = [unit_phase((alpha * 2**v).numerator, (alpha * 2**v).denominator).value for v in range(1, L + 1)]
        return GenFnSample(which, alpha, csum(terms), Interval(L))
    if which in ("f", "g"):
        lim = N if which == "f" else math.isqrt(N)
        e = 1 if which == "f" else 2
        ps = [int(p) for p in sieve_primes(max(lim, 2)).between(2, lim)]
    elif which in ("S", "T"):
        p3 = FrakJParams(N, N)
        base = p3.U if which == "S" else p3.V
        lo, hi = math.floor(base.hi_fraction()) + 1, math.floor(2 * base.lo_fraction())
        ps = [int(p) for p in sieve_primes(max(hi, 2)).between(lo, hi)]
        e = 3
    else:
        raise ValueError(f"unknown generating function {which!r}")
    logs = [log(Interval(p)) for p in ps]
    terms = []
    for p, lg in zip(ps, logs):
        x = alpha * p**e
        terms.append(unit_phase(x.numerator, x.denominator).value * lg)
    return GenFnSample(which, alpha, csum(terms), fsum(logs))
