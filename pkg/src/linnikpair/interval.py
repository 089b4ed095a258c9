"""Outward-rounded real and complex intervals.

Endpoints are multiprecision binary floats handled by mpmath's interval
context, so every operation encloses the exact result. Working precision is
process-global (default 128 bits) and can be changed with
:func:`set_precision` or temporarily with :func:`working_precision`.
"""
from __future__ import annotations

import contextlib
import math
from decimal import Decimal
from fractions import Fraction
from numbers import Rational

import mpmath
from mpmath import iv

DEFAULT_PRECISION = 128

iv.prec = DEFAULT_PRECISION


def get_precision() -> int:
    return iv.prec


def set_precision(bits: int) -> None:
    if bits < 53:
        raise ValueError(f"precision must be at least 53 bits, got {bits}")
    iv.prec = int(bits)


@contextlib.contextmanager
def working_precision(bits: int):
    old = iv.prec
    set_precision(bits)
    try:
        yield
    finally:
        iv.prec = old


def _to_iv(x):
    if isinstance(x, Interval):
        return x._v
    if isinstance(x, iv.mpf):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a number here")
    if isinstance(x, int):
        return iv.mpf(x)
    if isinstance(x, Fraction) or isinstance(x, Rational):
        x = Fraction(x)
        if x.denominator == 1:
            return iv.mpf(x.numerator)
        return iv.mpf(x.numerator) / iv.mpf(x.denominator)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError("interval endpoints must be finite")
        # floats are exact binary numbers; the enclosure is the point itself
        return iv.mpf(Fraction(x).numerator) / iv.mpf(Fraction(x).denominator)
    if isinstance(x, str):
        return iv.mpf(x)
    if isinstance(x, mpmath.mpf):
        return iv.mpf([x, x])
    raise TypeError(f"cannot convert {type(x).__name__} to an interval")


def _raw(t) -> mpmath.mpf:
    # wrap a libmp tuple without rounding it to mpmath's global precision
    return mpmath.mp.make_mpf(t)


def _mpf_to_fraction(m: mpmath.mpf) -> Fraction:
    sign, man, exp, _ = m._mpf_
    if not man:
        return Fraction(0)
    if sign:
        man = -man
    if exp >= 0:
        return Fraction(int(man) << exp)
    return Fraction(int(man), 1 << (-exp))


def _decimal_round(x: Fraction, digits: int, direction: str) -> str:
    """Exact rounding of ``x`` to ``digits`` significant decimals, floor or ceil."""
    if x == 0:
        return "0"
    a = abs(x)
    e = len(str(a.numerator)) - len(str(a.denominator))
    if Fraction(10) ** e > a:
        e -= 1
    elif Fraction(10) ** (e + 1) <= a:
        e += 1
    scale = digits - 1 - e
    y = x * Fraction(10) ** scale
    n = math.floor(y) if direction == "floor" else math.ceil(y)
    d = Decimal(n).scaleb(-scale)
    return format(d, "E") if abs(e) > 6 else format(d, "f")


class Interval:
    """A closed real interval ``[lo, hi]`` with outward rounding.

    Accepts ints, :class:`fractions.Fraction`, decimal strings, floats and
    mpmath numbers; ``Interval(a, b)`` builds the hull of two values.
    """

    __slots__ = ("_v",)

    def __init__(self, lo, hi=None):
        if hi is None:
            self._v = _to_iv(lo)
        else:
            a, b = _to_iv(lo), _to_iv(hi)
            lo_ = min(_raw(a._mpi_[0]), _raw(b._mpi_[0]))
            hi_ = max(_raw(a._mpi_[1]), _raw(b._mpi_[1]))
            self._v = iv.mpf([lo_, hi_])
        if not (mpmath.isfinite(self.lo) and mpmath.isfinite(self.hi)):
            raise ValueError("interval endpoints must be finite")

    @classmethod
    def _wrap(cls, v) -> "Interval":
        obj = object.__new__(cls)
        obj._v = v
        return obj

    # -- endpoints -------------------------------------------------------
    @property
    def lo(self) -> mpmath.mpf:
        return _raw(self._v._mpi_[0])

    @property
    def hi(self) -> mpmath.mpf:
        return _raw(self._v._mpi_[1])

    @property
    def width(self) -> mpmath.mpf:
        return _raw(self._v.delta._mpi_[1])

    @property
    def mid(self) -> mpmath.mpf:
        return _raw(self._v.mid._mpi_[0])

    def lo_fraction(self) -> Fraction:
        return _mpf_to_fraction(self.lo)

    def hi_fraction(self) -> Fraction:
        return _mpf_to_fraction(self.hi)

    def lo_str(self, digits: int = 20) -> str:
        """Lower endpoint as a decimal string rounded toward -inf."""
        return _decimal_round(self.lo_fraction(), digits, "floor")

    def hi_str(self, digits: int = 20) -> str:
        """Upper endpoint as a decimal string rounded toward +inf."""
        return _decimal_round(self.hi_fraction(), digits, "ceil")

    # -- predicates ------------------------------------------------------
    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        if isinstance(x, (int, Fraction)):
            x = Fraction(x)
            return self.lo_fraction() <= x <= self.hi_fraction()
        v = _to_iv(x)
        return self.lo <= _raw(v._mpi_[0]) and _raw(v._mpi_[1]) <= self.hi

    __contains__ = contains

    def overlaps(self, other) -> bool:
        o = other if isinstance(other, Interval) else Interval(other)
        return not (self.hi < o.lo or o.hi < self.lo)

    def certainly_positive(self) -> bool:
        return self.lo > 0

    def certainly_negative(self) -> bool:
        return self.hi < 0

    def ge(self, x) -> bool:
        """True when every point of the interval is >= x."""
        return self.lo >= Interval(x).hi

    def le(self, x) -> bool:
        return self.hi <= Interval(x).lo

    def is_point(self) -> bool:
        return self.lo == self.hi

    def hull(self, other) -> "Interval":
        o = other if isinstance(other, Interval) else Interval(other)
        return Interval._wrap(iv.mpf([min(self.lo, o.lo), max(self.hi, o.hi)]))

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        return Interval._wrap(self._v + _to_iv(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Interval._wrap(self._v - _to_iv(other))

    def __rsub__(self, other):
        return Interval._wrap(_to_iv(other) - self._v)

    def __mul__(self, other):
        return Interval._wrap(self._v * _to_iv(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        d = _to_iv(other)
        if _raw(d._mpi_[0]) <= 0 <= _raw(d._mpi_[1]):
            raise ZeroDivisionError("divisor interval contains zero")
        return Interval._wrap(self._v / d)

    def __rtruediv__(self, other):
        return Interval(other) / self

    def __neg__(self):
        return Interval._wrap(-self._v)

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval._wrap(iv.mpf([0, max(-self.lo, self.hi)]))

    def __pow__(self, e):
        if isinstance(e, int):
            if e < 0:
                return Interval(1) / (self ** (-e))
            if e % 2 == 0 and self.lo < 0 < self.hi:
                m = max(-self.lo, self.hi)
                return Interval._wrap(iv.mpf([0, m]) ** e)
            return Interval._wrap(self._v ** e)
        if self.lo <= 0:
            raise ValueError("non-integer power needs a positive base")
        return exp(log(self) * e)

    # -- misc ------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Interval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return f"Interval({self.lo_str(12)}, {self.hi_str(12)})"

    def __getstate__(self):
        return (self.lo_fraction(), self.hi_fraction())

    def __setstate__(self, state):
        lo, hi = state
        self._v = iv.mpf([_mpf_exact(lo), _mpf_exact(hi)])


def _mpf_exact(fr: Fraction) -> mpmath.mpf:
    # endpoints always come from binary floats: the denominator is a power of two
    den = fr.denominator
    shift = den.bit_length() - 1
    assert den == 1 << shift
    return mpmath.mp.make_mpf(mpmath.libmp.from_man_exp(fr.numerator, -shift))


def sqrt(x) -> Interval:
    x = x if isinstance(x, Interval) else Interval(x)
    if x.lo < 0:
        raise ValueError("sqrt of an interval with negative part")
    return Interval._wrap(iv.sqrt(x._v))


def exp(x) -> Interval:
    return Interval._wrap(iv.exp(_to_iv(x)))


def log(x) -> Interval:
    x = x if isinstance(x, Interval) else Interval(x)
    if x.lo <= 0:
        raise ValueError("log of an interval touching zero")
    return Interval._wrap(iv.log(x._v))


def pi() -> Interval:
    return Interval._wrap(iv.pi)


def euler_gamma() -> Interval:
    return Interval._wrap(+iv.euler)


def fsum(values) -> Interval:
    acc = iv.mpf(0)
    for v in values:
        acc = acc + _to_iv(v)
    return Interval._wrap(acc)


def fprod(values) -> Interval:
    acc = iv.mpf(1)
    for v in values:
        acc = acc * _to_iv(v)
    return Interval._wrap(acc)


class CInterval:
    """Complex rectangle ``re + i*im`` with interval components."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = re if isinstance(re, Interval) else Interval(re)
        self.im = im if isinstance(im, Interval) else Interval(im)

    def __add__(self, other):
        o = _as_c(other)
        return CInterval(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _as_c(other)
        return CInterval(self.re - o.re, self.im - o.im)

    def __neg__(self):
        return CInterval(-self.re, -self.im)

    def __mul__(self, other):
        if not isinstance(other, CInterval):
            s = Interval(other)
            return CInterval(self.re * s, self.im * s)
        a, b, c, d = self.re._v, self.im._v, other.re._v, other.im._v
        return CInterval(Interval._wrap(a * c - b * d), Interval._wrap(a * d + b * c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, CInterval):
            den = other.abs2()
            num = self * other.conj()
            return CInterval(num.re / den, num.im / den)
        s = Interval(other)
        return CInterval(self.re / s, self.im / s)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = CInterval(1, 0)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def conj(self):
        return CInterval(self.re, -self.im)

    def abs2(self) -> Interval:
        return self.re ** 2 + self.im ** 2

    def abs(self) -> Interval:
        return sqrt(self.abs2())

    def contains(self, z) -> bool:
        z = _as_c(z)
        return self.re.contains(z.re) and self.im.contains(z.im)

    def __repr__(self):
        return f"CInterval({self.re!r}, {self.im!r})"


def _as_c(x) -> CInterval:
    if isinstance(x, CInterval):
        return x
    if isinstance(x, complex):
        return CInterval(Interval(x.real), Interval(x.imag))
    return CInterval(x, 0)


def csum(values) -> CInterval:
    re = iv.mpf(0)
    im = iv.mpf(0)
    for z in values:
        re = re + z.re._v
        im = im + z.im._v
    return CInterval(Interval._wrap(re), Interval._wrap(im))
