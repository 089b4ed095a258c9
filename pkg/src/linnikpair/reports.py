"""Per-constant verification records shared by every module."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .interval import Interval

DIRECTIONS = (">=", "<=", "=")


@dataclass(frozen=True)
class Import:
    """A constant taken from outside the artifact rather than recomputed."""

    name: str
    value: str
    source: str


@dataclass
class ConstantReport:
    """One checked constant.

    ``tolerance`` is absolute unless ``relative`` is set, in which case it
    is multiplied by ``paper_value``. ``>=`` passes when ``lo >= target -
    tol``, ``<=`` when ``hi <= target + tol``, ``=`` when the padded target
    value meets the computed interval.
    """

    name: str
    paper_value: str
    direction: str
    computed: Interval
    tolerance: Fraction = Fraction(0)
    relative: bool = False
    imports: list[Import] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}")
        self.tolerance = Fraction(self.tolerance)

    @property
    def slack(self) -> Fraction:
        p = Fraction(self.paper_value)
        return self.tolerance * abs(p) if self.relative else self.tolerance

    @property
    def passed(self) -> bool:
        p = Fraction(self.paper_value)
        lo, hi = self.computed.lo_fraction(), self.computed.hi_fraction()
        if self.direction == ">=":
            return lo >= p - self.slack
        if self.direction == "<=":
            return hi <= p + self.slack
        return lo - self.slack <= p <= hi + self.slack

    @property
    def margin(self) -> Fraction:
        """Distance by which the check clears the printed value (negative on failure)."""
        p = Fraction(self.paper_value)
        if self.direction == ">=":
            return self.computed.lo_fraction() - p
        if self.direction == "<=":
            return p - self.computed.hi_fraction()
        return Fraction(0) if self.passed else -min(
            abs(p - self.computed.lo_fraction()), abs(p - self.computed.hi_fraction())
        )

    def to_dict(self, digits: int = 20) -> dict:
        return {
            "name": self.name,
            "paper_value": self.paper_value,
            "direction": self.direction,
            "lo": self.computed.lo_str(digits),
            "hi": self.computed.hi_str(digits),
            "tolerance": _frac_str(self.tolerance) + (" rel" if self.relative else ""),
            "imports": [
                {"name": i.name, "value": i.value, "source": i.source} for i in self.imports
            ],
            "notes": list(self.notes),
            "pass": self.passed,
        }

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return (
            f"[{mark}] {self.name}: computed [{self.computed.lo_str(12)}, "
            f"{self.computed.hi_str(12)}] {self.direction} {self.paper_value}"
        )


def _frac_str(x: Fraction) -> str:
    if x == 0:
        return "0"
    if x.denominator == 1:
        return str(x.numerator)
    # tolerances are powers of ten
    s = f"{float(x):.0e}"
    return s
