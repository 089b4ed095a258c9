"""The minor-arc constant, the minimal-k solver, and the aggregated report."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import major_arc, powers_of_two, sieve_constants, singular_series
from .interval import Interval, get_precision, working_precision
from .reports import ConstantReport, Import

REPORT_VERSION = "1.0"
LAMBDA = "0.8512"
MAIN = "0.055033"
MINOR = "132.42956"
EXPONENT_SHIFT = Fraction(15, 2)

DEFAULT_IMPORTS = {
    "305.8869": "305.8869",
    "23.39": "23.39",
    "440.62": "440.62",
    "40.197": "40.197",
    "0.984127": "0.984127",
}


# --- minor-arc constant --------------------------------------------------------------


def exponent_audit() -> Fraction:
    """Power of N_i collected by the Hoelder split: 1/2 + 1/4 + 13/36."""
    return Fraction(1, 2) + Fraction(1, 4) + Fraction(13, 36)


def lemma215_constant(delta: Fraction = major_arc.DELTA, *, lemma214="54.62495",
                      i305="305.8869", i2339="23.39") -> ConstantReport:
    """305.8869^{1/2} (7744 * 23.39)^{1/4} 54.62495^{1/4} (16(1+delta))^{-13/18}.

    7744 = (8 * 11)^2. The last factor turns (U_1 U_2 V_1^4 V_2^4)^{1/4} into a
    power of N_1 N_2 via U^3 = N/(16(1+delta)) and V = U^{5/6}.
    """
    prod2339 = 7744 * Fraction(i2339)
    q = Fraction(1, 4)
    value = (Interval(i305) ** Fraction(1, 2) * Interval(prod2339) ** q * Interval(lemma214) ** q
             * Interval(16 * (1 + Fraction(delta))) ** Fraction(-13, 18))
    notes = [
        f"7744 * {i2339} = {float(prod2339):.2f} (exact rational {prod2339})",
        f"N-exponent per variable: {exponent_audit()}",
    ]
    imports = [
        Import("f^2 G^4 integral", i305, "cited minor-arc mean value"),
        Import("r_11 weighted sum", i2339, "cited power-of-two mean value"),
    ]
    return ConstantReport("lemma215", MINOR, "<=", value, Fraction(1, 100), relative=True,
                          imports=imports, notes=notes)


def check_181132() -> ConstantReport:
    v = 7744 * Fraction("23.39")
    return ConstantReport("7744x23.39", "181132.16", "=", Interval(v), notes=[f"exact: {v}"])


# --- minimal k -------------------------------------------------------------------------


@dataclass
class GateResult:
    lam: Fraction
    main: Interval
    minor: Interval
    minimal_k: int | None
    margins: dict[int, Interval] = field(default_factory=dict)
    indeterminate_at: int | None = None
    label: str = "printed constants"

    def to_dict(self, digits: int = 20) -> dict:
        return {
            "label": self.label,
            "lambda": str(self.lam),
            "main": [self.main.lo_str(digits), self.main.hi_str(digits)],
            "minor": [self.minor.lo_str(digits), self.minor.hi_str(digits)],
            "minimal_k": self.minimal_k,
            "indeterminate_at": self.indeterminate_at,
            "margins": {str(k): [m.lo_str(digits), m.hi_str(digits)] for k, m in sorted(self.margins.items())},
        }

    def line(self) -> str:
        if self.minimal_k is None:
            return f"[gate] {self.label}: indeterminate at k = {self.indeterminate_at}"
        k = self.minimal_k
        parts = ", ".join(f"k={j}: [{m.lo_str(6)}, {m.hi_str(6)}]" for j, m in sorted(self.margins.items()))
        return f"[gate] {self.label}: minimal k = {k} at lambda = {self.lam}; margins {parts}"


def margin(k: int, lam, main, minor) -> Interval:
    """main - minor * lambda^{k - 15/2}."""
    lam = Interval(Fraction(lam))
    return Interval(main) - Interval(minor) * lam ** (Fraction(k) - EXPONENT_SHIFT)


def minimal_k(lam=LAMBDA, main=MAIN, minor=MINOR, *, k_max: int = 10**5, max_escalation: int = 4,
              label: str = "printed constants") -> GateResult:
    """Smallest integer k > 15/2 whose margin is certified positive.

    A margin interval that straddles zero is recomputed at doubled precision,
    up to ``max_escalation`` times the current precision, then reported as
    indeterminate.
    """
    lam_f = Fraction(lam)
    mi, mo = Interval(main), Interval(minor)
    if not (0 < lam_f < 1):
        raise ValueError("lambda must lie in (0, 1)")
    if not (mi.certainly_positive() and mo.certainly_positive()):
        raise ValueError("main and minor constants must be positive")
    base = get_precision()
    k = math.floor(EXPONENT_SHIFT) + 1
    while k <= k_max:
        prec = base
        while True:
            with working_precision(prec):
                m = margin(k, lam_f, main, minor)
            if m.lo > 0 or m.hi <= 0 or prec >= max_escalation * base:
                break
            prec *= 2
        if m.lo > 0:
            margins = {j: margin(j, lam_f, main, minor) for j in (k - 1, k, k + 1)}
            return GateResult(lam_f, mi, mo, k, margins, label=label)
        if m.hi > 0:
            return GateResult(lam_f, mi, mo, None, {k: m}, indeterminate_at=k, label=label)
        k += 1
    return GateResult(lam_f, mi, mo, None, {}, indeterminate_at=k_max, label=label)


# --- aggregation -------------------------------------------------------------------------


@dataclass
class FullReport:
    reports: list[ConstantReport]
    gates: list[GateResult]
    informational: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports) and self.gates[0].minimal_k == 56

    def to_dict(self, digits: int = 20) -> dict:
        g = self.gates[0]
        gate = {
            "lambda": str(g.lam),
            "minimal_k": g.minimal_k,
            "margins": g.to_dict(digits)["margins"],
            "variants": [x.to_dict(digits) for x in self.gates],
        }
        return {
            "version": REPORT_VERSION,
            "precision_bits": get_precision(),
            "reports": [r.to_dict(digits) for r in self.reports],
            "gate": gate,
            "informational": self.informational,
            "pass": self.passed,
        }


def _eq(name: str, value: int, target: str) -> ConstantReport:
    return ConstantReport(name, target, "=", Interval(value))


def singular_series_reports(imports: dict, workers=None, prime_limit: int = 10**6) -> tuple[list[ConstantReport], dict]:
    out = []
    tol = Fraction(1, 10**6)
    for conv, tag in (("standard", ""), ("flipped", "[flipped]")):
        for p, target in ((5, "0.984375"), (11, "0.999000"), (199, "0.998903")):
            rec = singular_series.local_factor_min(p, conv)
            out.append(ConstantReport(f"local_min_{p}{tag}", target, ">=", rec.min, tol,
                                      notes=[f"exact {rec.exact[rec.ties[0] - 1]}", f"ties {list(rec.ties)}"]))
        out.append(ConstantReport(f"small_prime_product{tag}", "0.9568859", ">=",
                                  singular_series.product_small_primes(convention=conv), tol))
    mid = singular_series.tail_product(199, prime_limit, workers=workers)
    out.append(ConstantReport("tail_product", "0.958892", ">=", mid, tol, notes=[f"primes in (199, {prime_limit})"]))
    out.append(ConstantReport("analytic_tail", "0.984127", ">=", singular_series.analytic_tail(prime_limit), tol,
                              notes=[f"primes above {prime_limit}; recomputed bound replacing the imported tail"]))
    for conv, tag in (("standard", ""), ("flipped", "[flipped]")):
        out.append(_rename(singular_series.constant_C(prime_limit, convention=conv, workers=workers), f"C{tag}"))
    rep = singular_series.constant_C(prime_limit, tail="imported", workers=workers, imported_tail=imports["0.984127"])
    out.append(_rename(rep, "C[imported tail]"))
    return out, {}


def _rename(r: ConstantReport, name: str) -> ConstantReport:
    r.name = name
    return r


def two_adic_reports(C_standard: Interval, C_flipped: Interval) -> list[ConstantReport]:
    prof = powers_of_two.two_adic_profile(273)
    out = [
        _eq("rho_273", prof.rho, "12"),
        ConstantReport("max_f_273", "6", "=", prof.max_value,
                       notes=[f"argmax {prof.argmax}", f"ties {list(prof.ties)}", f"separated {prof.separated}"]),
        _eq("argmax_f_273", prof.argmax, "91"),
        ConstantReport("f_273", "12", "=", prof.f(273)),
        _eq("parseval_f_273", powers_of_two.parseval_f(prof), str(273 * 12)),
        ConstantReport("density_273_27", "0.0036629", ">=", powers_of_two.lemma24_density(273, 27), Fraction(1, 10**6)),
    ]
    out.append(powers_of_two.lemma24_constant(27, C=C_standard))
    out.append(_rename(powers_of_two.lemma24_constant(27, C=C_flipped, convention="flipped"), "lemma24[flipped]"))
    return out


def sieve_reports(imports: dict, workers=None) -> list[ConstantReport]:
    ch = sieve_constants.sieve_chain(workers=workers)
    m1, m2 = ch.M1, ch.M2
    tol3 = Fraction(1, 10**3)
    out = [
        ConstantReport("M1", "84.6567", "=", m1, tol3),
        ConstantReport("M2", "133.3569", "=", m2, tol3),
        ConstantReport("prefactor_1.2304", "1.2304", "<=", sieve_constants.prefactor_check()),
        ConstantReport("exact_T_product", "1.0294133", "<=", ch.exact_product, Fraction(1, 10**6)),
        ConstantReport("envelope_500_4000", "1.000000964", "<=", ch.envelope_product, Fraction(1, 10**9)),
        ConstantReport("zeta_tail_7_2", "1.00000000385", "<=", ch.zeta7, Fraction(1, 10**11)),
        ConstantReport("combined_product", "1.0294143", "<=", ch.combined, Fraction(1, 10**6)),
        sieve_constants.W_coefficient(ch, imported=imports["40.197"]),
        ConstantReport("frakS1_head", "3.0963", "<=", ch.s1_head),
        ConstantReport("frakS1_zeta_tail", "1.00000047413", "<=", ch.s1_tail),
        ConstantReport("frakS1_mid", "1.00003994288", "<=", ch.s1_mid),
        sieve_constants.frakS1_bound(ch),
        sieve_constants.lemma212_chain(imported=imports["440.62"]),
    ]
    out.extend(sieve_constants.lemma213_214_constants())
    return out


def full_report(*, imports: dict | None = None, workers=None, N_surrogate: int = 10**18,
                prime_limit: int = 10**6) -> FullReport:
    """Every in-scope constant, in a fixed order, plus the k gate.

    Individual failures are recorded, never raised. ``imports`` overrides
    the externally sourced constants by their printed value (for fault
    injection).
    """
    imp = dict(DEFAULT_IMPORTS)
    imp.update(imports or {})
    reports: list[ConstantReport] = []
    ss, _ = singular_series_reports(imp, workers, prime_limit)
    reports.extend(ss)
    C_std = next(r for r in ss if r.name == "C").computed
    C_flip = next(r for r in ss if r.name == "C[flipped]").computed
    reports.extend(two_adic_reports(C_std, C_flip))
    l24 = next(r for r in reports if r.name == "lemma24").computed
    reports.append(major_arc.lemma22_report(N_surrogate))
    l25 = major_arc.lemma25_constant()
    reports.append(l25)
    l25_corr = major_arc.lemma25_constant(l24)
    reports.append(_rename(l25_corr, "lemma25[recomputed lemma24]"))
    reports.extend(sieve_reports(imp, workers))
    reports.append(check_181132())
    reports.append(lemma215_constant(i305=imp["305.8869"], i2339=imp["23.39"]))
    gates = [
        minimal_k(),
        minimal_k(main=l25_corr.computed, label="recomputed main constant"),
    ]
    reports.append(ConstantReport("minimal_k", "56", "=", Interval(gates[0].minimal_k or 0)))
    info = {"E_lambda_import": "E(0.8512) > 25/36 + 1e-10 (imported, not recomputed)",
            "lemma29_term": "absorbed into lower order terms; no numerical content"}
    return FullReport(reports, gates, info)
