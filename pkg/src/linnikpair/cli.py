"""Command-line front end.

Every subcommand builds a list of ConstantReports, writes them in the
requested format and exits 0 only when all of them pass.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from . import major_arc, powers_of_two, search, sieve_constants, singular_series, theorem_gate
from .config import ConfigError, RunConfig, parse_tolerances, resolve
from .export import atomic_write_text, csv_text, dumps_json
from .interval import Interval, working_precision
from .parallel import set_workers
from .reports import ConstantReport

SUBCOMMANDS = ("verify-all", "local-factors", "two-adic", "frakj", "sieve", "gate", "search", "elambda")
DIGITS = 20
LOCAL_PAPER = {5: "0.984375", 11: "0.999000", 199: "0.998903"}


@dataclass
class Outcome:
    command: str
    reports: list[ConstantReport]
    lines: list[str] = field(default_factory=list)
    payload: dict = field(default_factory=dict)
    full: theorem_gate.FullReport | None = None

    @property
    def passed(self) -> bool:
        if self.full is not None:
            return self.full.passed
        return all(r.passed for r in self.reports)


def _flag(name: str, ok: bool, note: str = "") -> ConstantReport:
    """Yes/no certification expressed as an exact integer check."""
    return ConstantReport(name, "1", "=", Interval(int(ok)), notes=[note] if note else [])


def _show(x: Interval) -> str:
    """Integer when the enclosure isolates one, else the lower end."""
    k = round(float(x.lo_fraction()))
    return str(k) if x.contains(k) and x.hi_fraction() - x.lo_fraction() < Fraction(1, 2) else x.lo_str(10)


# --- subcommands -------------------------------------------------------------------------


def cmd_verify_all(args, cfg: RunConfig) -> Outcome:
    full = theorem_gate.full_report(workers=cfg.workers, prime_limit=cfg.prime_limit)
    lines = [g.line() for g in full.gates]
    return Outcome("verify-all", full.reports, lines, full=full)


def cmd_local_factors(args, cfg: RunConfig) -> Outcome:
    primes = args.p or sorted(LOCAL_PAPER)
    recs = [singular_series.local_factor_min(p, args.convention) for p in primes]
    reports, lines = [], []
    for rec in recs:
        lines.append(f"p = {rec.p}: min {rec.exact[rec.ties[0] - 1]} "
                     f"(~{rec.min.lo_str(10)}) at n in {list(rec.ties)}")
        if rec.p in LOCAL_PAPER:
            reports.append(ConstantReport(f"local_min_{rec.p}", LOCAL_PAPER[rec.p], ">=", rec.min,
                                          Fraction(1, 10**6), notes=[f"convention {rec.convention}"]))
    if args.table_out:
        singular_series.write_local_factor_csv(recs, args.table_out)
    payload = {"convention": args.convention,
               "minima": {str(r.p): str(r.exact[r.ties[0] - 1]) for r in recs}}
    return Outcome("local-factors", reports, lines, payload)


def cmd_two_adic(args, cfg: RunConfig) -> Outcome:
    prof = powers_of_two.two_adic_profile(args.q)
    mx = prof.max_value
    lines = [f"q = {prof.q}: rho = {prof.rho}, max f = f({prof.argmax}) = {_show(mx)}, "
             f"ties {list(prof.ties)}, f({prof.q}) = {_show(prof.f(prof.q))}"]
    reports = []
    if args.q == 273:
        reports = [r for r in theorem_gate.two_adic_reports(Interval(1), Interval(1))
                   if not r.name.startswith("lemma24")]
    payload = {"q": prof.q, "rho": prof.rho, "argmax": prof.argmax, "ties": list(prof.ties),
               "max_f": [mx.lo_str(DIGITS), mx.hi_str(DIGITS)]}
    return Outcome("two-adic", reports, lines, payload)


def cmd_frakj(args, cfg: RunConfig) -> Outcome:
    N = args.N or cfg.frakj_exact_N
    n = args.n or N
    params = major_arc.FrakJParams(N, n)
    exact = major_arc.frakJ_exact(params)
    cont = major_arc.frakJ_continuous(params)
    inside = cont.discrete.lo <= exact.lo and exact.hi <= cont.discrete.hi
    reports = [_flag(f"frakJ_exact_in_bracket_N{N}", inside,
                     f"exact [{exact.lo_str(12)}, {exact.hi_str(12)}], "
                     f"bracket [{cont.discrete.lo_str(12)}, {cont.discrete.hi_str(12)}]")]
    lines = [f"N = {N}, n = {n}: exact {exact.lo_str(12)}, surrogate {cont.surrogate.lo_str(12)}, "
             f"declared error {float(cont.declared_error):.6g}"]
    if not args.no_surrogate:
        rep = major_arc.lemma22_report(args.surrogate_N)
        reports.append(rep)
        lines.extend(rep.notes[:2])
    payload = {"exact": [exact.lo_str(DIGITS), exact.hi_str(DIGITS)], "continuous": cont.to_dict(DIGITS)}
    return Outcome("frakj", reports, lines, payload)


def cmd_sieve(args, cfg: RunConfig) -> Outcome:
    reports = theorem_gate.sieve_reports(dict(theorem_gate.DEFAULT_IMPORTS), cfg.workers)
    if args.T_out:
        sieve_constants.write_T_csv(sieve_constants.T_table(5, 500, workers=cfg.workers), args.T_out)
    return Outcome("sieve", reports)


def cmd_gate(args, cfg: RunConfig) -> Outcome:
    g = theorem_gate.minimal_k(args.lam, args.main, args.minor)
    reports = [theorem_gate.lemma215_constant(), theorem_gate.check_181132()]
    if (args.lam, args.main, args.minor) == (theorem_gate.LAMBDA, theorem_gate.MAIN, theorem_gate.MINOR):
        reports.append(ConstantReport("minimal_k", "56", "=", Interval(g.minimal_k or 0)))
        m55 = g.margins.get(55)
        reports.append(_flag("margin_55_negative", m55 is not None and m55.hi < 0))
    return Outcome("gate", reports, [g.line()], {"gate": g.to_dict(DIGITS)})


def cmd_search(args, cfg: RunConfig) -> Outcome:
    reports, lines, found = [], [], []
    stats: list = []
    if args.N1 is not None:
        if args.N2 is None:
            raise ConfigError("--N1 needs --N2")
        pw = search.pair_find(args.N1, args.N2, args.k, args.L or 10, constrained=args.constrained)
        ok = pw is not None and bool(search.verify_witness(pw.first)) and bool(search.verify_witness(pw.second))
        reports.append(_flag(f"pair_{args.N1}_{args.N2}", ok))
        if pw is not None:
            found += [pw.first, pw.second]
            lines.append(f"shared exponents {list(pw.vs)}")
    for n in args.n or []:
        w = search.mitm_find(n, args.constrained, k=args.k, L=args.L, stats=stats)
        verdict = search.verify_witness(w) if w is not None else None
        reports.append(_flag(f"witness_{n}", bool(verdict), "not found" if w is None else verdict.code))
        if w is not None:
            found.append(w)
    for w in found:
        lines.append(f"{w.n} = {w.p1} + {w.p2}^2 + {w.p3}^3 + {w.p4}^3"
                     + "".join(f" + 2^{v}" for v in w.vs))
    if args.witnesses_out:
        search.write_witnesses_jsonl(found, args.witnesses_out)
    if args.coverage_out:
        search.write_coverage_csv(stats, args.coverage_out)
    return Outcome("search", reports, lines, {"witnesses": [w.to_dict() for w in found]})


def cmd_elambda(args, cfg: RunConfig) -> Outcome:
    Ls = sorted(set(args.L or [12, 16, 20]))
    m = powers_of_two.measure_E_lambda_empirical(args.lam, Ls[-1], fit_Ls=Ls[:-1])
    pts = list(m.fit_points)
    decreasing = all(a[1] > b[1] for a, b in zip(pts, pts[1:]))
    lines = [f"L = {L}: measure {y:.6e}" for L, y in pts]
    fit = m.exponent_fit
    lines.append(f"fitted exponent {fit if fit is None else round(fit, 6)}; "
                 "imported rigorous bound E(0.8512) > 25/36 + 1e-10")
    reports = [_flag("elambda_decreasing", decreasing, "grid estimate, not rigorous")]
    payload = {"lambda": m.lam, "measures": {str(L): y for L, y in pts}, "exponent_fit": fit,
               "imported_bound": "25/36 + 1e-10", "rigorous": False}
    return Outcome("elambda", reports, lines, payload)


HANDLERS = {
    "verify-all": cmd_verify_all,
    "local-factors": cmd_local_factors,
    "two-adic": cmd_two_adic,
    "frakj": cmd_frakj,
    "sieve": cmd_sieve,
    "gate": cmd_gate,
    "search": cmd_search,
    "elambda": cmd_elambda,
}


# --- rendering -----------------------------------------------------------------------------


def render(out: Outcome, fmt: str, precision_bits: int) -> str:
    if fmt == "json":
        if out.full is not None:
            doc = out.full.to_dict(DIGITS)
        else:
            doc = {
                "version": theorem_gate.REPORT_VERSION,
                "command": out.command,
                "precision_bits": precision_bits,
                "reports": [r.to_dict(DIGITS) for r in out.reports],
                "details": out.payload,
                "pass": out.passed,
            }
        return dumps_json(doc)
    if fmt == "csv":
        return csv_text(["name", "target", "direction", "lo", "hi", "pass"],
                        [(r.name, r.paper_value, r.direction, r.computed.lo_str(DIGITS),
                          r.computed.hi_str(DIGITS), int(r.passed)) for r in out.reports])
    return render_table(out)


def render_table(out: Outcome) -> str:
    head = f"{'name':<34} {'target':>16} {'lo':>24} {'hi':>24} {'pass':>5}"
    rows = [head, "-" * len(head)]
    for r in out.reports:
        rows.append(f"{r.name[:34]:<34} {r.direction + ' ' + r.paper_value:>16} "
                    f"{r.computed.lo_str(14):>24} {r.computed.hi_str(14):>24} "
                    f"{'yes' if r.passed else 'NO':>5}")
    rows.extend(out.lines)
    rows.append(f"overall: {'PASS' if out.passed else 'FAIL'}")
    return "\n".join(rows) + "\n"


def write_report(out: Outcome, cfg: RunConfig) -> str:
    text = render(out, cfg.format, cfg.precision_bits)
    if cfg.output:
        try:
            atomic_write_text(cfg.output, text)
        except OSError as exc:
            raise OSError(f"cannot write report to {cfg.output}: {exc}") from exc
    else:
        sys.stdout.write(text)
    return text


# --- parser ----------------------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("run configuration")
    g.add_argument("--config", help="flat key = value configuration file")
    g.add_argument("--precision", type=int, dest="precision_bits", help="interval precision in bits (>= 64)")
    g.add_argument("--prime-limit", type=int, dest="prime_limit", help="upper end of the explicit tail product")
    g.add_argument("--workers", type=int, help="process pool size")
    g.add_argument("--out", "--output", dest="output", help="write the report here instead of stdout")
    g.add_argument("--format", choices=("json", "table", "csv"))
    g.add_argument("--json", dest="json_path", metavar="PATH", help="shorthand for --format json --out PATH")
    g.add_argument("--tolerance", action="append", default=[], metavar="NAME=VALUE",
                   help="override the tolerance of one named check (repeatable)")
    g.add_argument("--seed-scale", action="store_true", help="desk-scale presets used by the acceptance suite")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="linnikpair", description="Certified constant checks and witness search.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    sub.add_parser("verify-all", parents=[common], help="every constant check plus the k gate")

    p = sub.add_parser("local-factors", parents=[common], help="per-prime minima of the singular series factor")
    p.add_argument("--p", type=int, action="append", help="prime (repeatable); default 5, 11, 199")
    p.add_argument("--convention", choices=singular_series.CONVENTIONS, default="standard")
    p.add_argument("--table-out", help="CSV of every residue value")

    p = sub.add_parser("two-adic", parents=[common], help="order of 2 and the f profile modulo q")
    p.add_argument("--q", type=int, default=273)

    p = sub.add_parser("frakj", parents=[common], help="singular integral: exact sum and surrogate")
    p.add_argument("--N", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--surrogate-N", type=int, default=10**18)
    p.add_argument("--no-surrogate", action="store_true")

    p = sub.add_parser("sieve", parents=[common], help="sieve constants chain")
    p.add_argument("--T-out", dest="T_out", help="CSV of T_1(p), T_p(p) for 5 <= p <= 500")

    p = sub.add_parser("gate", parents=[common], help="minimal k for the final inequality")
    p.add_argument("--lam", default=theorem_gate.LAMBDA)
    p.add_argument("--main", default=theorem_gate.MAIN)
    p.add_argument("--minor", default=theorem_gate.MINOR)

    p = sub.add_parser("search", parents=[common], help="witness search")
    p.add_argument("--n", type=int, action="append", help="even target (repeatable)")
    p.add_argument("--N1", type=int)
    p.add_argument("--N2", type=int)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--L", type=int)
    p.add_argument("--constrained", action="store_true")
    p.add_argument("--witnesses-out")
    p.add_argument("--coverage-out")

    p = sub.add_parser("elambda", parents=[common], help="grid estimate of the large-G set")
    p.add_argument("--lam", type=float, default=float(theorem_gate.LAMBDA))
    p.add_argument("--L", type=int, action="append")
    return parser


def _apply_tolerances(reports, overrides: dict) -> None:
    for r in reports:
        if r.name in overrides:
            r.tolerance = Fraction(overrides[r.name])


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits 2 on usage errors
    flags = {
        "precision_bits": args.precision_bits,
        "prime_limit": args.prime_limit,
        "workers": args.workers,
        "output": args.output,
        "format": args.format,
    }
    if args.json_path:
        flags["output"], flags["format"] = args.json_path, "json"
    try:
        if args.tolerance:
            flags["tolerances"] = parse_tolerances(args.tolerance)
        cfg = resolve(args.config, flags=flags, seed_scale=args.seed_scale)
    except (ConfigError, OSError) as exc:
        parser.error(str(exc))
    set_workers(cfg.workers)
    try:
        with working_precision(cfg.precision_bits):
            out = HANDLERS[args.command](args, cfg)
            _apply_tolerances(out.reports, cfg.tolerances)
            write_report(out, cfg)
    except (ConfigError, ValueError) as exc:
        print(f"linnikpair: error: {exc}", file=sys.stderr)
        return 2
    if cfg.output and cfg.format != "table":
        print("\n".join(out.lines + [f"overall: {'PASS' if out.passed else 'FAIL'}"]), file=sys.stderr)
    return 0 if out.passed else 1


if __name__ == "__main__":
    sys.exit(main())
