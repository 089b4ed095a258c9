import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from linnikpair import singular_series as ss
from linnikpair.errors import ConsistencyError
from linnikpair.interval import Interval, working_precision

SMALL = ss.DEFAULT_SMALL_PRIMES


def test_default_small_primes():
    assert SMALL[:4] == (5, 11, 17, 19)
    assert SMALL[-1] == 199 and 7 not in SMALL and 13 not in SMALL


def test_ramanujan_C_against_brute():
    for q, a, i in [(5, 1, 2), (5, 2, 3), (7, 1, 3), (9, 2, 2), (13, 5, 3), (35, 4, 2)]:
        z = ss.ramanujan_C(q, a, i, fast=False)
        ref = oracles.C(q, a, i)
        assert abs(float(z.re.lo_fraction()) - ref.real) < 1e-12
        assert abs(float(z.im.lo_fraction()) - ref.imag) < 1e-12


def test_ramanujan_C_5_1_modulus():
    # C_2(5,1) = G(1,5) - 1 with G the quadratic Gauss sum sqrt(5), so C = sqrt(5) - 1
    z = ss.ramanujan_C(5, 1, 2)
    assert z.im.contains(0)
    assert abs(float(z.re.lo_fraction()) - (5**0.5 - 1)) < 1e-15


def test_cube_fast_path_matches_general():
    for p in (5, 11, 17, 23):
        for a in range(1, p):
            fast = ss.ramanujan_C(p, a, 3)
            slow = ss.ramanujan_C(p, a, 3, fast=False)
            assert fast.re.overlaps(slow.re) and fast.im.overlaps(slow.im)


def test_A_frozen_tables():
    # frozen from the complex-float oracle, rounded to the obvious rationals
    F = Fraction
    assert [ss.A_exact(n, 5) for n in range(5)] == [F(1, 64), F(-3, 128), F(1, 64), F(1, 64), F(-3, 128)]
    assert [ss.A_exact(n, 7) for n in range(7)] == [F(5, 72), F(-1, 36), F(-1, 8), F(5, 72), F(-1, 8), F(1, 6), F(-1, 36)]


@pytest.mark.parametrize("q", [3, 5, 7, 11, 13, 15, 21, 35, 43])
def test_A_exact_matches_oracle(q):
    for n in range(q):
        ref = oracles.A(n, q)
        assert abs(float(ss.A_exact(n, q)) - ref.real) < 1e-11
        assert abs(ref.imag) < 1e-11


@pytest.mark.parametrize("q", [5, 7, 11, 13, 15, 29])
def test_direct_route_matches_exact_and_is_real(q):
    for n in range(q):
        re, im = ss.A_local_direct(n, q)
        assert re.contains(ss.A_exact(n, q))
        assert im.contains(0)
        assert max(abs(im.lo_fraction()), abs(im.hi_fraction())) < ss.IMAG_TOL


def test_A_at_two():
    for n in range(0, 20, 2):
        assert ss.A_local(n, 2).contains(1)
        assert (1 + ss.A_local(n, 2)).contains(2)
        assert (1 + ss.A_local(n + 1, 2)).contains(0)


@pytest.mark.parametrize("q", [4, 8, 9, 25, 27, 49, 121])
def test_A_vanishes_on_prime_powers(q):
    for n in range(q):
        assert ss.A_local(n, q).contains(0)
        assert ss.A_local_direct(n, q)[0].contains(0)


def test_multiplicativity_direct():
    rng = random.Random(20240)
    odd = [3, 5, 7, 11, 13, 17]
    for _ in range(20):
        p1, p2 = rng.sample(odd, 2)
        n = rng.randrange(0, 10**6)
        q = p1 * p2
        direct, _ = ss.A_local_direct(n, q)
        assert direct.overlaps(ss.A_local(n, p1) * ss.A_local(n, p2))


@given(st.integers(0, 10**9), st.sampled_from([5, 7, 11, 13, 15, 21]))
@settings(max_examples=30, deadline=None)
def test_period(n, q):
    a, _ = ss.A_local_direct(n, q)
    b, _ = ss.A_local_direct(n + q, q)
    assert a == b
    assert ss.A_exact(n, q) == ss.A_exact(n + q, q)


def test_local_minima_standard_frozen():
    assert ss.local_factor_min(5).min == Interval(Fraction(125, 128))
    assert ss.local_factor_min(11).min == Interval(Fraction(2497, 2500))
    rec = ss.local_factor_min(199)
    assert rec.min.lo_fraction() >= Fraction("0.998903")
    assert rec.argmin is None and len(rec.ties) == 33


def test_local_minima_flipped_reproduce_printed_values():
    tol = Fraction(1, 10**6)
    assert ss.local_factor_min(5, "flipped").min.contains(Fraction("0.984375"))
    assert ss.local_factor_min(11, "flipped").min.contains(Fraction("0.999"))
    assert ss.local_factor_min(199, "flipped").min.lo_fraction() >= Fraction("0.998903") - tol


def test_local_factor_rejects_bad_input():
    with pytest.raises(ValueError):
        ss.local_factor_min(2)
    with pytest.raises(ValueError):
        ss.local_factor_min(5, "sideways")


def test_product_of_single_prime():
    assert abs(ss.product_small_primes((5,), "flipped").lo_fraction() - Fraction("0.984375")) < Fraction(1, 10**9)


def test_product_small_primes_frozen():
    std = ss.product_small_primes()
    flip = ss.product_small_primes(convention="flipped")
    assert abs(float(std.lo_fraction()) - 0.946111) < 1e-6
    assert abs(float(flip.lo_fraction()) - 0.9568859089) < 1e-9


def test_tail_factor_closed_forms():
    t5 = ss.tail_factor(5)
    assert t5.residue_class == 2
    assert abs(float(t5.bound.lo_fraction()) - (1 - (math.sqrt(5) + 1) / 64)) < 1e-14
    t7 = ss.tail_factor(7)
    ref = 1 - (math.sqrt(7) + 1) * (2 * math.sqrt(7) + 1) ** 2 / 216
    assert abs(float(t7.bound.lo_fraction()) - ref) < 1e-14
    assert abs(ref - 0.331899) < 1e-6


def test_tail_factor_rejects_3():
    with pytest.raises(ValueError):
        ss.tail_factor(3)


@pytest.mark.parametrize("p", SMALL)
def test_closed_form_never_beats_true_minimum(p):
    assert ss.tail_factor(p).bound.hi_fraction() <= ss.local_factor_min(p).min.lo_fraction()


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19, 31, 37, 199])
def test_abs_bound_dominates_every_residue(p):
    b = ss.abs_bound(p)
    assert all(abs(ss.A_exact(n, p)) <= b.hi_fraction() for n in range(p))


def test_tail_product_small_range_against_float():
    got = ss.tail_product(199, 5000)
    ref = 1.0
    for p in oracles.primes_upto(4999):
        if p > 199:
            s = math.sqrt(p)
            b = (s + 1) / (p - 1) ** 3 if p % 3 == 2 else (s + 1) * (2 * s + 1) ** 2 / (p - 1) ** 3
            ref *= 1 - b
    assert abs(float(got.lo_fraction()) - ref) < 1e-12


def test_tail_product_independent_of_workers():
    a = ss.tail_product(199, 20011, workers=1)
    ss._TAIL_CACHE.clear()
    b = ss.tail_product(199, 20011, workers=2)
    assert a == b


def test_analytic_tail():
    t = ss.analytic_tail(10**6)
    assert Fraction(99, 100) - Fraction(1, 10**30) < t.lo_fraction() <= Fraction(99, 100)
    assert t.lo_fraction() >= Fraction("0.984127")
    with pytest.raises(ValueError):
        ss.analytic_tail(10)


def test_analytic_tail_gives_strictly_larger_C():
    a = ss.c_chain(10**6)
    b = ss.c_chain(10**6, tail="imported")
    assert a.small == b.small and a.mid == b.mid
    assert a.total.lo_fraction() > b.total.lo_fraction()
    with pytest.raises(ValueError):
        ss.c_chain(10**4, tail="guess")


def test_C_frozen():
    assert abs(float(ss.c_chain(10**6).total.lo_fraction()) - 0.898844) < 1e-6
    assert abs(float(ss.c_chain(10**6, convention="flipped").total.lo_fraction()) - 0.909080) < 1e-6


@pytest.mark.parametrize("p", [3, 7, 13])
def test_sum_of_squares_identity(p):
    assert ss.sum_sq_identity(p).lo_fraction() >= p
    assert sum(ss.A_exact(j, p) for j in range(1, p + 1)) == 0


def test_truncated_series_at_two_and_199():
    s2 = ss.singular_series_truncated(100, 2, tail_limit=2000)
    s199 = ss.singular_series_truncated(100, 199, tail_limit=2000)
    assert s199.lo_fraction() > 0
    assert s2.lo_fraction() <= s199.lo_fraction() and s199.hi_fraction() <= s2.hi_fraction()
    # the exact factor at 2 is 1 + A(100, 2) = 2
    odd = ss.singular_series_truncated(100, 2, tail_limit=2000) / 2
    assert odd.lo_fraction() > 0 and (odd * 2).overlaps(s2)
    with pytest.raises(ValueError):
        ss.singular_series_truncated(101, 2)


def test_consistency_error_on_corrupted_phase(monkeypatch):
    from linnikpair.interval import CInterval

    rows = ss._C_rows(7, 128)
    bad = tuple(None if z is None else z + CInterval(Interval(0), Interval(1)) for z in rows[0])
    monkeypatch.setattr(ss, "_C_rows", lambda q, prec: (bad, rows[1]))
    with pytest.raises(ConsistencyError):
        ss.A_local_direct(1, 7)


def test_precision_changes_do_not_change_exact_minima():
    with working_precision(256):
        a = ss.local_factor_min(11).exact
    assert a == ss.local_factor_min(11).exact


def test_local_factor_csv(tmp_path):
    import csv

    path = tmp_path / "lf.csv"
    ss.write_local_factor_csv([ss.local_factor_min(5), ss.local_factor_min(7, "standard")], path)
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == 12
    assert Fraction(rows[0]["lo"]) <= 1 + ss.A_exact(1, 5) <= Fraction(rows[0]["hi"])
