import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from linnikpair import powers_of_two as pt
from linnikpair.errors import WorkBoundError
from linnikpair.interval import Interval


def test_profile_273():
    prof = pt.two_adic_profile(273)
    assert prof.rho == 12
    assert prof.argmax == 91 and prof.ties == (91, 182)
    assert prof.max_value.contains(6)
    assert prof.f(273).contains(12)
    assert prof.separated


def test_profile_7():
    prof = pt.two_adic_profile(7)
    assert prof.rho == 3
    assert prof.f(7).contains(3)
    # 2, 4, 1 are the residues, so f(1) = |e(1/7) + e(2/7) + e(4/7)| = sqrt(2)
    assert prof.f(1).contains(Interval(2) ** Fraction(1, 2)) or prof.f(1).overlaps(Interval(2) ** Fraction(1, 2))


@pytest.mark.parametrize("q", [9, 21, 63, 91, 273])
def test_profile_against_oracle(q):
    prof = pt.two_adic_profile(q)
    ref = oracles.f_profile(q)
    for r in range(1, q + 1):
        assert abs(float(prof.f(r).lo_fraction()) - ref[r - 1]) < 1e-10


def _odd_moduli():
    return [q for q in range(3, 1000, 2)]


@pytest.mark.slow
def test_orbit_invariance_all_odd_q():
    for q in _odd_moduli():
        prof = pt.two_adic_profile(q)
        for r in range(1, q + 1):
            assert prof.f(r) == prof.f(2 * r % q or q)
        assert prof.f(q).contains(prof.rho)
        assert all(v.hi_fraction() <= prof.rho + Fraction(1, 10**20) for v in prof.f_table)


@pytest.mark.parametrize("q", [3, 7, 9, 21, 63, 273, 511, 997])
def test_parseval(q):
    prof = pt.two_adic_profile(q)
    assert pt.parseval_f(prof) == q * prof.rho


def test_density_values():
    d = pt.lemma24_density(273, 27)
    assert abs(float(d.lo_fraction()) - 0.00366299624) < 1e-11
    assert d.lo_fraction() >= Fraction("0.0036629")
    assert pt.lemma24_density(273, 1).hi_fraction() < 0


def test_density_monotone_in_k():
    vals = [pt.lemma24_density(273, k) for k in range(27, 61)]
    assert all(a.hi_fraction() < b.lo_fraction() for a, b in zip(vals, vals[1:]))


def test_lemma24_with_unit_C():
    r = pt.lemma24_constant(27, C=Interval(1))
    ref = 4 * 273 * Fraction(1, 273) * (1 - 272 * Fraction(1, 2) ** 27)
    assert r.computed.contains(ref)
    assert abs(float(r.computed.lo_fraction()) - 3.9999) < 1e-4


def test_lemma24_frozen_values():
    assert abs(float(pt.lemma24_constant(27).computed.lo_fraction()) - 3.23168) < 1e-5
    flip = pt.lemma24_constant(27, convention="flipped").computed
    assert abs(float(flip.lo_fraction()) - 3.305701) < 1e-6


def test_lemma24_monotone_in_k():
    C = Interval("0.9")
    assert pt.lemma24_constant(56, C=C).computed.lo_fraction() > pt.lemma24_constant(27, C=C).computed.lo_fraction()


def test_dp_k1_full_period():
    for q in (9, 21, 63, 273):
        rho = oracles.order_of_two(q)
        orbit = {pow(2, v, q) for v in range(1, rho + 1)}
        dist = pt.power_sum_distribution(q, 1, rho)
        assert all(dist[j] == (1 if j in orbit else 0) for j in range(q))


def test_dp_against_enumeration():
    for q, k, L in [(3, 5, 2), (9, 3, 6), (21, 2, 6), (273, 2, 12), (7, 4, 5)]:
        for j in range(q):
            assert pt.power_sum_count_dp(q, k, L, j).count == oracles.power_sum_count(q, k, L, j)


def test_expsum_tiny_cases():
    for j in range(3):
        assert pt.expsum_integer(3, 5, j, 2) == pt.power_sum_count_dp(3, 5, 2, j).count
    j = (2 + 2) % 273
    assert pt.expsum_integer(273, 2, j) == pt.power_sum_count_dp(273, 2, 12, j).count


def test_expsum_rejects_partial_period():
    with pytest.raises(ValueError):
        pt.power_sum_count_expsum(273, 2, 0, L=10)


def test_dp_equals_expsum_k27():
    dist = pt.power_sum_distribution(273, 27, 12)
    assert int(dist.sum()) == 12**27
    assert int(dist[0]) == 503188821933294169374088920
    assert int(dist[5]) == 503188837958597341045475646
    for j in (0, 1, 2, 5, 91, 182, 272):
        assert pt.expsum_integer(273, 27, j) == int(dist[j])


@given(st.sampled_from([9, 21, 63, 273]), st.integers(0, 6), st.integers(0, 10**6), st.integers(1, 2))
@settings(max_examples=50, deadline=None)
def test_dp_expsum_agreement_property(q, k, j, periods):
    L = periods * oracles.order_of_two(q)
    assert pt.expsum_integer(q, k, j % q, L) == pt.power_sum_count_dp(q, k, L, j).count


def test_dp_work_bound():
    with pytest.raises(WorkBoundError):
        pt.power_sum_distribution(9, 10**4, 10**4)


def test_dp_object_dtype_for_huge_counts():
    dist = pt.power_sum_distribution(9, 30, 60)
    assert dist.dtype == object
    assert sum(int(x) for x in dist) == 60**30


@pytest.mark.parametrize("k", [0, 1, 2, 3, 4])
@pytest.mark.parametrize("L", [4, 8, 11, 14])
def test_histogram_symmetry_and_mass(k, L):
    h = pt.r_k_histogram(k, L)
    assert h.total() == (L - 3) ** (2 * k)
    for x, c in h.items():
        assert h[-x] == c


def test_histogram_small_against_enumeration():
    h = pt.r_k_histogram(2, 7)
    vals = range(4, 8)
    ref = {}
    for v1, v2, u1, u2 in itertools.product(vals, repeat=4):
        d = 2**v1 + 2**v2 - 2**u1 - 2**u2
        ref[d] = ref.get(d, 0) + 1
    assert dict(h.items()) == ref


def test_histogram_cell_bound():
    with pytest.raises(WorkBoundError):
        pt.r_k_histogram(4, 30)


def test_histogram_csv(tmp_path):
    h = pt.r_k_histogram(1, 6)
    path = h.write_csv(tmp_path / "h.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "h,count" and len(lines) == 1 + len(list(h.items()))


def test_grid_measure_decreasing():
    m = [pt.grid_measure(0.8512, L) for L in (10, 12, 14)]
    assert m[0] > m[1] > m[2] > 0


def test_grid_measure_frozen_L12():
    assert abs(pt.grid_measure(0.8512, 12) - 3.237e-4) < 1e-6


def test_grid_measure_against_direct():
    L, lam = 8, 0.8
    M = pt.default_grid(L)
    a = np.arange(M) / M
    G = sum(np.exp(2j * np.pi * (2**v) * a) for v in range(1, L + 1))
    ref = np.count_nonzero(np.abs(G) >= lam * L * (1 - 1e-12)) / M
    assert pt.grid_measure(lam, L) == ref


def test_grid_measure_rejects_undersampling():
    with pytest.raises(ValueError):
        pt.grid_measure(0.8, 10, grid_size=100)


def test_measure_E_lambda_fit():
    m = pt.measure_E_lambda_empirical(0.8512, 14, fit_Ls=[10, 12])
    assert m.exponent_fit is not None and 0.5 < m.exponent_fit < 1.2
    assert m.to_dict()["rigorous"] is False
