from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from linnikpair import arith
from linnikpair.arith import (
    divisors, factorize, is_prime, mobius, multiplicative_basics, multiplicative_order,
    primitive_root, ramanujan_sum, sieve_primes, totient, unit_phase, zeta_interval,
)


def test_sieve_count_1e6():
    assert len(sieve_primes(10**6)) == 78498


def test_sieve_matches_trial_division():
    assert sieve_primes(3000).primes.tolist() == oracles.primes_upto(3000)


@given(st.integers(2, 5000), st.integers(2, 5000))
@settings(max_examples=40, deadline=None)
def test_sieve_prefix_consistency(a, b):
    m, n = sorted((a, b))
    big = sieve_primes(n).primes
    assert big[big <= m].tolist() == sieve_primes(m).primes.tolist()


def test_sieve_rejects_bad_limits():
    with pytest.raises(ValueError):
        sieve_primes(1)
    with pytest.raises(ValueError):
        sieve_primes(10**10)


def test_multiplicative_basics_273():
    assert multiplicative_basics(273) == (144, -1, [3, 7, 13])


def test_factorize_examples():
    assert factorize(1) == ()
    assert factorize(360) == (2, 2, 2, 3, 3, 5)
    assert factorize(999983) == (999983,)


def test_phi_and_mu_against_definitions():
    for n in range(1, 300):
        assert totient(n) == oracles.phi(n)
        assert mobius(n) == oracles.mu(n)


def test_divisor_sum_identities():
    for n in range(1, 10**4 + 1):
        ds = divisors(n)
        assert sum(totient(d) for d in ds) == n
        assert sum(mobius(d) for d in ds) == (1 if n == 1 else 0)


def test_order_of_two_mod_273():
    assert multiplicative_order(2, 273) == 12


def test_order_divides_phi():
    for q in range(3, 2000, 2):
        t = multiplicative_order(2, q)
        assert totient(q) % t == 0
        assert t == oracles.order_of_two(q)


def test_order_requires_coprime():
    with pytest.raises(ValueError):
        multiplicative_order(2, 12)


def test_is_prime_against_sieve():
    mask = arith.prime_mask(20000)
    assert all(is_prime(n) == bool(mask[n]) for n in range(20000))


def test_is_prime_large():
    assert is_prime(2_000_000_011)
    assert not is_prime(2_000_000_011 * 3)
    assert is_prime((1 << 61) - 1)


def test_primitive_root():
    for p in (3, 5, 7, 11, 13, 199, 4001):
        g = primitive_root(p)
        assert multiplicative_order(g, p) == p - 1


def test_ramanujan_sum_matches_direct():
    for q in range(1, 40):
        for j in range(0, 45):
            direct = sum(oracles.e(a * j / q) for a in range(1, q + 1) if np.gcd(a, q) == 1)
            assert abs(direct - ramanujan_sum(q, j)) < 1e-9


@pytest.mark.parametrize("s, value", [(3, "1.2020569032"), (Fraction(7, 2), "1.1267338673")])
def test_zeta_interval(s, value):
    z = zeta_interval(s)
    ref = Fraction(oracles.zeta(float(s)))
    eps = Fraction(1, 10**35)
    assert z.lo_fraction() <= ref + eps and z.hi_fraction() >= ref - eps
    assert abs(float(z.lo_fraction()) - float(value)) < 1e-10


def test_zeta_two_precisions_nest():
    a = zeta_interval(Fraction(7, 2), Fraction(1, 10**12))
    b = zeta_interval(Fraction(7, 2))
    assert a.overlaps(b)
    assert b.hi_fraction() - b.lo_fraction() <= a.hi_fraction() - a.lo_fraction() + Fraction(1, 10**30)


def test_zeta_rejects_pole():
    with pytest.raises(ValueError):
        zeta_interval(1)


@given(st.integers(0, 500), st.integers(1, 500))
@settings(max_examples=60, deadline=None)
def test_unit_phase_qth_power_contains_one(a, q):
    z = unit_phase(a, q).value
    assert (z ** q).contains(1)


def test_unit_phase_reduces():
    u = unit_phase(6, 8)
    assert (u.a, u.q) == (3, 4)
    assert u.value.contains(complex(0, -1))
