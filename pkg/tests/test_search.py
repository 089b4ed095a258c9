import json

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from linnikpair import search as se
from linnikpair.errors import WorkBoundError

W = se.RepresentationWitness


def test_brute_oracle_against_independent_count():
    for n, k in [(100, 0), (135, 0), (200, 1), (256, 2), (300, 0)]:
        assert se.brute_oracle(n, k) == oracles.representation_count(n, k)


def test_brute_oracle_cumulative():
    assert se.brute_oracle(300, 2, exact_k=False) == sum(se.brute_oracle(300, k) for k in range(3))
    with pytest.raises(WorkBoundError):
        se.brute_oracle(10**5, 0)


def test_oracle_sweep_100_500():
    mismatches = []
    for n in range(100, 501, 2):
        for k in (0, 1, 2):
            w = se.mitm_find(n, k=k)
            if (w is not None) != (se.brute_oracle(n, k) > 0):
                mismatches.append((n, k))
            if w is not None:
                assert se.verify_witness(w)
    assert mismatches == []


def test_witness_at_1e6():
    w = se.mitm_find(10**6)
    assert w is not None and se.verify_witness(w)


def test_large_target_uses_primality_test():
    n = 2 * 10**9 + 2
    w = se.mitm_find(n, k=1, L=4)
    assert w is not None and se.verify_witness(w)
    assert w.p1 > se.BITMAP_LIMIT // 100


def test_constrained_search_respects_ranges():
    N = 10**6
    w = se.mitm_find(N, True, N=N)
    assert w is not None
    (a3, b3), (a4, b4) = se.dyadic_ranges(N)
    assert a3 <= w.p3 <= b3 and a4 <= w.p4 <= b4
    assert se.verify_witness(w)


def test_determinism():
    a = [se.mitm_find(n, k=1) for n in range(400, 460, 2)]
    b = [se.mitm_find(n, k=1) for n in range(400, 460, 2)]
    assert a == b


def test_enumeration_order_is_lexicographic_in_p3_p4_p2():
    w = se.mitm_find(1000)
    # any witness earlier in (p3, p4, p2) order would have been found first
    for p3 in oracles.primes_upto(10):
        for p4 in oracles.primes_upto(10):
            for p2 in oracles.primes_upto(31):
                if (p3, p4, p2) >= (w.p3, w.p4, w.p2):
                    continue
                r = 1000 - p3**3 - p4**3 - p2 * p2
                assert r < 2 or r not in set(oracles.primes_upto(1000))


def test_mitm_input_validation():
    with pytest.raises(ValueError):
        se.mitm_find(101)
    with pytest.raises(ValueError):
        se.mitm_find(10)
    with pytest.raises(WorkBoundError):
        se.mitm_find(10**11)


@pytest.mark.parametrize("w, code", [
    (W(101, 2, 3, 2, 2, ()), "odd n"),
    (W(100, 4, 3, 2, 2, ()), "composite p1"),
    (W(100, 71, 3, 2, 2, (0,)), "bad exponent"),
    (W(100, 71, 3, 2, 3, ()), "sum mismatch"),
])
def test_verify_codes(w, code):
    v = se.verify_witness(w)
    assert not v and v.code == code


def test_verify_range_codes():
    w = se.mitm_find(10**6)  # unconstrained, so p3 is tiny
    assert w.p3 < se.dyadic_ranges(10**6)[0][0]
    bad = W(w.n, w.p1, w.p2, w.p3, w.p4, w.vs, constrained=True, N=10**6)
    assert se.verify_witness(bad).code == "range p3"


def test_power_multisets_order_and_bound():
    ms = list(se.power_multisets(2, 5, 40))
    sums = [sum(1 << v for v in t) for t in ms]
    assert sums == sorted(sums)
    assert all(s <= 40 for s in sums)
    assert all(list(t) == sorted(t) for t in ms)
    assert len(ms) == len(set(ms))
    assert list(se.power_multisets(0, 5, 0)) == [()]


@given(st.integers(1, 4), st.integers(1, 9), st.integers(0, 2000))
@settings(max_examples=60, deadline=None)
def test_power_multisets_complete(k, L, cap):
    import itertools

    got = set(se.power_multisets(k, L, cap))
    ref = {t for t in itertools.combinations_with_replacement(range(1, L + 1), k) if sum(1 << v for v in t) <= cap}
    assert got == ref


def test_pair_find_small():
    pw = se.pair_find(2000, 1998, 2, 10)
    assert pw is not None
    assert se.verify_witness(pw.first) and se.verify_witness(pw.second)
    assert pw.first.vs == pw.second.vs and len(pw.vs) == 2


def test_pair_find_prunes(monkeypatch):
    seen = []
    real = se._core_find

    def spy(r, constrained, N, limit=None):
        seen.append(r)
        return real(r, constrained, N, limit)

    monkeypatch.setattr(se, "_core_find", spy)
    se.pair_find(200, 120, 3, 8, max_multisets=500)
    assert seen and all(r >= se.MIN_CORE for r in seen)
    for t in se.power_multisets(3, 8, 10**6):
        if sum(1 << v for v in t) > 120 - se.MIN_CORE:
            assert 120 - sum(1 << v for v in t) not in seen


def test_pair_find_k56_near_1e6():
    pw = se.pair_find(10**6 + 2, 10**6, 56, 20, max_multisets=200)
    assert pw is not None
    assert se.verify_witness(pw.first) and se.verify_witness(pw.second)


def test_pair_find_validation():
    with pytest.raises(ValueError):
        se.pair_find(100, 200, 1, 5)
    with pytest.raises(ValueError):
        se.pair_find(201, 100, 1, 5)


def test_exports(tmp_path):
    stats = []
    ws = [se.mitm_find(n, stats=stats) for n in (500, 1000)]
    p = se.write_witnesses_jsonl(ws, tmp_path / "w.jsonl")
    rows = [json.loads(x) for x in p.read_text().splitlines()]
    assert [r["n"] for r in rows] == [500, 1000]
    c = se.write_coverage_csv(stats, tmp_path / "c.csv").read_text().splitlines()
    assert c[0] == "n,found,probes,millis" and len(c) == 3
