"""Time the numba kernels against their pure-numpy twins.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--json out.json]

Each case runs once under each backend to warm up (and to check that the
two backends agree), then ``--repeat`` timed runs; the best time is shown.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from linnikpair import kernels
from linnikpair._accel import HAVE_NUMBA, force_backend
from linnikpair.arith import sieve_primes
from linnikpair.major_arc import FrakJParams
from linnikpair.search import _core_arrays


def _cases():
    primes = sieve_primes(20_000).primes
    dist = np.bincount([pow(2, v, 273) for v in range(1, 61)], minlength=273).astype(np.int64)
    c3, c4, s2, mask = _core_arrays(10**6, False, None)
    N = 3 * 10**4
    (a3, b3), (a4, b4) = FrakJParams(N, N).m3_range(), FrakJParams(N, N).m4_range()
    prefix = np.concatenate([[0.0], np.cumsum(1.0 / np.sqrt(np.arange(1, N + 1)))])
    return {
        "prime_mask(1e7)": lambda: kernels.prime_mask(10**7),
        "residue_dp(273, k=27)": lambda: kernels.residue_dp(dist, 27, 273),
        "elambda_count(L=14)": lambda: kernels.elambda_count(14, (1 << 14) * 273, 0.8512 * 14),
        "frakj_lattice_sum(3e4)": lambda: kernels.frakj_lattice_sum(N, N, a3, b3, a4, b4, prefix),
        "midpoint_sqrt_cubes(K=512)": lambda: kernels.midpoint_sqrt_cubes(10**6, 5.0, 10.0, 6.0, 12.0, 512),
        "mitm_probe(999998)": lambda: kernels.mitm_probe(999_998, c3, c4, s2, mask),
        "brute_count(5000)": lambda: kernels.brute_count(5000, primes),
    }


def _same(a, b) -> bool:
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return a == b


def _best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", help="also write results here")
    args = ap.parse_args(argv)
    if not HAVE_NUMBA:
        print("numba is not installed; only the numpy backend can run", file=sys.stderr)
        return 1
    rows = []
    print(f"{'kernel':<28} {'numpy s':>10} {'numba s':>10} {'speedup':>8}  agree")
    for name, fn in _cases().items():
        with force_backend("numpy"):
            ref = fn()
            t_np = _best(fn, args.repeat)
        with force_backend("numba"):
            got = fn()  # first call compiles
            t_nb = _best(fn, args.repeat)
        agree = _same(ref, got)
        rows.append({"kernel": name, "numpy_s": t_np, "numba_s": t_nb, "agree": agree})
        print(f"{name:<28} {t_np:>10.4f} {t_nb:>10.4f} {t_np / max(t_nb, 1e-9):>7.1f}x  {agree}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, indent=2, sort_keys=True)
    return 0 if all(r["agree"] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
