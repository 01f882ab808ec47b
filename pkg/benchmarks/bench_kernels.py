"""Time the compiled kernel backend against its pure-Python twin.

Both backends are imported directly (bypassing the env-var selection in
branchcut._kernels) so a single run produces a side-by-side table. The
workloads mirror the real hot paths: Horner evaluation, series
convolution, full-pivot elimination, and Aberth root sweeps.

Usage: python3 benchmarks/bench_kernels.py [--bits 512] [--repeat 5]
"""
import argparse
import random
import time

import gmpy2

from branchcut._kernels import _py

try:
    from branchcut._kernels import _cy
except ImportError:
    _cy = None


def _rand_mpc(rng):
    return gmpy2.mpc(gmpy2.mpfr(rng.uniform(-1, 1)), gmpy2.mpfr(rng.uniform(-1, 1)))


def _best_of(repeat, fn):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _workloads(bits):
    rng = random.Random(42)
    c100 = [_rand_mpc(rng) for _ in range(101)]
    d100 = [(k + 1) * c for k, c in enumerate(c100[1:])]
    t = gmpy2.mpc(gmpy2.mpfr("0.37"), gmpy2.mpfr("0.21"))
    a200 = [_rand_mpc(rng) for _ in range(200)]
    b200 = [_rand_mpc(rng) for _ in range(200)]
    n = 60
    rows = [[_rand_mpc(rng) for _ in range(n)] for _ in range(n)]
    rhs = [_rand_mpc(rng) for _ in range(n)]
    eps = gmpy2.exp2(-bits + 8)
    start = [gmpy2.mpc(gmpy2.cos(gmpy2.mpfr(k)), gmpy2.sin(gmpy2.mpfr(k))) for k in range(100)]
    nudge = gmpy2.mpfr("1e-20")

    def mk(impl):
        return [
            ("horner deg-100 x200", lambda: [impl.horner(c100, t) for _ in range(200)]),
            ("conv_slice len-200 full", lambda: [impl.conv_slice(a200, b200, k) for k in range(399)]),
            ("gauss_solve 60x60", lambda: impl.gauss_solve(rows, rhs, eps)),
            ("aberth_sweep deg-100 x5", lambda: [impl.aberth_sweep(c100, d100, list(start), nudge) for _ in range(5)]),
        ]

    return mk


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bits", type=int, default=512)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    gmpy2.set_context(gmpy2.context(precision=args.bits))
    mk = _workloads(args.bits)
    impls = [("pure", _py)] + ([("cython", _cy)] if _cy is not None else [])
    if _cy is None:
        print("note: compiled backend not available; timing pure only")

    print(f"{args.bits} bits, best of {args.repeat}")
    header = f"{'workload':28s}" + "".join(f"{name:>12s}" for name, _ in impls)
    print(header + ("   speedup" if _cy is not None else ""))
    rows_by_name = {}
    for name, impl in impls:
        for wname, fn in mk(impl):
            rows_by_name.setdefault(wname, {})[name] = _best_of(args.repeat, fn)
    for wname, times in rows_by_name.items():
        line = f"{wname:28s}" + "".join(f"{times[name] * 1e3:10.2f}ms" for name, _ in impls)
        if _cy is not None:
            line += f"   {times['pure'] / times['cython']:7.2f}x"
        print(line)


if __name__ == "__main__":
    main()
