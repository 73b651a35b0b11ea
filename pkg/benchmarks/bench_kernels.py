"""Compare the compiled and pure-Python trigonometric contraction backends.

    python benchmarks/bench_kernels.py --rows 1001 --nodes 1001 --freqs 201
"""
import argparse
import time

import numpy as np

from fourier_cur import kernels
from fourier_cur.oracle import CoeffOracle
from fourier_cur.quadrature import make_rule
from fourier_cur.testfns import f2


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--rows", type=int, default=1001)
    p.add_argument("--nodes", type=int, default=1001)
    p.add_argument("--freqs", type=int, default=201)
    p.add_argument("--repeats", type=int, default=5)
    args = p.parse_args(argv)

    backends = ["python"] + (["compiled"] if kernels.BACKEND == "compiled" else [])
    if len(backends) == 1:
        print("compiled extension not built; only the python backend is timed")

    rng = np.random.default_rng(0)
    X = rng.standard_normal((args.rows, args.nodes))
    rule = make_rule("NC", args.nodes)
    freqs = np.arange(-(args.freqs // 2), args.freqs // 2 + 1, dtype=float)

    print(f"trig_contract {args.rows}x{args.nodes} -> {args.rows}x{freqs.size}")
    ref = None
    for compensated in (False, True):
        for name in backends:
            out = kernels.trig_contract(X, rule.weights, rule.nodes, freqs, -1,
                                        compensated=compensated, backend=name)
            if ref is None:
                ref = out
            t = best_of(lambda: kernels.trig_contract(X, rule.weights, rule.nodes, freqs, -1,
                                                      compensated=compensated, backend=name),
                        args.repeats)
            diff = np.abs(out - ref).max()
            print(f"  {name:8s} compensated={compensated!s:5s} {t * 1e3:9.2f} ms"
                  f"  max diff vs reference {diff:.1e}")

    print(f"oracle full matrix, f2, NC-{args.nodes}, I={args.freqs // 2}")
    for name in backends:
        def run():
            o = CoeffOracle(f2, args.freqs // 2, args.freqs // 2, rule, rule, backend=name)
            o.full_matrix()
        print(f"  {name:8s} {best_of(run, args.repeats) * 1e3:9.2f} ms")


if __name__ == "__main__":
    main()
