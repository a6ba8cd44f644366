"""Compare the compiled binary128 ellipsoid loop against the mpmath fallback.

    python benchmarks/bench_backends.py [--repeat 3] [--eps 1e-6]

Both backends run the same iteration sequence, so the table also reports
whether their results agree.  The bound bundle is computed once per
instance and excluded from the timings.
"""

from __future__ import annotations

import argparse
import time
from fractions import Fraction

from tensorrho import MaxLogSumExp, MonomialMap, UniformHypergraph
from tensorrho.coercivity import bound_bundle
from tensorrho.ellipsoid import compiled_available, minimize_altitude
from tensorrho.exponent_core import integerize
from tensorrho.tensor_reduction import grad_map, reduce_to_f


def instances():
    yield "two-exponent n=1", MaxLogSumExp.from_data([([(1,), (-1,)], [1, 1])])
    yield "glp n=2", MaxLogSumExp.from_data(
        [([(1, 0), (0, 1), (-1, -1)], [2, 3, 5]), ([(2, -1), (-1, 2), (-1, -1)], [1, 1, 7])]
    )
    A = [[0, 2, 1, 0], [1, 0, 3, 1], [4, 1, 0, 2], [1, 0, 1, 0]]
    yield "matrix 4x4", reduce_to_f(MonomialMap.from_matrix(A))
    yield "K_5 3-uniform", reduce_to_f(grad_map(UniformHypergraph.complete(5, 3).form()))


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--eps", default="1e-6")
    args = ap.parse_args(argv)
    eps = Fraction(args.eps)
    if not compiled_available():
        print("compiled backend not built; only the fallback can run")
    print(f"{'instance':<20} {'iters':>6} {'compiled s':>11} {'python s':>10} {'speedup':>8}  agree")
    for name, f in instances():
        prob = integerize(f)
        bundle = bound_bundle(prob)  # shared setup, kept out of the timings
        tp, rp = best_of(lambda: minimize_altitude(prob, bundle, eps, backend="python"),
                         args.repeat)
        if compiled_available():
            tc, rc = best_of(lambda: minimize_altitude(prob, bundle, eps, backend="compiled"),
                             args.repeat)
            agree = abs(float(rc.t_star - rp.t_star)) <= float(eps) / 2
            print(f"{name:<20} {rc.iterations:>6} {tc:>11.4f} {tp:>10.4f} {tp / tc:>8.1f}  {agree}")
        else:
            print(f"{name:<20} {rp.iterations:>6} {'-':>11} {tp:>10.4f} {'-':>8}  -")


if __name__ == "__main__":
    main()
