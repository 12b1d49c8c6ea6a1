"""Compare the compiled and pure-NumPy kernel backends.

    python benchmarks/bench_kernels.py [--sizes 4 16 64] [--repeat 5]

Reports the best-of-repeat time per call for each kernel and the wall time of
a small multistart search under each backend. Both backends must produce the
same search result; the script exits 1 if they do not.
"""
import argparse
import sys
import timeit

import numpy as np

from orthentropy import kernels
from orthentropy.manifold import OptimizerConfig, multistart_search
from orthentropy.matrices import haar_orthogonal_array


def kernel_calls(o, alpha):
    o2 = haar_orthogonal_array(o.shape[0], np.random.default_rng(1))
    return {
        "row_entropies": lambda: kernels.row_entropies(o),
        "entropy_gradient": lambda: kernels.entropy_gradient(o),
        "power_sum": lambda: kernels.power_sum(o, alpha),
        "power_gradient": lambda: kernels.power_gradient(o, alpha),
        "objective_gain": lambda: kernels.objective_gain(o, o2, 1.0),
        "stationarity_residual": lambda: kernels.stationarity_residual(o, alpha),
    }


def best_time(fn, repeat):
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat=repeat, number=number)) / number


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[4, 16, 64])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--search-n", type=int, default=5)
    p.add_argument("--search-restarts", type=int, default=40)
    args = p.parse_args(argv)

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; only the NumPy backend is available")
    previous = kernels.BACKEND

    print(f"{'kernel':<24}{'n':>5}" + "".join(f"{b + ' (us)':>16}" for b in backends) + f"{'speedup':>10}")
    for n in args.sizes:
        o = haar_orthogonal_array(n, np.random.default_rng(0))
        names = list(kernel_calls(o, args.alpha))
        for name in names:
            times = []
            for b in backends:
                kernels.set_backend(b)
                times.append(best_time(kernel_calls(o, args.alpha)[name], args.repeat))
            speed = f"{times[-1] / times[0]:>9.1f}x" if len(times) > 1 else ""
            print(f"{name:<24}{n:>5}" + "".join(f"{t * 1e6:>16.2f}" for t in times) + speed)

    config = OptimizerConfig(n=args.search_n, restarts=args.search_restarts, master_seed=0)
    results = {}
    print()
    for b in backends:
        kernels.set_backend(b)
        start = timeit.default_timer()
        cat = multistart_search(config, classify=False)
        elapsed = timeit.default_timer() - start
        results[b] = [(r.iterations, r.final_entropy) for r in cat.runs]
        iters = sum(r.iterations for r in cat.runs)
        print(f"multistart n={config.n} restarts={config.restarts} [{b}]: {elapsed:.3f} s, {iters} iterations")
    kernels.set_backend(previous)

    if len(results) > 1:
        ref = results[backends[0]]
        for b in backends[1:]:
            diff = max(abs(x[1] - y[1]) for x, y in zip(ref, results[b]))
            same_iters = [x[0] for x in ref] == [y[0] for y in results[b]]
            print(f"{backends[0]} vs {b}: max entropy difference {diff:.3g}, iteration counts equal: {same_iters}")
            if diff > 1e-9:
                return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
