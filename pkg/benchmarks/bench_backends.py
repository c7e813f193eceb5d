"""Compare the numba and pure-numpy kernel backends.

Times each kernel on representative inputs and one complete optimisation
run per algorithm, reporting the median of several repeats and the
numpy/numba speed ratio. Usage::

    python benchmarks/bench_backends.py [--repeats 5] [--dimension 30] [--budget 100000]
"""

import argparse
import time

import numpy as np

from oblde import DeConfig, get_backend, make_function, make_strategy, run, use_backend
from oblde import kernels
from oblde._backend import HAVE_NUMBA


def median_time(fn, repeats):
    fn()  # compile / warm caches
    times = []
    for _ in range(repeats):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return float(np.median(times))


def kernel_cases(NP, D, seed=0):
    g = np.random.default_rng(seed)
    X = g.uniform(-100, 100, (NP, D))
    lo, hi = np.full(D, -100.0), np.full(D, 100.0)
    picks = g.integers(0, np.array([NP - 2, NP - 3, NP - 4]), size=(NP, 3))
    donors = kernels.donor_indices(picks)
    start = g.integers(0, D, NP)
    u = g.uniform(size=(NP, D))
    big = g.uniform(-100, 100, (1000, D))
    return {
        "donor_indices": lambda: kernels.donor_indices(picks),
        "rand1_mutants": lambda: kernels.rand1_mutants(X, donors, 0.5, lo, hi),
        "exp_mask": lambda: kernels.exp_mask(start, u, 0.9),
        "mexp_mask": lambda: kernels.mexp_mask(start, u, 0.5, 0.5),
        "min_pair_distance(1000)": lambda: kernels.min_pair_distance(big, hi - lo),
        "pairwise_distance_sum(1000)": lambda: kernels.pairwise_distance_sum(big),
    }


def full_runs(D, budget):
    f = make_function("shifted-rotated-rastrigin", D)
    out = {}
    for name in ("de", "betacobl", "ibetacobl"):
        strategy = None if name == "de" else make_strategy(name)
        out[f"run {name}"] = lambda s=strategy: run(DeConfig(budget_max=budget), f, s)
    return out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--NP", type=int, default=100)
    p.add_argument("--dimension", type=int, default=30)
    p.add_argument("--budget", type=int, default=100_000)
    args = p.parse_args(argv)
    if not HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    cases = {**kernel_cases(args.NP, args.dimension), **full_runs(args.dimension, args.budget)}
    rows = []
    for name, fn in cases.items():
        timings = {}
        for backend in ("numba", "numpy"):
            with use_backend(backend):
                assert get_backend() == backend
                reps = args.repeats if name.startswith("run") else 20 * args.repeats
                timings[backend] = median_time(fn, reps)
        rows.append((name, timings["numba"], timings["numpy"]))

    print(f"NP={args.NP} D={args.dimension} budget={args.budget} (median seconds)")
    print(f"{'case':<30}{'numba':>12}{'numpy':>12}{'numpy/numba':>14}")
    for name, nb, npy in rows:
        print(f"{name:<30}{nb:>12.2e}{npy:>12.2e}{npy / nb:>14.2f}")


if __name__ == "__main__":
    main()
