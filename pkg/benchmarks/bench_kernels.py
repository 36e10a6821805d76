"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Also times a full SWUCRL2-CW run on the drifting instance with each backend.
"""
import argparse
import timeit

import numpy as np

from driftrl import kernels
from driftrl.agents import SwConfig, run_swucrl2cw
from driftrl.envs import DriftingConfig, drifting_env

KERNEL_NAMES = ("sort_desc", "optimistic_rows", "evi_sweeps", "ssp_sweeps")


def problem(S, A, seed=0):
    rng = np.random.default_rng(seed)
    centers = rng.dirichlet(np.ones(S), size=(S, A))
    budgets = rng.random((S, A)) * 0.5
    reward_upper = rng.random((S, A))
    n_actions = np.full(S, A, dtype=np.int64)
    return rng.random(S), centers, budgets, reward_upper, n_actions


def use(mod):
    for name in KERNEL_NAMES:
        setattr(kernels, name, getattr(mod, name))


def cases(S, A):
    u, centers, budgets, reward_upper, n_actions = problem(S, A)
    return {
        "sort_desc": lambda m: m.sort_desc(u),
        "optimistic_rows": lambda m: m.optimistic_rows(u, centers, budgets),
        "evi_sweeps": lambda m: m.evi_sweeps(reward_upper, centers, budgets, n_actions, 1e-6, 10_000),
        "ssp_sweeps": lambda m: m.ssp_sweeps(centers, n_actions, 0, 1e-9, 100_000),
    }


def best_of(fn, repeat):
    timer = timeit.Timer(fn)
    n, _ = timer.autorange()
    return min(timer.repeat(repeat, n)) / n


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--sizes", default="2x2,10x4,40x8")
    args = ap.parse_args()

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled extension not built; run `python3 setup.py build_ext --inplace`")
    names = sorted(backends)
    print(f"{'kernel':<16}{'S x A':>8}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}")
    for size in args.sizes.split(","):
        S, A = map(int, size.split("x"))
        for kernel, fn in cases(S, A).items():
            t = {n: best_of(lambda: fn(backends[n]), args.repeat) for n in names}
            ratio = t["python"] / t["cython"] if "cython" in t else float("nan")
            print(f"{kernel:<16}{size:>8}" + "".join(f"{t[n] * 1e6:>10.1f}us" for n in names)
                  + f"{ratio:>9.1f}x")

    mdp = drifting_env(DriftingConfig(5000, 5000 ** 0.2, 5000 ** 0.2))
    saved = {n: getattr(kernels, n) for n in KERNEL_NAMES}
    for n in names:
        use(backends[n])
        t = best_of(lambda: run_swucrl2cw(mdp, SwConfig(11, 0.03), np.random.default_rng(0)), 3)
        print(f"SWUCRL2-CW T=5000 W=11 [{n}]: {t:.3f}s")
    for name, fn in saved.items():
        setattr(kernels, name, fn)


if __name__ == "__main__":
    main()
