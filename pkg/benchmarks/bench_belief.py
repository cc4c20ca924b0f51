"""Compare the compiled and pure-Python belief-search kernels.

    python3 benchmarks/bench_belief.py [--instances N] [--repeat R] [--seed S]

Workloads are seeded random planning problems and forward encodings of
random model-checking instances; only the kernel call is timed.
"""
import argparse
import random
import statistics
import sys
import timeit

from hyperconf.encode_forward import encode_explicit
from hyperconf.random_instances import random_formula, random_problem, random_ts
from hyperconf.solve import compile_problem
from hyperconf.solve.kernels import BACKENDS, get_kernel

CAP = 10**7


def workloads(seed: int, count: int):
    rng = random.Random(seed)
    yield "planning |S|<=12", [random_problem(rng, 12, 4) for _ in range(count)]
    yield "planning |S|<=24", [random_problem(rng, 24, 4) for _ in range(count)]
    yield "planning |S|<=64", [random_problem(rng, 64, 6) for _ in range(count)]
    forward = []
    while len(forward) < count:
        t, f = random_ts(rng, 4, 3), random_formula(rng, 3)
        if f.n + f.m == 3:
            forward.append(encode_explicit(t, f))
    yield "forward n+m=3", forward


def kernel_args(p):
    c = compile_problem(p)  # dense id 0 is the initial state
    return (len(c.states), c.n_actions, 0, c.app, c.offsets, c.targets, c.goal, CAP)


def time_kernel(name: str, args: list, repeat: int) -> float:
    kernel = get_kernel(name)

    def batch():
        for a in args:
            kernel(*a)

    return min(timeit.repeat(batch, number=1, repeat=repeat))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if "cython" not in BACKENDS:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation` first", file=sys.stderr)
        return 1
    print(f"{'workload':<20} {'beliefs':>9} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for label, problems in workloads(args.seed, args.instances):
        batch = [kernel_args(p) for p in problems]
        results = {name: [get_kernel(name)(*a) for a in batch] for name in ("python", "cython")}
        if results["python"] != results["cython"]:
            print(f"{label}: kernels disagree", file=sys.stderr)
            return 2
        beliefs = statistics.mean(r[2] for r in results["python"])
        py = time_kernel("python", batch, args.repeat)
        cy = time_kernel("cython", batch, args.repeat)
        print(f"{label:<20} {beliefs:>9.1f} {py * 1000:>10.1f} {cy * 1000:>10.1f} {py / cy:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
