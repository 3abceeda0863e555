"""Compare the compiled kernels with the numpy fallback.

Usage::

    python3 benchmarks/bench_core.py [--repeat 5]

Each backend runs in its own subprocess because the backend is chosen
once, at import time, from ``OCCTOMO_BACKEND``.
"""
import argparse
import json
import os
import subprocess
import sys

_WORKER = r"""
import json, sys, timeit
import numpy as np
import occtomo
from occtomo.kernel import KernelSpec
from occtomo.occupation import assemble_gram
from occtomo.solver import SolverConfig, mt_iterate
from occtomo.synthfield import experiment1_field, generate_samples
from occtomo.trajectory import Box, simulate_samples

repeat = int(sys.argv[1])
samples = generate_samples(experiment1_field(), 20, seed=0, steps=100)
trajs = simulate_samples(samples, None, 100)
kernel = KernelSpec(1.0)
est, _ = mt_iterate(samples, SolverConfig(iterations=2))
grid = Box().grid(100)

cases = {
    "gram 20x20, F=100": lambda: assemble_gram(kernel, trajs),
    "eval field, 10^4 points": lambda: est(grid),
    "mt_iterate N=10, M=20": lambda: mt_iterate(samples, SolverConfig(iterations=10)),
}
out = {"backend": occtomo.BACKEND}
for name, fn in cases.items():
    n = 1 if name.startswith("mt") else 5
    out[name] = min(timeit.repeat(fn, number=n, repeat=repeat)) / n
print(json.dumps(out))
"""


def run(backend, repeat):
    env = dict(os.environ, OCCTOMO_BACKEND=backend)
    res = subprocess.run([sys.executable, "-c", _WORKER, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    compiled = run("cython", args.repeat)
    fallback = run("python", args.repeat)
    if compiled["backend"] != "cython":
        print("compiled extension not available; only the fallback was timed")
    cases = [k for k in fallback if k != "backend"]
    print(f"{'case':<28}{'compiled [s]':>14}{'fallback [s]':>14}{'speedup':>10}")
    for name in cases:
        c, f = compiled[name], fallback[name]
        print(f"{name:<28}{c:>14.4f}{f:>14.4f}{f / c:>10.2f}")


if __name__ == "__main__":
    main()
