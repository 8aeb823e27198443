"""Time the compiled and numpy phase-1 kernels on the same LP instances.

    python3 benchmarks/bench_simplex.py [--reps N]

Instances: random CHSH-cycle problems (16 cells, 17 rows) and random
pair-marginal problems on 8 binary variables (256 cells, 113 rows).
Both kernels must return identical verdicts; the script checks that too.
"""

import argparse
import math
import time

import numpy as np

from qviability import lpmatch
from qviability.lpmatch import simplex
from qviability.qdist import OutcomeSpace, make_distribution


def cycle_systems(rng, count):
    out = []
    for _ in range(count):
        targets = []
        for i, j in ((0, 2), (0, 3), (1, 2), (1, 3)):
            c = rng.uniform(-1, 1)
            s = np.array([1.0, -1.0])
            targets.append(((i, j), (1 + c * np.outer(s, s)) / 4))
        prob = lpmatch.MatchingProblem(OutcomeSpace.binary(4), tuple(targets))
        out.append(lpmatch.constraint_system(prob)[:2])
    return out


def pair_systems(rng, count, n=8):
    out = []
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for _ in range(count):
        p = make_distribution(OutcomeSpace.binary(n), rng.dirichlet(np.ones(2**n)), 1e-9)
        prob = lpmatch.problem_from_marginals(p, pairs)
        out.append(lpmatch.constraint_system(prob)[:2])
    return out


def run(systems, backend, reps):
    best = math.inf
    objs = None
    for _ in range(reps):
        t0 = time.perf_counter()
        objs = [simplex.phase1(A, b, backend=backend).objective for A, b in systems]
        best = min(best, time.perf_counter() - t0)
    return best, objs


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    suites = {"cycle (16 cells) x500": cycle_systems(rng, 500), "pairs n=8 (256 cells) x10": pair_systems(rng, 10)}
    names = sorted(lpmatch.BACKENDS)
    print(f"backends: {', '.join(names)} (default {lpmatch.BACKEND})")
    for label, systems in suites.items():
        times = {}
        ref = None
        for name in names:
            t, objs = run(systems, name, args.reps)
            times[name] = t
            if ref is None:
                ref = objs
            elif objs != ref:
                raise SystemExit(f"{label}: backends disagree")
        line = "  ".join(f"{k} {v * 1e3:8.1f} ms" for k, v in times.items())
        if "cython" in times:
            line += f"  speedup x{times['python'] / times['cython']:.1f}"
        print(f"{label:28s} {line}")


if __name__ == "__main__":
    main()
