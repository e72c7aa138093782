"""Timing comparison of the compiled and pure-Python statevector kernels.

Runs the same enumeration workload against every available kernel
implementation and reports per-backend wall time plus the speedup over
the pure-Python baseline.  Results are bit-identical across backends by
construction; this script only measures, it does not validate.

    python benchmarks/bench_kernels.py --max-n 14 --gates 60 --repeat 3
"""

from __future__ import annotations

import argparse
import time

from oneclean import Dqc1Instance
from oneclean._seeding import stream
from oneclean.kernels import BACKEND, available
from oneclean.simulate import dqc1_exact
from oneclean.workloads import random_circuit


def _bench_once(instance, impl) -> float:
    t0 = time.perf_counter()
    dqc1_exact(instance, cap=instance.mixed_width, impl=impl)
    return time.perf_counter() - t0


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--min-n", type=int, default=8)
    ap.add_argument("--max-n", type=int, default=14)
    ap.add_argument("--gates", type=int, default=60)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    impls = available()
    print(f"default backend: {BACKEND}; measuring: {', '.join(sorted(impls))}")
    header = f"{'n':>4} {'gates':>6}" + "".join(f" {name:>12}" for name in sorted(impls))
    if "compiled" in impls:
        header += f" {'speedup':>9}"
    print(header)
    for n in range(args.min_n, args.max_n + 1, 2):
        rng = stream(args.seed, f"bench-{n}")
        instance = Dqc1Instance(random_circuit(rng, n + 1, args.gates), n)
        best = {}
        for name in sorted(impls):
            best[name] = min(_bench_once(instance, impls[name])
                             for _ in range(args.repeat))
        row = f"{n:>4} {args.gates:>6}" + "".join(
            f" {best[name]:>11.4f}s" for name in sorted(impls))
        if "compiled" in best:
            row += f" {best['python'] / best['compiled']:>8.2f}x"
        print(row)


if __name__ == "__main__":
    main()
