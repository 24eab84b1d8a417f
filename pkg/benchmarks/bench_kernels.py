#!/usr/bin/env python3
"""Benchmark: compiled counting kernel vs the pure-Python fallback.

Times the injection count of two motifs over sampled graphs at densities
matching the Monte Carlo experiments, plus the end-to-end replication
pipeline.  Run after `pip install -e . --no-build-isolation`:

    python benchmarks/bench_kernels.py [--reps 50]
"""

import argparse
import time

from muxcount import motifs
from muxcount._kernels import IMPLEMENTATION, compiled, pure
from muxcount.counting import build_csr, build_plan
from muxcount.sampler import SeedSpec, from_theta, sample_arrays
from muxcount.thresholds import ThetaPoint


def time_kernel(kernel, plan, n, csr1, csr2, reps):
    best = float("inf")
    result = None
    for _ in range(3):
        t0 = time.perf_counter()
        for _ in range(reps):
            result = kernel.count_injections(
                n, csr1[0], csr1[1], csr2[0], csr2[1],
                plan.cons_ptr, plan.cons_prev, plan.cons_mask,
                plan.deg1_req, plan.deg2_req,
            )
        best = min(best, (time.perf_counter() - t0) / reps)
    return best, result


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--reps", type=int, default=20, help="timed repetitions per case")
    args = parser.parse_args()

    if compiled is None:
        print("compiled kernel unavailable; only the pure kernel will run")

    cases = [
        ("edge-triangle, n=400 theta=(1/4,1/4,2)", motifs.edge_triangle(), 400,
         ThetaPoint.of("1/4", "1/4", 2)),
        ("edge-triangle, n=300 theta=(3/4,3/4,3/2)", motifs.edge_triangle(), 300,
         ThetaPoint.of("3/4", "3/4", "3/2")),
        ("tailed-cycle, n=200 theta=(2/5,2/5,1/2)", motifs.tailed_cycle(), 200,
         ThetaPoint.of("2/5", "2/5", "1/2")),
    ]

    print(f"active kernel at import: {IMPLEMENTATION}")
    print(f"{'case':45s} {'pure':>12s} {'compiled':>12s} {'speedup':>9s}")
    for label, motif, n, theta in cases:
        p = from_theta(n, theta)
        e1, e2 = sample_arrays(n, p, SeedSpec(0, 0))
        csr1 = build_csr(n, e1)
        csr2 = build_csr(n, e2)
        plan = build_plan(motif)
        t_pure, r_pure = time_kernel(pure, plan, n, csr1, csr2, max(1, args.reps // 10))
        if compiled is not None:
            t_comp, r_comp = time_kernel(compiled, plan, n, csr1, csr2, args.reps)
            assert r_pure == r_comp, "kernel results disagree"
            print(f"{label:45s} {t_pure*1e3:10.2f}ms {t_comp*1e3:10.2f}ms {t_pure/t_comp:8.1f}x")
        else:
            print(f"{label:45s} {t_pure*1e3:10.2f}ms {'-':>12s} {'-':>9s}")


if __name__ == "__main__":
    main()
