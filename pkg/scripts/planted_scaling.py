"""Solve rate and wall time on planted cubic graphs across sizes.

    python scripts/planted_scaling.py --n 100 500 1000 --count 10 --time-limit 300
"""

import argparse
import random
import statistics

from hcma.generators import planted_cubic_graph
from hcma.graph import verify_hc
from hcma.solver import SolverConfig, solve


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[100, 500, 1000])
    ap.add_argument("--count", type=int, default=10)
    ap.add_argument("--time-limit", type=float, default=300)
    ap.add_argument("--no-dp", action="store_true")
    args = ap.parse_args()

    print("n,solved,count,median_s,max_s,phases")
    for n in args.n:
        times, solved, phases = [], 0, {}
        for s in range(args.count):
            g, _ = planted_cubic_graph(n, random.Random(1000 * n + s))
            r = solve(g, SolverConfig(seed=s, time_limit=args.time_limit, use_dp=not args.no_dp))
            solved += r.solved and verify_hc(g, r.cycle)
            times.append(r.wall_time_ms / 1000)
            phases[r.phase] = phases.get(r.phase, 0) + 1
        tag = " ".join(f"{k}:{v}" for k, v in sorted(phases.items()))
        print(f"{n},{solved},{args.count},{statistics.median(times):.2f},{max(times):.2f},{tag}", flush=True)


if __name__ == "__main__":
    main()
