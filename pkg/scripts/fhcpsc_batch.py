"""Run the solver over FHCPSC instances graph<first>..graph<last>.hcp and write a CSV.

    python scripts/fhcpsc_batch.py /path/to/FHCPSC --first 1 --last 20 --time-limit 60 --csv out.csv

The challenge set is not bundled; download it separately.
"""

import argparse
import csv
import sys
from pathlib import Path

from hcma.graph import HCPParseError, read_hcp, verify_hc
from hcma.solver import SolverConfig, solve


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("dir")
    ap.add_argument("--first", type=int, default=1)
    ap.add_argument("--last", type=int, default=20)
    ap.add_argument("--time-limit", type=float, default=None, help="seconds (default 600, 1800 with --set-cf)")
    ap.add_argument("--set-cf", action="store_true")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--csv", default=None)
    args = ap.parse_args()

    kw = {"seed": args.seed}
    if args.time_limit is not None:
        kw["time_limit"] = args.time_limit
    cfg = SolverConfig.set_cf(**kw) if args.set_cf else SolverConfig(**kw)

    fh = open(args.csv, "w", newline="") if args.csv else sys.stdout
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["instance", "n", "m", "solved", "phase", "time_ms", "generations"])
    solved = total = 0
    for i in range(args.first, args.last + 1):
        path = Path(args.dir) / f"graph{i}.hcp"
        total += 1
        try:
            g = read_hcp(path)
        except (OSError, HCPParseError) as e:
            print(f"graph{i}: {e}", file=sys.stderr)
            w.writerow([f"graph{i}", "", "", 0, "read-error", 0, 0])
            continue
        r = solve(g, cfg)
        ok = r.solved and verify_hc(g, r.cycle)
        solved += ok
        w.writerow([f"graph{i}", r.n, r.m, int(ok), r.phase, f"{r.wall_time_ms:.0f}", r.generations])
        fh.flush()
    print(f"solved {solved}/{total}", file=sys.stderr)
    if fh is not sys.stdout:
        fh.close()


if __name__ == "__main__":
    main()
