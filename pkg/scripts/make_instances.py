"""Write synthetic HCP instances to a directory.

    python scripts/make_instances.py out/ --kind cubic --n 100 500 1000 --count 10
"""

import argparse
import dataclasses
import random
from pathlib import Path

from hcma.generators import planted_cubic_graph, random_hamiltonian_graph
from hcma.graph import Graph, format_hcp


def build(kind: str, n: int, rng: random.Random, chords: int) -> Graph:
    if kind == "cubic":
        g, _ = planted_cubic_graph(n, rng)
    else:
        g, _ = random_hamiltonian_graph(n, chords if chords >= 0 else n // 2, rng)
    return g


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("out")
    ap.add_argument("--kind", choices=["cubic", "chords"], default="cubic")
    ap.add_argument("--n", type=int, nargs="+", default=[100])
    ap.add_argument("--count", type=int, default=10)
    ap.add_argument("--chords", type=int, default=-1, help="extra edges for --kind chords (default n/2)")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for n in args.n:
        for i in range(args.count):
            rng = random.Random(f"{args.seed}:{args.kind}:{n}:{i}")
            g = build(args.kind, n, rng, args.chords)
            name = f"{args.kind}_{n}_{i}"
            g = dataclasses.replace(g, name=name)
            (out / f"{name}.hcp").write_text(format_hcp(g))
    print(f"wrote {len(args.n) * args.count} instances to {out}")


if __name__ == "__main__":
    main()
