"""Command-line entry point: solve, batch, verify, reduce, decompose.

Exit codes: 0 solved (or check passed), 1 not solved (or check failed),
2 bad input.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .graph import HCPParseError, read_hcp, verify_hc
from .reduction import DisconnectedGraphError, format_tsplib_matrix, sr_reduce, tc_reduce
from .solver import SolverConfig, batch, solve
from .tour import format_tour, parse_tour
from .treedecomp import min_fill_decomposition

EXIT_SOLVED, EXIT_UNSOLVED, EXIT_INPUT = 0, 1, 2


def _default_seed() -> int:
    raw = os.environ.get("HCMA_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"HCMA_SEED must be an integer, got {raw!r}") from None


def _add_solver_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--time-limit", type=float, default=None, help="seconds per instance (default 600)")
    p.add_argument("--set-cf", action="store_true", help="use the 1800 s budget for the hardest sets")
    p.add_argument("--seed", type=int, default=None, help="random seed (falls back to HCMA_SEED, then 0)")
    p.add_argument("--mutation-rate", type=float, default=0.05)
    p.add_argument("--no-dp", action="store_true", help="skip the tree-decomposition DP")
    p.add_argument("--no-sparsify", action="store_true", help="search on the plain TC matrix")
    p.add_argument("--dp-width-cap", type=int, default=10)
    p.add_argument("--dp-deadline", type=float, default=10.0)
    p.add_argument("--neighbor-k", type=int, default=5)
    p.add_argument("--max-generations", type=int, default=None)


def _config(args) -> SolverConfig:
    kw = dict(
        mutation_rate=args.mutation_rate,
        seed=args.seed if args.seed is not None else _default_seed(),
        use_dp=not args.no_dp,
        use_sparsify=not args.no_sparsify,
        dp_width_cap=args.dp_width_cap,
        dp_deadline=args.dp_deadline,
        neighbor_k=args.neighbor_k,
        max_generations=args.max_generations,
    )
    if args.time_limit is not None:
        kw["time_limit"] = args.time_limit
    return SolverConfig.set_cf(**kw) if args.set_cf else SolverConfig(**kw)


def _load(path: str):
    try:
        return read_hcp(path)
    except FileNotFoundError:
        raise _InputError(f"{path}: no such file")
    except (HCPParseError, ValueError, OSError) as e:
        raise _InputError(f"{path}: {e}")


class _InputError(Exception):
    pass


def cmd_solve(args) -> int:
    g = _load(args.file)
    r = solve(g, _config(args))
    status = "solved" if r.solved else f"not solved ({r.reason})"
    print(f"{r.name}: {status} phase={r.phase} n={r.n} m={r.m} "
          f"time_ms={r.wall_time_ms:.0f} generations={r.generations} seed={r.seed}", file=sys.stderr)
    if r.solved:
        text = format_tour(r.cycle, name=f"{r.name}.tour")
        if args.tour_out:
            Path(args.tour_out).write_text(text)
        else:
            sys.stdout.write(text)
    return EXIT_SOLVED if r.solved else EXIT_UNSOLVED


def cmd_batch(args) -> int:
    if not Path(args.dir).is_dir():
        raise _InputError(f"{args.dir}: not a directory")
    cfg = _config(args)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            results = batch(args.dir, cfg, fh)
    else:
        results = batch(args.dir, cfg, sys.stdout)
    return EXIT_SOLVED if all(r.solved for r in results) else EXIT_UNSOLVED


def cmd_verify(args) -> int:
    g = _load(args.graph)
    try:
        order = parse_tour(Path(args.tour).read_text())
    except (OSError, ValueError) as e:
        raise _InputError(f"{args.tour}: {e}")
    ok = verify_hc(g, order)
    print("valid Hamiltonian cycle" if ok else "not a Hamiltonian cycle")
    return EXIT_SOLVED if ok else EXIT_UNSOLVED


def cmd_reduce(args) -> int:
    g = _load(args.file)
    try:
        m = tc_reduce(g) if args.method == "tc" else sr_reduce(g)
    except DisconnectedGraphError as e:
        raise _InputError(str(e))
    sys.stdout.write(format_tsplib_matrix(m, name=g.name or "reduced"))
    return EXIT_SOLVED


def cmd_decompose(args) -> int:
    g = _load(args.file)
    td = min_fill_decomposition(g)
    sys.stdout.write(td.to_pace(g.n))
    return EXIT_SOLVED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hcma", description="Hamiltonian cycle search by memetic algorithm")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="search one instance")
    p.add_argument("file")
    p.add_argument("--tour-out", default=None, help="write the tour here instead of stdout")
    _add_solver_args(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("batch", help="solve every .hcp file in a directory, CSV out")
    p.add_argument("dir")
    p.add_argument("--csv", default=None)
    _add_solver_args(p)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("verify", help="check a tour against a graph")
    p.add_argument("graph")
    p.add_argument("tour")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reduce", help="print the TSP matrix as TSPLIB FULL_MATRIX")
    p.add_argument("file")
    p.add_argument("--method", choices=("sr", "tc"), default="tc")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("decompose", help="print a min-fill tree decomposition in PACE format")
    p.add_argument("file")
    p.set_defaults(func=cmd_decompose)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    level = logging.WARNING - 10 * args.verbose
    logging.basicConfig(level=max(level, logging.DEBUG), format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except _InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
