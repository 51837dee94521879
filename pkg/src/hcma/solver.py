"""End-to-end Hamiltonian cycle search: tree-decomposition DP first, then the memetic algorithm."""

from __future__ import annotations

import csv
import io
import logging
import math
import random
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

import numpy as np

from .graph import Graph, HCPParseError, is_connected, read_hcp, verify_hc
from .naive_dp import DPTimeout, dp_hamiltonian
from .population import (POP_SIZE, Population, initialize_pop, is_diverse, mutate_pop,
                         recombine_pop, restart_pop, structure_pop)
from .local_search import local_search
from .reduction import DistanceMatrix, tc_reduce
from .sparsify import SparseState, augment, initial_sparsification, maybe_reset
from .tour import Tour, build_neighbor_lists
from .treedecomp import WidthCapExceeded, min_fill_decomposition

log = logging.getLogger(__name__)

CSV_COLUMNS = ["name", "n", "m", "solved", "phase", "time_ms", "generations", "seed"]


class SoundnessError(RuntimeError):
    """A tour reached cost n on the working matrix but is not a cycle of the graph."""


@dataclass
class SolverConfig:
    mutation_rate: float = 0.05
    population_size: int = POP_SIZE
    time_limit: float = 600.0
    restart_stagnation: int = 30
    restart_after: int = 30
    conflict_batch: int = 1
    dp_width_cap: int = 10
    dp_deadline: float = 10.0
    neighbor_k: int = 5
    seed: int = 0
    log_base: float = math.e
    use_dp: bool = True
    use_sparsify: bool = True
    max_generations: int | None = None  # overrides the formula when set

    def __post_init__(self):
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError("mutation_rate must lie in [0, 1]")
        if self.time_limit <= 0:
            raise ValueError("time_limit must be positive")
        if self.population_size != POP_SIZE:
            raise ValueError(f"population size is fixed at {POP_SIZE}")
        if self.conflict_batch != 1:
            raise ValueError("only one conflicting edge per iteration is supported")
        if self.neighbor_k < 1:
            raise ValueError("neighbor_k must be positive")

    @classmethod
    def set_cf(cls, **kw) -> "SolverConfig":
        """Preset for the hardest instance sets: a 30 minute budget."""
        kw.setdefault("time_limit", 1800.0)
        return cls(**kw)


@dataclass
class RunResult:
    name: str
    n: int
    m: int
    solved: bool
    phase: str
    cycle: list[int] | None
    wall_time_ms: float
    generations: int
    seed: int
    reason: str = ""
    trace: list[dict] = field(default_factory=list, repr=False)

    def csv_row(self) -> list:
        return [self.name, self.n, self.m, int(self.solved), self.phase,
                round(self.wall_time_ms), self.generations, self.seed]


def max_generations(n: int, log_base: float = math.e) -> int:
    """floor(5 * 13 * log(13) * sqrt(n)); natural log unless ``log_base`` says otherwise."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return math.floor(5 * 13 * math.log(13, log_base) * math.sqrt(n))


def phase_rng(seed: int, *keys) -> random.Random:
    """Independent stream for one (phase, generation, ...) slot of a run."""
    return random.Random(":".join(map(str, (seed,) + keys)))


class _Run:
    """State of one memetic-algorithm run; kept on an object so the loop stays readable."""

    def __init__(self, g: Graph, cfg: SolverConfig, t0: float, observer=None):
        self.g, self.cfg, self.t0 = g, cfg, t0
        self.observer = observer
        self.base = tc_reduce(g)
        self.m: DistanceMatrix = self.base
        self.nl = build_neighbor_lists(self.m, cfg.neighbor_k)
        self.state: SparseState | None = None
        self.found: list[int] | None = None
        self.generation = 0

    def out_of_time(self) -> bool:
        return time.monotonic() - self.t0 >= self.cfg.time_limit

    def check(self, tours) -> bool:
        n = self.g.n
        for t in tours:
            if t.cost == n:
                order = t.order
                if not verify_hc(self.g, order):
                    raise SoundnessError("cost-n tour is not a Hamiltonian cycle of the input graph")
                self.found = order
                return True
        return False

    def emit(self, phase: str, pop: Population, **extra) -> None:
        if self.observer is not None:
            self.observer(phase, pop, self, **extra)

    def matrix_changed(self, pop: Population, changed: set[int] | None) -> None:
        """Recompute all costs, neighbour lists and don't-look bits after a matrix update."""
        self.nl = build_neighbor_lists(self.m, self.cfg.neighbor_k)
        idx = None if changed is None else np.fromiter(changed, dtype=np.int64)
        for t in pop.tours():
            t.recompute(self.m)
            if idx is None:
                t.dlb[:] = False
            elif len(idx):
                t.dlb[idx] = False
        structure_pop(pop)

    def run(self) -> Population | None:
        cfg, g = self.cfg, self.g
        pop = initialize_pop(self.m, self.nl, phase_rng(cfg.seed, "init"))
        self.emit("init", pop)
        if self.check(pop.tours()):
            return pop
        if cfg.use_sparsify:
            self.state = initial_sparsification(g, self.base, pop.agents[0].pocket, self.nl,
                                                phase_rng(cfg.seed, "sparsify"))
            self.m = self.state.working
            self.matrix_changed(pop, None)
            self.emit("sparsify", pop)
            if self.check(pop.tours()):
                return pop
        limit = cfg.max_generations or max_generations(g.n, cfg.log_base)
        best = pop.best.cost
        stagnation = 0
        while self.generation < limit and not self.out_of_time():
            self.generation += 1
            gen = self.generation
            pop.generation = gen
            structure_pop(pop)
            self.emit("structure", pop)
            recombine_pop(pop, self.m, self.nl, phase_rng(cfg.seed, "recombine", gen))
            self.emit("recombine", pop)
            if self.check(pop.tours()) or self.out_of_time():
                break
            mutate_pop(pop, self.m, self.nl, phase_rng(cfg.seed, "mutate", gen), cfg.mutation_rate)
            self.emit("mutate", pop)
            if self.check(pop.tours()) or self.out_of_time():
                break
            if gen > cfg.restart_after and not is_diverse(pop, stagnation, cfg.restart_stagnation):
                restart_pop(pop, self.m, self.nl, phase_rng(cfg.seed, "restart", gen))
                structure_pop(pop)
                stagnation = 0
                self.emit("restart", pop)
            opt_rng = phase_rng(cfg.seed, "optimize", gen)
            for a in pop.agents:
                local_search(a.current, self.m, self.nl, opt_rng)
            structure_pop(pop)
            self.emit("optimize", pop)
            if self.check(pop.tours()) or self.out_of_time():
                break
            if self.state is not None:
                self.state = augment(self.state, g, pop.agents[0].pocket, self.nl)
                leader_t = self.state.last_tour
                self.matrix_changed(pop, self.state.changed)
                if leader_t.cost < pop.agents[0].pocket.cost:
                    pop.agents[0].pocket = leader_t
                self.emit("augment", pop)
                if self.check([leader_t]) or self.check(pop.tours()):
                    break
                self.state, fired = maybe_reset(self.state, g, self.base, pop.agents[0].pocket,
                                                self.nl, phase_rng(cfg.seed, "reset", gen))
                if fired:
                    self.m = self.state.working
                    self.matrix_changed(pop, None)
                    best = pop.best.cost
                    self.emit("reset", pop)
                    if self.check(pop.tours()):
                        break
            cur = pop.best.cost
            pop.best_cost_history.append(cur)
            if cur < best:
                best, stagnation = cur, 0
            else:
                stagnation += 1
        return pop


def _degree_precheck(g: Graph) -> str:
    if g.n < 3:
        return "fewer than 3 vertices"
    if not is_connected(g):
        return "disconnected"
    if any(len(a) < 2 for a in g.adjacency):
        return "vertex of degree < 2"
    return ""


def solve(g: Graph, cfg: SolverConfig | None = None, observer=None) -> RunResult:
    """Search for a Hamiltonian cycle of ``g``.

    The DP runs first when the min-fill decomposition is narrow enough; its
    "no" answer is final.  Otherwise the memetic algorithm runs until a tour of
    cost n appears, the time limit passes, or the generation cap is reached.
    Every reported cycle has been checked against ``g`` itself.
    """
    cfg = cfg or SolverConfig()
    t0 = time.monotonic()

    def result(solved, phase, cycle=None, gens=0, reason=""):
        ms = (time.monotonic() - t0) * 1000.0
        return RunResult(g.name, g.n, g.m, solved, phase, cycle, ms, gens, cfg.seed, reason)

    why = _degree_precheck(g)
    if why:
        return result(False, "pre", reason=why)
    if cfg.use_dp:
        try:
            td = min_fill_decomposition(g, cfg.dp_width_cap)
        except WidthCapExceeded as e:
            log.info("dp skipped: %s", e)
        else:
            deadline = time.monotonic() + min(cfg.dp_deadline, cfg.time_limit)
            try:
                cycle = dp_hamiltonian(g, td, deadline)
            except DPTimeout:
                log.info("dp timed out at width %d", td.width)
            else:
                if cycle is None:
                    return result(False, "dp", reason="not Hamiltonian")
                if not verify_hc(g, cycle):
                    raise SoundnessError("dp returned an invalid cycle")
                return result(True, "dp", cycle)
    run = _Run(g, cfg, t0, observer)
    run.run()
    if run.found is not None:
        return result(True, "ma", run.found, run.generation)
    reason = "time limit" if run.out_of_time() else "generation limit"
    return result(False, "ma", None, run.generation, reason)


def _summary(results: list[RunResult]) -> list[list]:
    times = [r.wall_time_ms for r in results if r.solved]
    rows = [["# solved", sum(r.solved for r in results), "of", len(results)]]
    if times:
        rows.append(["# time_ms mean", round(statistics.mean(times)),
                     "median", round(statistics.median(times)),
                     "max", round(max(times)), "min", round(min(times))])
    return rows


def batch(directory, cfg: SolverConfig | None = None, out=None) -> list[RunResult]:
    """Solve every ``*.hcp`` file in ``directory`` (sorted by name) and write CSV rows to ``out``.

    Files that fail to parse get a row with solved=0 and phase ``parse-error``.
    """
    cfg = cfg or SolverConfig()
    writer = csv.writer(out if out is not None else io.StringIO(), lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    results = []
    paths = sorted(Path(directory).glob("*.hcp"), key=_natural_key)
    for path in paths:
        try:
            g = read_hcp(path)
        except (OSError, HCPParseError, ValueError) as e:
            log.warning("%s: %s", path.name, e)
            r = RunResult(path.stem, 0, 0, False, "parse-error", None, 0.0, 0, cfg.seed, str(e))
        else:
            r = solve(g, cfg)
        results.append(r)
        writer.writerow(r.csv_row())
        if out is not None:
            out.flush()
    if results:
        writer.writerows(_summary(results))
    return results


def _natural_key(p: Path) -> tuple:
    digits = "".join(ch for ch in p.stem if ch.isdigit())
    return (int(digits) if digits else -1, p.name)


def iter_instances(directory) -> Iterator[Graph]:
    for path in sorted(Path(directory).glob("*.hcp"), key=_natural_key):
        yield read_hcp(path)
