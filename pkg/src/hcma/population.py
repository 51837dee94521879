"""The 13-agent ternary-tree population and its genetic operators.

Agents are stored in level order, so the children of agent i are 3i+1, 3i+2
and 3i+3.  Each agent carries a ``pocket`` (best remembered tour) and a
``current`` (working tour).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .local_search import local_search, rai_improve
from .reduction import DistanceMatrix
from .tour import Tour, nearest_neighbor_tour

POP_SIZE = 13
LEADERS = (1, 2, 3)


def children(i: int) -> list[int]:
    return [c for c in (3 * i + 1, 3 * i + 2, 3 * i + 3) if c < POP_SIZE]


def parent(i: int) -> int:
    return (i - 1) // 3


@dataclass
class Agent:
    pocket: Tour
    current: Tour


@dataclass
class Population:
    agents: list[Agent]
    generation: int = 0
    best_cost_history: list[int] = field(default_factory=list)

    def tours(self) -> list[Tour]:
        return [t for a in self.agents for t in (a.pocket, a.current)]

    @property
    def best(self) -> Tour:
        return min((a.pocket for a in self.agents), key=lambda t: t.cost)

    def pocket_costs(self) -> list[int]:
        return [a.pocket.cost for a in self.agents]

    def is_ordered(self) -> bool:
        costs = self.pocket_costs()
        return all(costs[parent(i)] <= costs[i] for i in range(1, len(costs)))

    def recompute(self, m: DistanceMatrix) -> None:
        for t in self.tours():
            t.recompute(m)


def initialize_pop(m: DistanceMatrix, nl: np.ndarray, rng: random.Random,
                   size: int = POP_SIZE, **ls_kw) -> Population:
    """26 nearest-neighbour tours, each locally optimised, then structured once."""
    def fresh() -> Tour:
        t = nearest_neighbor_tour(m, rng)
        return local_search(t, m, nl, rng, **ls_kw)

    agents = [Agent(fresh(), fresh()) for _ in range(size)]
    return structure_pop(Population(agents))


def structure_pop(p: Population) -> Population:
    """UpdatePocket on every agent, then PocketPropagation up the tree.

    The two steps repeat until both hold: each pocket is no worse than its own
    current, and each parent pocket is no worse than its children's pockets.
    """
    agents = p.agents
    changed = True
    while changed:
        changed = False
        for a in agents:
            if a.current.cost < a.pocket.cost:
                a.pocket, a.current = a.current, a.pocket
                changed = True
        for i in range(len(agents) - 1, 0, -1):
            j = parent(i)
            if agents[i].pocket.cost < agents[j].pocket.cost:
                agents[i].pocket, agents[j].pocket = agents[j].pocket, agents[i].pocket
                changed = True
    return p


def sax_crossover(t1: Tour, t2: Tour, rng: random.Random) -> list[list[int]]:
    """Path cover of the cities using only arcs of ``t1`` or ``t2``.

    Start from a random unvisited city, grow the path forward through random
    unvisited successors (in either parent) and then backward through random
    unvisited predecessors; repeat until every city is covered.
    """
    n = len(t1)
    nxt1, nxt2 = np.roll(t1.pos, -1)[t1.rank].tolist(), np.roll(t2.pos, -1)[t2.rank].tolist()
    prv1, prv2 = np.roll(t1.pos, 1)[t1.rank].tolist(), np.roll(t2.pos, 1)[t2.rank].tolist()
    visited = [False] * n
    starts = list(range(n))
    rng.shuffle(starts)
    paths: list[list[int]] = []

    def pick(a: int, b: int) -> int:
        ok_a, ok_b = not visited[a], not visited[b]
        if ok_a and ok_b and a != b:
            return a if rng.random() < 0.5 else b
        if ok_a:
            return a
        return b if ok_b else -1

    for s in starts:
        if visited[s]:
            continue
        visited[s] = True
        head, tail = [s], []
        v = s
        while (v := pick(nxt1[v], nxt2[v])) >= 0:
            visited[v] = True
            head.append(v)
        v = s
        while (v := pick(prv1[v], prv2[v])) >= 0:
            visited[v] = True
            tail.append(v)
        tail.reverse()
        paths.append(tail + head)
    return paths


def stitch(paths: list[list[int]], m: DistanceMatrix) -> list[int]:
    """Join paths into one tour: always append the path whose head is nearest the current tail."""
    if not paths:
        return []
    order = list(paths[0])
    rest = paths[1:]
    if not rest:
        return order
    heads = np.array([p[0] for p in rest], dtype=np.int64)
    alive = np.ones(len(rest), dtype=bool)
    big = np.iinfo(np.int64).max
    for _ in range(len(rest)):
        d = m.cells[order[-1], heads].astype(np.int64)
        d[~alive] = big
        k = int(np.argmin(d))
        alive[k] = False
        order.extend(rest[k])
    return order


def recombine(t1: Tour, t2: Tour, m: DistanceMatrix, nl: np.ndarray, rng: random.Random, **ls_kw) -> Tour:
    """SAX path cover, greedy stitching, then local search from every city."""
    child = Tour(stitch(sax_crossover(t1, t2, rng), m), m)
    return local_search(child, m, nl, rng, **ls_kw)


def recombine_pop(p: Population, m: DistanceMatrix, nl: np.ndarray, rng: random.Random, **ls_kw) -> Population:
    """Assign a fresh offspring to every current.

    All parents are read from the population as it stood on entry.  The root
    gets Recombine(pocket(1), current(2)); each leader l in 1..3 with its
    children shuffled into off1, off2, off3 gets

        current(l)    <- Recombine(pocket(off2), pocket(off3))
        current(off1) <- Recombine(pocket(l), current(off2))
        current(off2) <- Recombine(pocket(off1), current(off3))
        current(off3) <- Recombine(pocket(off2), current(off1))
    """
    pocket = [a.pocket for a in p.agents]
    current = [a.current for a in p.agents]
    plan = [(0, pocket[1], current[2])]
    for lead in LEADERS:
        o1, o2, o3 = rng.sample(children(lead), 3)
        plan += [
            (lead, pocket[o2], pocket[o3]),
            (o1, pocket[lead], current[o2]),
            (o2, pocket[o1], current[o3]),
            (o3, pocket[o2], current[o1]),
        ]
    for target, a, b in plan:
        p.agents[target].current = recombine(a, b, m, nl, rng, **ls_kw)
    return p


def insertion_mutation(t: Tour, m: DistanceMatrix, rng: random.Random) -> Tour:
    """Move a random city c_j to directly after a different random city c_i (in place).

    The five cities around the move lose their don't-look bits.
    """
    n = len(t)
    while True:
        ci, cj = rng.sample(range(n), 2)
        if t.next(ci) != cj:
            break
    around = (cj, t.prev(cj), t.next(cj), ci, t.next(ci))
    t.insert_after(cj, ci, m)
    t.dlb[list(around)] = False
    return t


def mutate_pop(p: Population, m: DistanceMatrix, nl: np.ndarray, rng: random.Random,
               rate: float = 0.05, **ls_kw) -> Population:
    """Mutate each current with probability ``rate``; keep the result only if strictly cheaper."""
    if len(p.agents[0].current) < 3:
        return p
    for a in p.agents:
        if rng.random() >= rate:
            continue
        aux = insertion_mutation(a.current.copy(), m, rng)
        local_search(aux, m, nl, rng, **ls_kw)
        if aux.cost < a.current.cost:
            a.current = aux
    return p


def is_diverse(p: Population, stagnation: int, limit: int) -> bool:
    """False once all pocket costs coincide or the best cost has stalled for ``limit`` generations."""
    costs = p.pocket_costs()
    return min(costs) != max(costs) and stagnation < limit


def restart_pop(p: Population, m: DistanceMatrix, nl: np.ndarray, rng: random.Random) -> Population:
    """Keep the best pocket untouched; rebuild every other tour from nearest neighbour.

    Rebuilt tours get one insertion mutation followed by RAI.
    """
    keep = min(range(len(p.agents)), key=lambda i: p.agents[i].pocket.cost)

    def fresh() -> Tour:
        t = nearest_neighbor_tour(m, rng)
        insertion_mutation(t, m, rng)
        t.dlb[:] = False
        return rai_improve(t, m, nl, rng)

    for i, a in enumerate(p.agents):
        if i != keep:
            a.pocket = fresh()
        a.current = fresh()
    return p
