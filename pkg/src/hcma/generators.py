"""Small graph families and random instance generators used by tests and scripts."""

from __future__ import annotations

import itertools
import random

from .graph import Graph


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], f"C{n}")


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)], f"P{n}")


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, itertools.combinations(range(n), 2), f"K{n}")


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner, "petersen")


def random_connected_graph(n: int, p: float, rng: random.Random) -> Graph:
    """G(n, p) plus a random spanning tree, so the result is always connected."""
    order = list(range(n))
    rng.shuffle(order)
    edges = {(min(order[i], order[j]), max(order[i], order[j]))
             for i in range(1, n) for j in [rng.randrange(i)]}
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() < p:
            edges.add((u, v))
    return Graph.from_edges(n, edges, f"rand{n}")


def random_graph(n: int, p: float, rng: random.Random) -> Graph:
    edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
    return Graph.from_edges(n, edges, f"gnp{n}")


def planted_cubic_graph(n: int, rng: random.Random, max_tries: int = 1000) -> tuple[Graph, list[int]]:
    """Random cubic graph containing a known Hamiltonian cycle.

    A Hamiltonian cycle over a random vertex order is planted, then a random
    perfect matching on the remaining vertex pairs is added.  Returns the
    graph and the planted cycle.
    """
    if n < 4 or n % 2:
        raise ValueError("cubic graphs need an even n >= 4")
    cycle = list(range(n))
    rng.shuffle(cycle)
    cyc_edges = {(min(a, b), max(a, b)) for a, b in zip(cycle, cycle[1:] + cycle[:1])}
    for _ in range(max_tries):
        verts = list(range(n))
        rng.shuffle(verts)
        matching = set()
        ok = True
        while verts:
            u = verts.pop()
            # pick a partner that does not duplicate a cycle edge
            for idx in rng.sample(range(len(verts)), len(verts)):
                v = verts[idx]
                e = (min(u, v), max(u, v))
                if e not in cyc_edges:
                    matching.add(e)
                    verts[idx] = verts[-1]
                    verts.pop()
                    break
            else:
                ok = False
                break
        if ok:
            g = Graph.from_edges(n, cyc_edges | matching, f"cubic{n}")
            return g, cycle
    raise RuntimeError("could not complete the matching")


def random_hamiltonian_graph(n: int, extra: int, rng: random.Random) -> tuple[Graph, list[int]]:
    """Planted Hamiltonian cycle plus ``extra`` random chords."""
    cycle = list(range(n))
    rng.shuffle(cycle)
    edges = {(min(a, b), max(a, b)) for a, b in zip(cycle, cycle[1:] + cycle[:1])}
    target = min(len(edges) + extra, n * (n - 1) // 2)
    while len(edges) < target:
        u, v = rng.sample(range(n), 2)
        edges.add((min(u, v), max(u, v)))
    return Graph.from_edges(n, edges, f"ham{n}"), cycle


def disjoint_union(*graphs: Graph) -> Graph:
    offset = 0
    edges = []
    for g in graphs:
        edges += [(u + offset, v + offset) for u, v in g.edges]
        offset += g.n
    return Graph.from_edges(offset, edges, "union")


__all__ = [
    "cycle_graph", "path_graph", "complete_graph", "petersen_graph",
    "random_connected_graph", "random_graph", "planted_cubic_graph",
    "random_hamiltonian_graph", "disjoint_union",
]
