"""Tree decompositions from a greedy min-fill elimination ordering."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from itertools import combinations

from .graph import Graph


@dataclass
class TreeDecomposition:
    bags: list[frozenset[int]]
    parent: list[int]  # parent bag index, -1 for roots

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    @property
    def tree_edges(self) -> list[tuple[int, int]]:
        return [(p, i) for i, p in enumerate(self.parent) if p >= 0]

    def children(self) -> list[list[int]]:
        ch: list[list[int]] = [[] for _ in self.bags]
        for i, p in enumerate(self.parent):
            if p >= 0:
                ch[p].append(i)
        return ch

    def roots(self) -> list[int]:
        return [i for i, p in enumerate(self.parent) if p < 0]

    def violations(self, g: Graph) -> list[str]:
        """Describe every broken decomposition property (empty list when valid)."""
        problems = []
        if len(self.roots()) != 1:
            problems.append(f"expected one root, found {len(self.roots())}")
        covered = set().union(*self.bags) if self.bags else set()
        missing = set(range(g.n)) - covered
        if missing:
            problems.append(f"vertices in no bag: {sorted(missing)[:10]}")
        holders: dict[int, list[int]] = {}
        for i, bag in enumerate(self.bags):
            for v in bag:
                holders.setdefault(v, []).append(i)
        for u, v in g.edges:
            if not any(v in self.bags[i] for i in holders.get(u, ())):
                problems.append(f"edge ({u}, {v}) in no bag")
        # coherence: bags holding v must be connected in the tree
        for v, idx in holders.items():
            idx_set = set(idx)
            tops = [i for i in idx if self.parent[i] not in idx_set]
            if len(tops) != 1:
                problems.append(f"bags containing {v} are not connected")
        return problems

    def is_valid(self, g: Graph) -> bool:
        return not self.violations(g)

    def to_pace(self, n: int) -> str:
        lines = [f"s td {len(self.bags)} {self.width + 1} {n}"]
        for i, bag in enumerate(self.bags, start=1):
            lines.append(" ".join(["b", str(i)] + [str(v + 1) for v in sorted(bag)]))
        for p, c in self.tree_edges:
            lines.append(f"{p + 1} {c + 1}")
        return "\n".join(lines) + "\n"


class WidthCapExceeded(Exception):
    def __init__(self, width: int):
        super().__init__(f"decomposition width exceeds cap (reached {width})")
        self.width = width


def min_fill_ordering(g: Graph, width_cap: int | None = None) -> tuple[list[int], list[frozenset[int]]]:
    """Greedy elimination: repeatedly remove the vertex needing fewest fill edges.

    Ties go to the smallest vertex id.  Returns the ordering and, for each
    eliminated vertex, its elimination clique (the vertex plus its remaining
    neighbours).  Raises WidthCapExceeded as soon as a clique exceeds the cap.
    """
    adj = [set(a) for a in g.adjacency]
    alive = [True] * g.n

    def fill(v: int) -> int:
        nb = adj[v]
        return sum(1 for a, b in combinations(nb, 2) if b not in adj[a])

    current = [fill(v) for v in range(g.n)]
    heap = [(f, v) for v, f in enumerate(current)]
    heapq.heapify(heap)
    order: list[int] = []
    cliques: list[frozenset[int]] = []
    while heap:
        f, v = heapq.heappop(heap)
        if not alive[v] or f != current[v]:
            continue
        nb = adj[v]
        if width_cap is not None and len(nb) > width_cap:
            raise WidthCapExceeded(len(nb))
        order.append(v)
        cliques.append(frozenset(nb | {v}))
        alive[v] = False
        for a, b in combinations(nb, 2):
            if b not in adj[a]:
                adj[a].add(b)
                adj[b].add(a)
        for u in nb:
            adj[u].discard(v)
        adj[v] = set()
        affected = set(nb)
        for u in nb:
            affected |= adj[u]
        for u in affected:
            if alive[u]:
                fu = fill(u)
                if fu != current[u]:
                    current[u] = fu
                    heapq.heappush(heap, (fu, u))
    return order, cliques


def min_fill_decomposition(g: Graph, width_cap: int | None = None) -> TreeDecomposition:
    """Tree decomposition built from the min-fill elimination ordering.

    Bag i is the elimination clique of the i-th eliminated vertex; its parent is
    the bag of the earliest-eliminated vertex among its other members.  With a
    ``width_cap``, WidthCapExceeded is raised instead of building a wider one.
    """
    order, cliques = min_fill_ordering(g, width_cap)
    step = {v: i for i, v in enumerate(order)}
    parent = []
    for i, v in enumerate(order):
        later = [step[u] for u in cliques[i] if u != v]
        parent.append(min(later) if later else -1)
    # components of a disconnected graph give several roots; chain them
    roots = [i for i, p in enumerate(parent) if p < 0]
    for r in roots[:-1]:
        parent[r] = roots[-1]
    return TreeDecomposition(list(cliques), parent)
