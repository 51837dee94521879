"""Undirected simple graphs, HCP file I/O and basic graph utilities.

Vertex ids are 0-based internally; the TSPLIB HCP format on disk is 1-based.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

UNREACHABLE = -1  # bfs_distances marker for vertices in another component


class HCPParseError(ValueError):
    """Raised for malformed HCP input; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[tuple[int, int]]
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)
    name: str = field(default="", compare=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], name: str = "") -> "Graph":
        if n < 1:
            raise ValueError("graph needs at least one vertex")
        canon = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) outside 0..{n - 1}")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            canon.add((u, v) if u < v else (v, u))
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in canon:
            adj[u].append(v)
            adj[v].append(u)
        adjacency = tuple(tuple(sorted(a)) for a in adj)
        return cls(n, frozenset(canon), adjacency, name)

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self.edges

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbor_sets(self) -> list[set[int]]:
        return [set(a) for a in self.adjacency]


_KEY = re.compile(r"^\s*([A-Za-z_]+)\s*:?\s*(.*?)\s*$")


def parse_hcp(text: str) -> Graph:
    """Parse a TSPLIB HCP edge-list instance.

    Duplicate edge listings collapse to a single edge.  Errors name the line.
    """
    name = ""
    n = None
    edges: list[tuple[int, int]] = []
    in_edges = False
    terminated = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if in_edges:
            if line == "-1":
                in_edges = False
                terminated = True
                continue
            if line.upper() == "EOF":
                in_edges = False
                continue
            parts = line.split()
            if len(parts) != 2:
                raise HCPParseError(f"expected 'u v' edge pair, got {line!r}", lineno)
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise HCPParseError(f"non-integer vertex id in {line!r}", lineno) from None
            for x in (u, v):
                if not 1 <= x <= n:
                    raise HCPParseError(f"vertex id {x} outside 1..{n}", lineno)
            if u == v:
                raise HCPParseError(f"self-loop on vertex {u}", lineno)
            edges.append((u - 1, v - 1))
            continue
        mkey = _KEY.match(line)
        if not mkey:
            raise HCPParseError(f"unrecognised line {line!r}", lineno)
        key, value = mkey.group(1).upper(), mkey.group(2)
        if key == "NAME":
            name = value
        elif key == "DIMENSION":
            try:
                n = int(value)
            except ValueError:
                raise HCPParseError(f"bad DIMENSION {value!r}", lineno) from None
            if n < 1:
                raise HCPParseError("DIMENSION must be positive", lineno)
        elif key == "EDGE_DATA_FORMAT":
            if value.upper() != "EDGE_LIST":
                raise HCPParseError(f"unsupported EDGE_DATA_FORMAT {value!r}", lineno)
        elif key == "EDGE_DATA_SECTION":
            if n is None:
                raise HCPParseError("EDGE_DATA_SECTION before DIMENSION", lineno)
            in_edges = True
            if value:
                raise HCPParseError("unexpected data after EDGE_DATA_SECTION", lineno)
        elif key == "EOF":
            break
        elif key in ("TYPE", "COMMENT"):
            pass
        else:
            raise HCPParseError(f"unknown key {key!r}", lineno)
    if n is None:
        raise HCPParseError("missing DIMENSION")
    if in_edges and not terminated and not edges:
        raise HCPParseError("empty EDGE_DATA_SECTION")
    return Graph.from_edges(n, edges, name)


def read_hcp(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        g = parse_hcp(fh.read())
    if not g.name:
        from pathlib import Path

        g = Graph(g.n, g.edges, g.adjacency, Path(path).stem)
    return g


def format_hcp(g: Graph) -> str:
    lines = [
        f"NAME : {g.name or 'graph'}",
        "TYPE : HCP",
        f"DIMENSION : {g.n}",
        "EDGE_DATA_FORMAT : EDGE_LIST",
        "EDGE_DATA_SECTION",
    ]
    lines += [f"{u + 1} {v + 1}" for u, v in sorted(g.edges)]
    lines += ["-1", "EOF", ""]
    return "\n".join(lines)


def bfs_distances(g: Graph, source: int) -> list[int]:
    """Hop distances from ``source``; unreachable vertices get ``UNREACHABLE`` (-1)."""
    if not 0 <= source < g.n:
        raise IndexError(f"source {source} out of range")
    dist = [UNREACHABLE] * g.n
    dist[source] = 0
    queue = deque([source])
    adj = g.adjacency
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for v in adj[u]:
            if dist[v] == UNREACHABLE:
                dist[v] = du
                queue.append(v)
    return dist


def shortest_path(g: Graph, a: int, b: int) -> list[int] | None:
    """One shortest a-b path, or None when b is unreachable.

    Neighbours are expanded in ascending id order, so the result is
    deterministic among equal-length paths.
    """
    if a == b:
        raise ValueError("endpoints must differ")
    parent = [-1] * g.n
    parent[a] = a
    queue = deque([a])
    adj = g.adjacency
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if parent[v] == -1:
                parent[v] = u
                if v == b:
                    path = [b]
                    while path[-1] != a:
                        path.append(parent[path[-1]])
                    path.reverse()
                    return path
                queue.append(v)
    return None


def is_connected(g: Graph) -> bool:
    return UNREACHABLE not in bfs_distances(g, 0)


def verify_hc(g: Graph, order: Sequence[int]) -> bool:
    """True iff ``order`` is a permutation of V whose cyclic consecutive pairs are edges."""
    n = g.n
    if n < 3 or len(order) != n or sorted(order) != list(range(n)):
        return False
    edges = g.edges
    prev = order[-1]
    for v in order:
        if ((prev, v) if prev < v else (v, prev)) not in edges:
            return False
        prev = v
    return True


def dirac_check(g: Graph) -> bool:
    """Dirac's degree condition (min degree >= n/2); certifies Hamiltonicity for n > 3."""
    if g.n <= 3:
        return False
    return 2 * min(len(a) for a in g.adjacency) >= g.n


def ore_check(g: Graph) -> bool:
    """Ore's condition: deg(a) + deg(b) >= n for all non-adjacent pairs (n > 3)."""
    n = g.n
    if n <= 3:
        return False
    deg = [len(a) for a in g.adjacency]
    nbrs = g.neighbor_sets()
    for a in range(n):
        for b in range(a + 1, n):
            if b not in nbrs[a] and deg[a] + deg[b] < n:
                return False
    return True


def articulation_points(g: Graph) -> list[int]:
    """Cut vertices (iterative Tarjan).  A graph with one cannot be Hamiltonian."""
    n = g.n
    disc = [-1] * n
    low = [0] * n
    cut = set()
    timer = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = timer
        timer += 1
        root_children = 0
        stack = [(root, -1, iter(g.adjacency[root]))]
        while stack:
            u, parent, it = stack[-1]
            advanced = False
            for v in it:
                if disc[v] == -1:
                    disc[v] = low[v] = timer
                    timer += 1
                    if u == root:
                        root_children += 1
                    stack.append((v, u, iter(g.adjacency[v])))
                    advanced = True
                    break
                if v != parent:
                    low[u] = min(low[u], disc[v])
            if advanced:
                continue
            stack.pop()
            if stack:
                p = stack[-1][0]
                low[p] = min(low[p], low[u])
                if p != root and low[u] >= disc[p]:
                    cut.add(p)
        if root_children > 1:
            cut.add(root)
    return sorted(cut)
