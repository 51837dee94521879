"""Hamiltonicity by dynamic programming over a nice tree decomposition.

A partial solution below a node is a set of vertex-disjoint paths covering all
forgotten vertices, with every path endpoint in the current bag.  A DP state
records, per bag vertex, its degree in the path system and, for path
endpoints, the bag vertex at the other end of the path.  Edges are chosen when
their first endpoint is forgotten, so each edge is decided exactly once.

State encoding: a tuple aligned with the sorted bag, entry ``FREE`` (degree 0),
``DONE`` (degree 2) or the partner vertex id (degree 1), followed by a
closed-cycle flag.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations

from .graph import Graph
from .treedecomp import TreeDecomposition

FREE = -1
DONE = -2

LEAF, INTRODUCE, FORGET, JOIN = "leaf", "introduce", "forget", "join"


class DPTimeout(Exception):
    """The deadline passed before the DP finished; says nothing about Hamiltonicity."""


@dataclass
class NiceNode:
    kind: str
    bag: tuple[int, ...]
    vertex: int = -1
    children: tuple[int, ...] = ()


def make_nice(td: TreeDecomposition) -> tuple[list[NiceNode], int]:
    """Convert ``td`` into a nice decomposition rooted at an empty bag.

    Returns the node list (children always precede parents) and the root index.
    """
    nodes: list[NiceNode] = []
    kids = td.children()
    roots = td.roots()
    if len(roots) != 1:
        raise ValueError("decomposition must be a single tree")

    def add(kind, bag, vertex=-1, children=()):
        nodes.append(NiceNode(kind, tuple(sorted(bag)), vertex, tuple(children)))
        return len(nodes) - 1

    def morph(idx: int, src: frozenset, dst: frozenset) -> int:
        cur = set(src)
        for v in sorted(src - dst):
            cur.discard(v)
            idx = add(FORGET, cur, v, (idx,))
        for v in sorted(dst - src):
            cur.add(v)
            idx = add(INTRODUCE, cur, v, (idx,))
        return idx

    built: dict[int, int] = {}
    stack = [(roots[0], False)]
    while stack:
        t, expanded = stack.pop()
        if not expanded:
            stack.append((t, True))
            stack.extend((c, False) for c in kids[t])
            continue
        bag = td.bags[t]
        branches = [morph(built[c], td.bags[c], bag) for c in kids[t]]
        if not branches:
            branches = [morph(add(LEAF, ()), frozenset(), bag)]
        idx = branches[0]
        for other in branches[1:]:
            idx = add(JOIN, bag, -1, (idx, other))
        built[t] = idx
    root = morph(built[roots[0]], td.bags[roots[0]], frozenset())
    return nodes, root


def _add_edge(st: dict, x: int, y: int, closed: bool) -> bool | None:
    """Add edge x-y to the path system in ``st`` (mutated).

    Returns the new closed flag, or None when the edge is infeasible.
    """
    ex, ey = st[x], st[y]
    if closed or ex == DONE or ey == DONE:
        return None
    if ex == FREE and ey == FREE:
        st[x], st[y] = y, x
    elif ex == FREE:
        st[x] = ey
        st[ey] = x
        st[y] = DONE
    elif ey == FREE:
        st[y] = ex
        st[ex] = y
        st[x] = DONE
    elif ex == y:
        # closing a cycle is only allowed once it covers everything in sight
        st[x] = st[y] = DONE
        if any(e != DONE for e in st.values()):
            return None
        return True
    else:
        st[ex], st[ey] = ey, ex
        st[x] = st[y] = DONE
    return False


def _join_states(bag, s1, s2):
    """Combine two partial path systems on the same bag, or None if they conflict."""
    c1, c2 = s1[-1], s2[-1]
    if c1 and c2:
        return None
    if c1 or c2:
        other = s2 if c1 else s1
        if other[-1] or any(e != FREE for e in other[:-1]):
            return None
        return s1 if c1 else s2
    links: dict[int, list[int]] = {}
    deg = {}
    for v, e1, e2 in zip(bag, s1, s2):
        d1 = 0 if e1 == FREE else 2 if e1 == DONE else 1
        d2 = 0 if e2 == FREE else 2 if e2 == DONE else 1
        if d1 + d2 > 2:
            return None
        deg[v] = d1 + d2
        lk = []
        if d1 == 1:
            lk.append(e1)
        if d2 == 1:
            lk.append(e2)
        links[v] = lk
    out = {}
    seen = set()
    for v in bag:
        if deg[v] == 0:
            out[v] = FREE
        elif deg[v] == 2 and not links[v]:
            out[v] = DONE
    for v in bag:
        if v in seen or v in out or len(links[v]) != 1:
            continue
        prev, cur = v, links[v][0]
        seen.add(v)
        while len(links[cur]) == 2:
            seen.add(cur)
            a, b = links[cur]
            nxt = b if a == prev else a
            prev, cur = cur, nxt
        seen.add(cur)
        out[v], out[cur] = cur, v
    for v in bag:
        if v not in out and v in seen:
            out[v] = DONE
    cycle_vertices = [v for v in bag if v not in out]
    closed = False
    if cycle_vertices:
        # every remaining vertex sits on a cycle of path segments
        comp = _count_cycles(cycle_vertices, links)
        if comp != 1 or any(deg[v] != 2 for v in bag):
            return None
        closed = True
        for v in cycle_vertices:
            out[v] = DONE
    return tuple(out[v] for v in bag) + (closed,)


def _count_cycles(vertices, links) -> int:
    left = set(vertices)
    count = 0
    while left:
        start = left.pop()
        count += 1
        stack = [start]
        while stack:
            u = stack.pop()
            for w in links[u]:
                if w in left:
                    left.discard(w)
                    stack.append(w)
    return count


def _edges_to_cycle(n: int, edges: list[tuple[int, int]]) -> list[int]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    order = [0]
    prev, cur = -1, 0
    for _ in range(n - 1):
        a, b = adj[cur]
        nxt = b if a == prev else a
        order.append(nxt)
        prev, cur = cur, nxt
    return order


def dp_hamiltonian(g: Graph, td: TreeDecomposition, deadline: float | None = None) -> list[int] | None:
    """Find a Hamiltonian cycle of ``g`` using ``td``, or prove there is none.

    Returns a vertex order, or None when ``g`` is not Hamiltonian.  ``deadline``
    is an absolute ``time.monotonic()`` value; passing it raises DPTimeout.
    """
    n = g.n
    if n < 3:
        return None
    if any(len(a) < 2 for a in g.adjacency):
        return None
    nodes, root = make_nice(td)
    nbrs = g.neighbor_sets()
    tables: list[dict | None] = [None] * len(nodes)
    back: list[dict | None] = [None] * len(nodes)
    ops = 0
    for idx, node in enumerate(nodes):
        if deadline is not None and time.monotonic() > deadline:
            raise DPTimeout()
        table: dict = {}
        bp: dict = {}
        if node.kind == LEAF:
            table[(False,)] = True
            bp[(False,)] = None
        elif node.kind == INTRODUCE:
            at = node.bag.index(node.vertex)
            for s in tables[node.children[0]]:
                ns = s[:at] + (FREE,) + s[at:]
                table[ns] = True
                bp[ns] = s
        elif node.kind == FORGET:
            child = nodes[node.children[0]]
            v = node.vertex
            cbag = child.bag
            at = cbag.index(v)
            cand = [u for u in cbag if u != v and u in nbrs[v]]
            for s in tables[node.children[0]]:
                ops += 1
                if deadline is not None and ops % 4096 == 0 and time.monotonic() > deadline:
                    raise DPTimeout()
                ev = s[at]
                need = 0 if ev == DONE else 2 if ev == FREE else 1
                usable = [u for u in cand if s[cbag.index(u)] != DONE]
                for chosen in combinations(usable, need):
                    st = dict(zip(cbag, s[:-1]))
                    closed = s[-1]
                    ok = True
                    for u in chosen:
                        closed = _add_edge(st, v, u, closed)
                        if closed is None:
                            ok = False
                            break
                    if not ok or st[v] != DONE:
                        continue
                    ns = tuple(st[u] for u in node.bag) + (closed,)
                    if ns not in table:
                        table[ns] = True
                        bp[ns] = (s, tuple((v, u) for u in chosen))
        else:
            left, right = node.children
            lt, rt = tables[left], tables[right]
            for s1 in lt:
                for s2 in rt:
                    ops += 1
                    if deadline is not None and ops % 4096 == 0 and time.monotonic() > deadline:
                        raise DPTimeout()
                    ns = _join_states(node.bag, s1, s2)
                    if ns is not None and ns not in table:
                        table[ns] = True
                        bp[ns] = (s1, s2)
        tables[idx] = table
        back[idx] = bp
        for c in node.children:
            tables[c] = None
    final = (True,)
    if final not in tables[root]:
        return None
    edges: list[tuple[int, int]] = []
    stack = [(root, final)]
    while stack:
        idx, s = stack.pop()
        node = nodes[idx]
        ref = back[idx][s]
        if node.kind == INTRODUCE:
            stack.append((node.children[0], ref))
        elif node.kind == FORGET:
            cs, chosen = ref
            edges.extend(chosen)
            stack.append((node.children[0], cs))
        elif node.kind == JOIN:
            stack.append((node.children[0], ref[0]))
            stack.append((node.children[1], ref[1]))
    return _edges_to_cycle(n, edges)
