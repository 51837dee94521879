"""Sparsified working copy of the TC matrix.

The working matrix keeps the value 1 only on a subset of the real edges; the
rest of the edges are suppressed to |V| so the search is steered towards the
edges that are still "live".  Augmentation re-activates edges along shortest
paths in the original graph, and a reset rebuilds the state once every edge
has come back.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, shortest_path
from .local_search import lk_improve
from .reduction import DistanceMatrix
from .tour import Tour


@dataclass
class SparseState:
    working: DistanceMatrix
    ones_count: int
    baseline_ones: int
    suppressed_value: int
    last_tour: Tour | None = None
    changed: set[int] = field(default_factory=set)  # cities whose matrix row changed last step
    resets: int = 0


def _tour_pairs(t: Tour) -> tuple[np.ndarray, np.ndarray]:
    return t.pos, np.roll(t.pos, -1)


def _activate_path(w: DistanceMatrix, g: Graph, a: int, b: int, touched: set[int],
                   widen: bool = False) -> int:
    """Write 1 along a shortest a-b path of ``g``; returns how many cells became 1.

    With ``widen``, a path that is already fully active instead re-activates
    the edges of ``g`` around it, growing the hop radius until at least one new
    cell becomes 1 (or the whole component is active).
    """
    path = shortest_path(g, a, b)
    if path is None:
        raise ValueError(f"no path between {a} and {b}; graph must be connected")
    added = _activate(w, zip(path, path[1:]), touched)
    if not widen:
        return added
    ring = set(path)
    seen = set(path)
    while not added and ring:
        added = _activate(w, [(u, v) for u in ring for v in g.adjacency[u]], touched)
        ring = {v for u in ring for v in g.adjacency[u]} - seen
        seen |= ring
    return added


def _activate(w: DistanceMatrix, pairs, touched: set[int]) -> int:
    added = 0
    cells = w.cells
    for u, v in pairs:
        if cells[u, v] != 1:
            w.set(u, v, 1)
            touched.update((u, v))
            added += 1
    return added


def initial_sparsification(g: Graph, base: DistanceMatrix, leader_pocket: Tour,
                           nl: np.ndarray, rng: random.Random,
                           lk_budget: int | None = None) -> SparseState:
    """Build the working matrix around an LK-improved copy of the leader's pocket.

    Every 1-cell that is not an edge of that tour T is suppressed.  Then, one
    randomly chosen conflicting edge of T at a time, the shortest path between
    its endpoints in ``g`` is set to 1 and the conflicting pair itself is
    suppressed, until no conflicting edge is left unresolved.
    """
    n = base.n
    t = leader_pocket.copy()
    t.recompute(base)
    t.dlb[:] = False
    lk_improve(t, base, nl, lk_budget)
    w = base.copy()
    cells = w.cells
    cells[cells == 1] = n
    a, b = _tour_pairs(t)
    real = base.cells[a, b] == 1
    cells[a[real], b[real]] = 1
    cells[b[real], a[real]] = 1
    conflicts = [(int(x), int(y)) for x, y, r in zip(a, b, real) if not r]
    touched: set[int] = set()
    while conflicts:
        x, y = conflicts.pop(rng.randrange(len(conflicts)))
        _activate_path(w, g, x, y, touched)
        w.set(x, y, n)
    state = SparseState(w, w.count_ones(), g.m, n, last_tour=t)
    state.changed = set(range(n))
    return state


def augment(state: SparseState, g: Graph, leader_pocket: Tour, nl: np.ndarray,
            lk_budget: int | None = None) -> SparseState:
    """Run LK on the leader's pocket against the working matrix and repair its gaps.

    For every edge of the resulting tour T'' whose working cost exceeds 1, all
    edges on a shortest path of ``g`` between its endpoints are set to 1.  When
    that path is already active, the edges around it are restored instead so
    the search cannot stall on a fixed matrix.  Cells are only ever lowered
    here; T'' is kept on ``state.last_tour``.
    """
    w = state.working
    t = leader_pocket.copy()
    t.recompute(w)
    lk_improve(t, w, nl, lk_budget)
    touched: set[int] = set()
    added = 0
    a, b = _tour_pairs(t)
    gaps = np.flatnonzero(w.cells[a, b] > 1)
    for i in gaps.tolist():
        added += _activate_path(w, g, int(a[i]), int(b[i]), touched, widen=True)
    state.ones_count += added
    if added:
        t.recompute(w)
    state.last_tour = t
    state.changed = touched
    return state


def maybe_reset(state: SparseState, g: Graph, base: DistanceMatrix, leader_pocket: Tour,
                nl: np.ndarray, rng: random.Random, lk_budget: int | None = None) -> tuple[SparseState, bool]:
    """Rebuild from ``base`` once every edge of ``g`` is back to 1.

    Returns the (possibly new) state and whether the reset fired.
    """
    if state.ones_count < state.baseline_ones:
        return state, False
    fresh = initial_sparsification(g, base, leader_pocket, nl, rng, lk_budget)
    fresh.resets = state.resets + 1
    return fresh, True
