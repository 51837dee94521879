"""Array-based tours, neighbour lists and nearest-neighbour construction."""

from __future__ import annotations

import random
from typing import Sequence

import numpy as np

from . import _kernels as K
from .reduction import DistanceMatrix, tour_cost


class Tour:
    """A cyclic permutation stored as ``pos`` (rank -> city) and ``rank`` (city -> rank).

    ``cost`` is kept in sync by the move methods and the local-search engines;
    ``dlb`` holds the don't-look bits (False marks a city as critical).
    """

    __slots__ = ("pos", "rank", "cost", "dlb")

    def __init__(self, order: Sequence[int], m: DistanceMatrix | None = None, cost: int | None = None):
        self.pos = np.array(order, dtype=np.int64)
        n = len(self.pos)
        self.rank = np.empty(n, dtype=np.int64)
        self.rank[self.pos] = np.arange(n, dtype=np.int64)
        if cost is None:
            cost = tour_cost(m, self.pos) if m is not None else 0
        self.cost = int(cost)
        self.dlb = np.zeros(n, dtype=np.bool_)

    def __len__(self) -> int:
        return len(self.pos)

    def __repr__(self) -> str:
        return f"Tour(n={len(self.pos)}, cost={self.cost})"

    @property
    def order(self) -> list[int]:
        return self.pos.tolist()

    def copy(self) -> "Tour":
        t = Tour.__new__(Tour)
        t.pos = self.pos.copy()
        t.rank = self.rank.copy()
        t.cost = self.cost
        t.dlb = self.dlb.copy()
        return t

    def next(self, v: int) -> int:
        r = self.rank[v] + 1
        return int(self.pos[r if r < len(self.pos) else 0])

    def prev(self, v: int) -> int:
        return int(self.pos[self.rank[v] - 1])

    def recompute(self, m: DistanceMatrix) -> int:
        self.cost = int(K.tour_cost(self.pos, m.cells))
        return self.cost

    def is_valid(self) -> bool:
        n = len(self.pos)
        if not np.array_equal(np.sort(self.pos), np.arange(n)):
            return False
        return bool(np.array_equal(self.pos[self.rank], np.arange(n)))

    def edges(self) -> list[tuple[int, int]]:
        p = self.pos.tolist()
        return [(p[i - 1], p[i]) for i in range(len(p))]

    def reverse_path(self, u: int, v: int) -> None:
        """Reverse the forward path u..v (cost bookkeeping is the caller's job)."""
        K.reverse_path(self.pos, self.rank, u, v)

    def insert_after(self, city: int, after: int, m: DistanceMatrix) -> bool:
        """Move ``city`` so that it directly follows ``after``.

        Returns False, leaving the tour untouched, when ``city == after`` or
        ``city`` already follows ``after``.
        """
        if city == after or self.next(after) == city:
            return False
        D = m.cells
        p, q = self.prev(city), self.next(city)
        an = self.next(after)
        delta = (D[p, q] + D[after, city] + D[city, an]
                 - D[p, city] - D[city, q] - D[after, an])
        K.move_segment(self.pos, self.rank, city, city, after, an, False)
        self.cost += int(delta)
        return True


def apply_insertion(t: Tour, city: int, after: int, m: DistanceMatrix) -> Tour:
    """Relocate ``city`` after ``after`` in place; raises ValueError if the move is void."""
    if not t.insert_after(city, after, m):
        raise ValueError(f"cannot insert {city} after {after}: precondition violated")
    return t


def nearest_neighbor_tour(m: DistanceMatrix, rng: random.Random, start: int | None = None) -> Tour:
    """Greedy tour from a random start; equal-distance candidates are picked uniformly."""
    n = m.n
    if start is None:
        start = rng.randrange(n)
    cells = m.cells
    big = np.iinfo(cells.dtype).max
    visited = np.zeros(n, dtype=bool)
    visited[start] = True
    order = [start]
    cur = start
    row = np.empty(n, dtype=cells.dtype)
    for _ in range(n - 1):
        np.copyto(row, cells[cur])
        row[visited] = big
        best = row.min()
        cand = np.flatnonzero(row == best)
        nxt = int(cand[rng.randrange(len(cand))]) if len(cand) > 1 else int(cand[0])
        visited[nxt] = True
        order.append(nxt)
        cur = nxt
    return Tour(order, m)


def build_neighbor_lists(m: DistanceMatrix, k: int = 5) -> np.ndarray:
    """n x k table of nearest other cities, by ascending distance then ascending id."""
    if k < 1:
        raise ValueError("k must be positive")
    n = m.n
    k = min(k, n - 1)
    if k <= 0:
        return np.empty((n, 0), dtype=np.int64)
    out = np.empty((n, k), dtype=np.int64)
    ids = np.arange(n, dtype=np.int64)
    # row blocks keep the int64 key matrix small for large n
    for lo in range(0, n, 512):
        hi = min(n, lo + 512)
        key = m.cells[lo:hi].astype(np.int64) * n + ids[None, :]
        key[np.arange(hi - lo), np.arange(lo, hi)] = np.iinfo(np.int64).max
        if k < n - 1:
            part = np.argpartition(key, k, axis=1)[:, :k]
        else:
            part = np.tile(ids, (hi - lo, 1))
        sub = np.take_along_axis(key, part, axis=1)
        idx = np.argsort(sub, axis=1, kind="stable")
        out[lo:hi] = np.take_along_axis(part, idx, axis=1)[:, :k]
    return out


def format_tour(order: Sequence[int], name: str = "tour", comment: str | None = None) -> str:
    lines = [f"NAME : {name}", "TYPE : TOUR"]
    if comment:
        lines.append(f"COMMENT : {comment}")
    lines += [f"DIMENSION : {len(order)}", "TOUR_SECTION"]
    lines += [str(int(v) + 1) for v in order]
    lines += ["-1", "EOF", ""]
    return "\n".join(lines)


def parse_tour(text: str) -> list[int]:
    """Read a TSPLIB tour (1-based ids, TOUR_SECTION terminated by -1) or a bare id list."""
    ids: list[int] = []
    in_section = "TOUR_SECTION" not in text.upper()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if not in_section:
            if line.upper().startswith("TOUR_SECTION"):
                in_section = True
            continue
        if line.upper() == "EOF":
            break
        for tok in line.split():
            try:
                v = int(tok)
            except ValueError:
                raise ValueError(f"line {lineno}: bad tour entry {tok!r}") from None
            if v == -1:
                return ids
            ids.append(v - 1)
    return ids
