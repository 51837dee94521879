"""HCP -> TSP reductions (standard and transitive-closure distance matrices)."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .graph import UNREACHABLE, Graph, bfs_distances


class DisconnectedGraphError(ValueError):
    pass


class DistanceMatrix:
    """Symmetric n x n integer matrix backed by a C-contiguous numpy array."""

    __slots__ = ("n", "cells")

    def __init__(self, cells: np.ndarray):
        if cells.ndim != 2 or cells.shape[0] != cells.shape[1]:
            raise ValueError("distance matrix must be square")
        self.n = cells.shape[0]
        self.cells = np.ascontiguousarray(cells)

    def __getitem__(self, ab: tuple[int, int]) -> int:
        return int(self.cells[ab])

    def set(self, a: int, b: int, value: int) -> None:
        self.cells[a, b] = value
        self.cells[b, a] = value

    def copy(self) -> "DistanceMatrix":
        return DistanceMatrix(self.cells.copy())

    def ones(self) -> list[tuple[int, int]]:
        """Unordered pairs (a < b) whose value is 1."""
        a, b = np.nonzero(np.triu(self.cells == 1, k=1))
        return list(zip(a.tolist(), b.tolist()))

    def count_ones(self) -> int:
        return int(np.count_nonzero(np.triu(self.cells == 1, k=1)))

    def __eq__(self, other) -> bool:
        return isinstance(other, DistanceMatrix) and np.array_equal(self.cells, other.cells)

    def __repr__(self) -> str:
        return f"DistanceMatrix(n={self.n})"


def _empty(n: int, fill: int, compact: bool) -> np.ndarray:
    dtype = np.uint16 if compact else np.int32
    if compact and n + 1 >= 2 ** 16:
        raise ValueError("compact matrices need n + 1 < 65536")
    cells = np.full((n, n), fill, dtype=dtype)
    np.fill_diagonal(cells, n + 1)
    return cells


def sr_reduce(g: Graph, compact: bool = False) -> DistanceMatrix:
    """Karp reduction: 1 on edges, 2 on non-edges, n + 1 on the diagonal."""
    cells = _empty(g.n, 2, compact)
    for u, v in g.edges:
        cells[u, v] = cells[v, u] = 1
    return DistanceMatrix(cells)


def tc_reduce(g: Graph, compact: bool = False) -> DistanceMatrix:
    """Transitive-closure reduction: each off-diagonal cell is the hop distance in ``g``."""
    n = g.n
    cells = _empty(n, 0, compact)
    for s in range(n):
        dist = bfs_distances(g, s)
        if UNREACHABLE in dist:
            raise DisconnectedGraphError(f"vertex {dist.index(UNREACHABLE)} unreachable from {s}")
        dist[s] = n + 1
        cells[s, :] = dist
    return DistanceMatrix(cells)


def tour_cost(m: DistanceMatrix, order: Sequence[int]) -> int:
    """Sum of matrix entries over consecutive cyclic pairs of ``order``."""
    idx = np.asarray(order, dtype=np.int64)
    return int(m.cells[idx, np.roll(idx, -1)].sum(dtype=np.int64))


def format_tsplib_matrix(m: DistanceMatrix, name: str = "reduced") -> str:
    """TSPLIB EXPLICIT / FULL_MATRIX dump for external TSP solvers."""
    lines = [
        f"NAME : {name}",
        "TYPE : TSP",
        f"DIMENSION : {m.n}",
        "EDGE_WEIGHT_TYPE : EXPLICIT",
        "EDGE_WEIGHT_FORMAT : FULL_MATRIX",
        "EDGE_WEIGHT_SECTION",
    ]
    lines += [" ".join(map(str, row)) for row in m.cells.tolist()]
    lines += ["EOF", ""]
    return "\n".join(lines)
