"""Tour improvement: Recursive Arc Insertion (RAI) and an LK-style engine.

Both engines are driven by don't-look bits: only cities whose bit is False
("critical") are used as starting points.  A city whose search fails gets its
bit set; the endpoints of every changed edge are made critical again.  Every
applied move strictly lowers the tour cost.  The loops themselves live in
:mod:`hcma._kernels`.
"""

from __future__ import annotations

import random

import numpy as np

from . import _kernels as K
from .reduction import DistanceMatrix
from .tour import Tour

LK_DEPTH = 50
LK_BREADTH = (5, 5, 3, 2, 1)


def _critical(t: Tour, rng: random.Random | None) -> np.ndarray:
    crit = np.flatnonzero(~t.dlb)
    if rng is not None and len(crit) > 1:
        crit = crit[np.array(rng.sample(range(len(crit)), len(crit)), dtype=np.int64)]
    return crit.astype(np.int64)


def _breadth_array(breadth, depth: int) -> np.ndarray:
    out = np.ones(depth, dtype=np.int64)
    for d in range(depth):
        out[d] = breadth[min(d, len(breadth) - 1)]
    return out


def rai_improve(t: Tour, m: DistanceMatrix, nl: np.ndarray,
                rng: random.Random | None = None, touched: np.ndarray | None = None) -> Tour:
    """Recursive Arc Insertion, in place; returns ``t``.

    For a critical city i and each j in its neighbour list the partial gain
    d(i,a) + d(b,j) - d(i,j) (a = Next(i), b = Prev(j)) must be positive.  Tour
    edges (m, n) are then scanned forward from (j, Next(j)) up to (Prev(i), i);
    the first with d(m,a) + d(b,n) - d(m,n) below the partial gain triggers the
    exchange of (i,a), (b,j), (m,n) for (i,j), (m,a), (b,n).  Restricting m to
    the path j..Prev(i) is what keeps the result a single cycle.
    """
    n = len(t)
    if n < 5:
        t.dlb[:] = True
        return t
    if touched is None:
        touched = np.zeros(n, dtype=np.bool_)
    gain = K.rai_kernel(t.pos, t.rank, t.dlb, m.cells, nl, _critical(t, rng), touched)
    t.cost -= int(gain)
    return t


def lk_improve(t: Tour, m: DistanceMatrix, nl: np.ndarray, budget: int | None = None,
               max_depth: int = LK_DEPTH, breadth=LK_BREADTH,
               touched: np.ndarray | None = None) -> Tour:
    """LK-style search in place: chained 2-opt moves plus Or-opt, first improvement.

    ``max_depth`` bounds the number of chained 2-opt moves (2 is sequential
    3-opt); ``breadth[d]`` is how many candidates are tried at depth d.
    ``budget`` caps the number of applied moves (default 50 n).
    """
    n = len(t)
    if n < 5:
        t.dlb[:] = True
        return t
    if budget is None:
        budget = 50 * n
    if touched is None:
        touched = np.zeros(n, dtype=np.bool_)
    gain = K.lk_kernel(t.pos, t.rank, t.dlb, m.cells, nl, _critical(t, None), budget,
                       max_depth, _breadth_array(breadth, max_depth), touched)
    t.cost -= int(gain)
    return t


def local_search(t: Tour, m: DistanceMatrix, nl: np.ndarray, rng: random.Random | None = None,
                 lk_budget: int | None = None, lk_depth: int = LK_DEPTH, lk_breadth=LK_BREADTH) -> Tour:
    """RAI then the LK-style engine, both seeded from the cities critical on entry."""
    critical = ~t.dlb
    touched = np.zeros(len(t), dtype=np.bool_)
    rai_improve(t, m, nl, rng, touched)
    t.dlb[critical | touched] = False
    lk_improve(t, m, nl, lk_budget, lk_depth, lk_breadth)
    return t
