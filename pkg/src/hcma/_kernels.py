"""Compiled inner loops for tour moves and the two local-search engines.

All functions work on the raw arrays of a tour: ``pos`` (rank -> city),
``rank`` (city -> rank) and ``dlb`` (don't-look bits), plus the dense distance
matrix ``D`` and the neighbour table ``NL`` (n x k).  They return the cost
reduction achieved; callers keep the cached tour cost in sync.
"""

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _next(pos, rank, v):
    r = rank[v] + 1
    if r == pos.shape[0]:
        r = 0
    return pos[r]


@njit(cache=True, inline="always")
def _prev(pos, rank, v):
    r = rank[v] - 1
    if r < 0:
        r = pos.shape[0] - 1
    return pos[r]


@njit(cache=True)
def path_len(pos, rank, u, v):
    n = pos.shape[0]
    return (rank[v] - rank[u]) % n + 1


@njit(cache=True)
def reverse_path(pos, rank, u, v):
    """Reverse the forward path u..v, or its complement when that is shorter."""
    n = pos.shape[0]
    i = rank[u]
    j = rank[v]
    inner = (j - i) % n + 1
    if 2 * inner > n:
        i, j = (j + 1) % n, (i - 1) % n
        inner = n - inner
    for _ in range(inner // 2):
        a = pos[i]
        b = pos[j]
        pos[i] = b
        rank[b] = i
        pos[j] = a
        rank[a] = j
        i += 1
        if i == n:
            i = 0
        j -= 1
        if j < 0:
            j = n - 1


@njit(cache=True)
def swap_adjacent(pos, rank, x, y, z):
    """Exchange adjacent forward paths x..y and Next(y)..z."""
    n = pos.shape[0]
    rs = rank[x]
    length = (rank[z] - rs) % n + 1
    l1 = (rank[y] - rs) % n + 1
    buf = np.empty(length, dtype=pos.dtype)
    r = rs
    for s in range(length):
        buf[s] = pos[r]
        r += 1
        if r == n:
            r = 0
    r = rs
    for s in range(length):
        src = s + l1
        if src >= length:
            src -= length
        c = buf[src]
        pos[r] = c
        rank[c] = r
        r += 1
        if r == n:
            r = 0


@njit(cache=True)
def tour_cost(pos, D):
    n = pos.shape[0]
    total = 0
    prev = pos[n - 1]
    for r in range(n):
        c = pos[r]
        total += D[prev, c]
        prev = c
    return total


@njit(cache=True)
def move_segment(pos, rank, s1, s2, c, d, reverse):
    """Relocate forward segment s1..s2 between c and d = Next(c)."""
    q = _next(pos, rank, s2)
    p = _prev(pos, rank, s1)
    # the cycle reads S, q..c, d..p: swap S with the shorter neighbour block
    if path_len(pos, rank, q, c) <= path_len(pos, rank, d, p):
        swap_adjacent(pos, rank, s1, s2, c)
    else:
        swap_adjacent(pos, rank, d, p, s2)
    if reverse and s1 != s2:
        reverse_path(pos, rank, s1, s2)


# --- work queue over critical cities -----------------------------------------


@njit(cache=True)
def _push(queue, inq, head_tail, c):
    if not inq[c]:
        n = queue.shape[0]
        queue[head_tail[1]] = c
        head_tail[1] = (head_tail[1] + 1) % n
        head_tail[2] += 1
        inq[c] = True


@njit(cache=True)
def _pop(queue, inq, head_tail):
    n = queue.shape[0]
    c = queue[head_tail[0]]
    head_tail[0] = (head_tail[0] + 1) % n
    head_tail[2] -= 1
    inq[c] = False
    return c


@njit(cache=True)
def _wake(c, dlb, queue, inq, head_tail, touched):
    dlb[c] = False
    touched[c] = True
    _push(queue, inq, head_tail, c)


# --- RAI ---------------------------------------------------------------------


@njit(cache=True)
def rai_move(pos, rank, i, j, m):
    """i A B C -> i B A C with A = Next(i)..Prev(j), B = j..m, C = Next(m)..Prev(i)."""
    n = pos.shape[0]
    a = _next(pos, rank, i)
    b = _prev(pos, rank, j)
    nn = _next(pos, rank, m)
    la = path_len(pos, rank, a, b)
    lb = path_len(pos, rank, j, m)
    lc1 = n - la - lb
    if la + lb <= lb + lc1 and la + lb <= lc1 + la:
        swap_adjacent(pos, rank, a, b, m)
    elif lb + lc1 <= lc1 + la:
        swap_adjacent(pos, rank, j, m, i)
    else:
        swap_adjacent(pos, rank, nn, i, b)


@njit(cache=True)
def rai_kernel(pos, rank, dlb, D, NL, start, touched):
    """Recursive Arc Insertion driven by the critical cities listed in ``start``."""
    n = pos.shape[0]
    k = NL.shape[1]
    queue = np.empty(n, dtype=np.int64)
    inq = np.zeros(n, dtype=np.bool_)
    ht = np.zeros(3, dtype=np.int64)
    for s in range(start.shape[0]):
        if not dlb[start[s]]:
            _push(queue, inq, ht, start[s])
    gain_total = 0
    while ht[2] > 0:
        i = _pop(queue, inq, ht)
        if dlb[i]:
            continue
        improved = False
        for jj in range(k):
            j = NL[i, jj]
            a = _next(pos, rank, i)
            if j == a:
                continue
            b = _prev(pos, rank, j)
            d1 = D[i, a] + D[b, j] - D[i, j]
            if d1 <= 0:
                continue
            m = j
            r = rank[j]
            while m != i:
                r += 1
                if r == n:
                    r = 0
                nc = pos[r]
                d2 = D[m, a] + D[b, nc] - D[m, nc]
                if d2 < d1:
                    rai_move(pos, rank, i, j, m)
                    gain_total += d1 - d2
                    _wake(i, dlb, queue, inq, ht, touched)
                    _wake(a, dlb, queue, inq, ht, touched)
                    _wake(b, dlb, queue, inq, ht, touched)
                    _wake(j, dlb, queue, inq, ht, touched)
                    _wake(m, dlb, queue, inq, ht, touched)
                    _wake(nc, dlb, queue, inq, ht, touched)
                    improved = True
                    break
                m = nc
            if improved:
                break
        if not improved:
            dlb[i] = True
    return gain_total


# --- LK-style engine -----------------------------------------------------------


@njit(cache=True)
def _undo_two_opt(pos, rank, t1, t2, t4):
    if _next(pos, rank, t1) == t4:
        reverse_path(pos, rank, t4, t2)
    else:
        reverse_path(pos, rank, t2, t4)


@njit(cache=True)
def _same_edge(a, b, c, d):
    return (a == c and b == d) or (a == d and b == c)


@njit(cache=True)
def _chain_tabu(t1, t2s, t3s, t4s, d, t2, t3, t4):
    """LK exchange rules: never add a removed edge nor remove an added one."""
    if _same_edge(t2, t3, t1, t2s[0]):
        return True
    for lv in range(d):
        # removed at level lv: (t3, t4); added: (t2, t3)
        if _same_edge(t2, t3, t3s[lv], t4s[lv]):
            return True
        if _same_edge(t3, t4, t2s[lv], t3s[lv]):
            return True
    return False


@njit(cache=True)
def lk_chain(pos, rank, D, NL, t1, t2, max_depth, breadth, t2s, t3s, t4s, gains, cidx, tries):
    """Depth-first chain of 2-opt moves starting by removing tour edge (t1, t2).

    Moves are applied tentatively and undone on backtrack.  Returns
    (gain, depth) of the first strictly improving closure, or (0, -1).
    """
    k = NL.shape[1]
    d = 0
    t2s[0] = t2
    gains[0] = D[t1, t2]
    cidx[0] = 0
    tries[0] = 0
    while True:
        t2 = t2s[d]
        forward = _next(pos, rank, t1) == t2
        descended = False
        while cidx[d] < k and tries[d] < breadth[d]:
            t3 = NL[t2, cidx[d]]
            cidx[d] += 1
            g1 = gains[d] - D[t2, t3]
            if g1 <= 0:
                cidx[d] = k
                break
            if t3 == t1:
                continue
            if forward:
                t4 = _prev(pos, rank, t3)
            else:
                t4 = _next(pos, rank, t3)
            if t4 == t2:
                continue
            if _chain_tabu(t1, t2s, t3s, t4s, d, t2, t3, t4):
                continue
            tries[d] += 1
            g2 = g1 + D[t3, t4]
            close = g2 - D[t4, t1]
            if forward:
                reverse_path(pos, rank, t2, t4)
            else:
                reverse_path(pos, rank, t4, t2)
            t3s[d] = t3
            t4s[d] = t4
            if close > 0:
                return close, d
            if d + 1 < max_depth:
                d += 1
                t2s[d] = t4
                gains[d] = g2
                cidx[d] = 0
                tries[d] = 0
                descended = True
                break
            _undo_two_opt(pos, rank, t1, t2, t4)
        if descended:
            continue
        if d == 0:
            return 0, -1
        d -= 1
        _undo_two_opt(pos, rank, t1, t2s[d], t4s[d])


@njit(cache=True)
def or_opt(pos, rank, D, NL, s1, max_len, out):
    """Move a segment of 1..max_len cities starting at s1; touched cities go to ``out``."""
    n = pos.shape[0]
    k = NL.shape[1]
    for length in range(1, max_len + 1):
        if length + 3 > n:
            break
        s2 = pos[(rank[s1] + length - 1) % n]
        p = _prev(pos, rank, s1)
        q = _next(pos, rank, s2)
        remove_gain = D[p, s1] + D[s2, q] - D[p, q]
        if remove_gain <= 0:
            continue
        for side in range(2):
            end = s1 if side == 0 else s2
            other = s2 if side == 0 else s1
            for xi in range(k):
                x = NL[end, xi]
                if (rank[x] - rank[s1]) % n < length:
                    continue
                for variant in range(2):
                    if variant == 0:
                        c = x
                        dd = _next(pos, rank, x)
                    else:
                        c = _prev(pos, rank, x)
                        dd = x
                    if (rank[c] - rank[s1]) % n < length or (rank[dd] - rank[s1]) % n < length:
                        continue
                    if variant == 0:
                        first = end
                        last = other
                    else:
                        first = other
                        last = end
                    add = D[c, first] + D[last, dd] - D[c, dd]
                    if add < remove_gain:
                        move_segment(pos, rank, s1, s2, c, dd, first != s1)
                        out[0] = p
                        out[1] = q
                        out[2] = c
                        out[3] = dd
                        out[4] = s1
                        out[5] = s2
                        return remove_gain - add
    return 0


@njit(cache=True)
def lk_kernel(pos, rank, dlb, D, NL, start, budget, max_depth, breadth, touched):
    """LK-style search: 2-opt chains from both tour neighbours of t1, then Or-opt."""
    n = pos.shape[0]
    queue = np.empty(n, dtype=np.int64)
    inq = np.zeros(n, dtype=np.bool_)
    ht = np.zeros(3, dtype=np.int64)
    for s in range(start.shape[0]):
        if not dlb[start[s]]:
            _push(queue, inq, ht, start[s])
    t2s = np.empty(max_depth, dtype=np.int64)
    t3s = np.empty(max_depth, dtype=np.int64)
    t4s = np.empty(max_depth, dtype=np.int64)
    gains = np.empty(max_depth, dtype=np.int64)
    cidx = np.empty(max_depth, dtype=np.int64)
    tries = np.empty(max_depth, dtype=np.int64)
    out = np.empty(6, dtype=np.int64)
    gain_total = 0
    applied = 0
    while ht[2] > 0 and applied < budget:
        t1 = _pop(queue, inq, ht)
        if dlb[t1]:
            continue
        gain = 0
        for side in range(2):
            if side == 0:
                t2 = _next(pos, rank, t1)
            else:
                t2 = _prev(pos, rank, t1)
            gain, depth = lk_chain(pos, rank, D, NL, t1, t2, max_depth, breadth,
                                   t2s, t3s, t4s, gains, cidx, tries)
            if gain > 0:
                _wake(t1, dlb, queue, inq, ht, touched)
                for lv in range(depth + 1):
                    _wake(t2s[lv], dlb, queue, inq, ht, touched)
                    _wake(t3s[lv], dlb, queue, inq, ht, touched)
                    _wake(t4s[lv], dlb, queue, inq, ht, touched)
                break
        if gain <= 0:
            gain = or_opt(pos, rank, D, NL, t1, 3, out)
            if gain > 0:
                _wake(t1, dlb, queue, inq, ht, touched)
                for s in range(6):
                    _wake(out[s], dlb, queue, inq, ht, touched)
        if gain > 0:
            gain_total += gain
            applied += 1
        else:
            dlb[t1] = True
    return gain_total
