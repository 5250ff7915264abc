"""Pure-Python twin of the compiled classifier kernels (same functions, same results)."""

from __future__ import annotations

import numpy as np

CONNECTED = 1
BICONNECTED = 2
K4_MINOR = 4
K23_MINOR = 8

K4_REQ = (0, 1, 3, 7)
K4_SYM = (-1, 0, 1, 2)
K23_REQ = (0, 0, 3, 3, 3)
K23_SYM = (-1, 0, -1, 2, 3)


def _check(n):
    if n < 0 or n > 8:
        raise ValueError("vertex count must be between 0 and 8")


def build_adj(mask, n):
    adj = [0] * n
    e = 0
    for i in range(n):
        for j in range(i + 1, n):
            if mask >> e & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            e += 1
    return adj


def reach(adj, allowed, start):
    seen = frontier = start
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= adj[low.bit_length() - 1]
            f ^= low
        nxt &= allowed & ~seen
        seen |= nxt
        frontier = nxt
    return seen


def ncomp(adj, n):
    full = (1 << n) - 1
    rem = full
    c = 0
    while rem:
        rem &= ~reach(adj, full, rem & -rem)
        c += 1
    return c


def biconn(adj, n):
    if n < 2:
        return False
    if n == 2:
        return adj[0] != 0
    full = (1 << n) - 1
    if reach(adj, full, 1) != full:
        return False
    for v in range(n):
        allowed = full & ~(1 << v)
        if reach(adj, allowed, allowed & -allowed) != allowed:
            return False
    return True


def _low(x):
    return (x & -x).bit_length() - 1


def k4_reduce(adj0, n):
    """Series-parallel reduction; a nonempty residue means a K4 minor."""
    adj = list(adj0)
    alive = (1 << n) - 1
    changed = True
    while changed:
        changed = False
        for v in range(n):
            if not alive >> v & 1:
                continue
            d = bin(adj[v]).count("1")
            if d <= 1:
                if d == 1:
                    adj[_low(adj[v])] &= ~(1 << v)
                adj[v] = 0
                alive &= ~(1 << v)
                changed = True
            elif d == 2:
                a = _low(adj[v])
                b = _low(adj[v] & (adj[v] - 1))
                adj[a] = (adj[a] & ~(1 << v)) | (1 << b)
                adj[b] = (adj[b] & ~(1 << v)) | (1 << a)
                adj[v] = 0
                alive &= ~(1 << v)
                changed = True
    return alive != 0


def core_stats(adj0, n):
    adj = list(adj0)
    alive = (1 << n) - 1
    changed = True
    while changed:
        changed = False
        for v in range(n):
            if alive >> v & 1 and bin(adj[v]).count("1") <= 1:
                if adj[v]:
                    adj[_low(adj[v])] &= ~(1 << v)
                adj[v] = 0
                alive &= ~(1 << v)
                changed = True
    degs = [bin(adj[v]).count("1") for v in range(n) if alive >> v & 1]
    return len(degs), sum(1 for d in degs if d >= 3), sum(degs) // 2


def connected_subsets(adj, n):
    sets, nbrs = [], []
    for s in range(1, 1 << n):
        if reach(adj, s, s & -s) == s:
            nb = 0
            f = s
            while f:
                low = f & -f
                nb |= adj[low.bit_length() - 1]
                f ^= low
            sets.append(s)
            nbrs.append(nb & ~s)
    return sets, nbrs


def branch_search(adj, n, req, sym):
    h = len(req)
    if n < h:
        return False
    sets, nbrs = connected_subsets(adj, n)
    chosen = [0] * h
    chosen_nb = [0] * h

    def place(depth, used):
        if depth == h:
            return True
        r0 = req[depth]
        sp = sym[depth]
        floor = (chosen[sp] & -chosen[sp]) if sp >= 0 else 0
        for s, nb in zip(sets, nbrs):
            if s & used or (s & -s) <= floor:
                continue
            r = r0
            ok = True
            while r:
                low = r & -r
                if not chosen_nb[low.bit_length() - 1] & s:
                    ok = False
                    break
                r ^= low
            if not ok:
                continue
            chosen[depth] = s
            chosen_nb[depth] = nb
            if place(depth + 1, used | s):
                return True
        return False

    return place(0, 0)


def components(n, mask):
    _check(n)
    return ncomp(build_adj(mask, n), n)


def biconnected(n, mask):
    _check(n)
    return biconn(build_adj(mask, n), n)


def k4_reduction(n, mask):
    _check(n)
    return k4_reduce(build_adj(mask, n), n)


def k4_branch(n, mask):
    _check(n)
    return branch_search(build_adj(mask, n), n, K4_REQ, K4_SYM)


def k23_branch(n, mask):
    _check(n)
    return branch_search(build_adj(mask, n), n, K23_REQ, K23_SYM)


def classify_range(n, cross_check=False):
    """Same contract as the compiled ``classify_range``."""
    _check(n)
    E = n * (n - 1) // 2
    total = 1 << E
    flags = bytearray(total)
    comps = bytearray(total)
    problems = []
    for m in range(total):
        adj = build_adj(m, n)
        c = ncomp(adj, n)
        comps[m] = c
        f = 0
        if c == 1:
            f |= CONNECTED
        if biconn(adj, n):
            f |= BICONNECTED
        k4 = k23 = False
        if cross_check:
            k4 = k4_reduce(adj, n)
            if k4 != branch_search(adj, n, K4_REQ, K4_SYM) and not any(p[0] == "k4-methods-disagree" for p in problems):
                problems.append(("k4-methods-disagree", m))
        mm = m
        while mm and not (k4 and k23):
            bit = mm & -mm
            mm ^= bit
            sub = flags[m ^ bit]
            if not cross_check and sub & K4_MINOR:
                k4 = True
            if sub & K23_MINOR:
                k23 = True
        if not k4 or not k23:
            nv, nb, ne = core_stats(adj, n)
            if not k4 and not cross_check and nb >= 4:
                k4 = k4_reduce(adj, n)
            if not k23 and nv >= 5 and nb >= 2 and ne >= 6:
                k23 = branch_search(adj, n, K23_REQ, K23_SYM)
        if k4:
            f |= K4_MINOR
        if k23:
            f |= K23_MINOR
        if f & BICONNECTED and k4 and not k23 and not (n == 4 and m == total - 1):
            if not any(p[0] == "k23-structure" for p in problems):
                problems.append(("k23-structure", m))
        flags[m] = f
    return np.frombuffer(bytes(flags), dtype=np.uint8), np.frombuffer(bytes(comps), dtype=np.uint8), problems


def cross_check_masks(n, masks):
    """Run both K4 tests on each mask; return the first disagreeing mask or -1."""
    _check(n)
    for m in masks:
        adj = build_adj(int(m), n)
        if k4_reduce(adj, n) != branch_search(adj, n, K4_REQ, K4_SYM):
            return int(m)
    return -1
