# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the exhaustive graph classifier.

Graphs on n <= 8 vertices are edge bitmasks over the pairs (i, j), i < j,
in lexicographic order.  Adjacency is an array of vertex bitmasks.
"""

import numpy as np

cdef extern from *:
    int __builtin_popcount(unsigned int) nogil
    int __builtin_ctz(unsigned int) nogil

cdef enum:
    MAXN = 8
    MAXSUB = 256

# flag bits, shared with the pure-Python backend
CONNECTED = 1
BICONNECTED = 2
K4_MINOR = 4
K23_MINOR = 8

cdef unsigned int K4_REQ[4]
cdef int K4_SYM[4]
cdef unsigned int K23_REQ[5]
cdef int K23_SYM[5]
K4_REQ[:] = [0, 1, 3, 7]
K4_SYM[:] = [-1, 0, 1, 2]
K23_REQ[:] = [0, 0, 3, 3, 3]
K23_SYM[:] = [-1, 0, -1, 2, 3]


cdef inline int popc(unsigned int x) nogil:
    return __builtin_popcount(x)


cdef inline int ctz(unsigned int x) nogil:
    return __builtin_ctz(x)


cdef void build_adj(unsigned long long mask, int n, unsigned int* adj) nogil:
    cdef int i, j, e = 0
    for i in range(n):
        adj[i] = 0
    for i in range(n):
        for j in range(i + 1, n):
            if (mask >> e) & 1:
                adj[i] |= 1u << j
                adj[j] |= 1u << i
            e += 1


cdef unsigned int reach(const unsigned int* adj, unsigned int allowed, unsigned int start) nogil:
    cdef unsigned int seen = start, frontier = start, nxt, f
    cdef int v
    while frontier:
        nxt = 0
        f = frontier
        while f:
            v = ctz(f)
            f &= f - 1
            nxt |= adj[v]
        nxt &= allowed & ~seen
        seen |= nxt
        frontier = nxt
    return seen


cdef int ncomp(const unsigned int* adj, int n) nogil:
    cdef unsigned int full = (1u << n) - 1, rem = full, s
    cdef int c = 0
    while rem:
        s = reach(adj, full, rem & (~rem + 1))
        rem &= ~s
        c += 1
    return c


cdef bint biconn(const unsigned int* adj, int n) nogil:
    cdef unsigned int full = (1u << n) - 1, allowed
    cdef int v
    if n < 2:
        return 0
    if n == 2:
        return adj[0] != 0
    if reach(adj, full, 1) != full:
        return 0
    for v in range(n):
        allowed = full & ~(1u << v)
        if reach(adj, allowed, allowed & (~allowed + 1)) != allowed:
            return 0
    return 1


cdef bint k4_reduce(const unsigned int* adj0, int n) nogil:
    """Series-parallel reduction; a nonempty residue means a K4 minor."""
    cdef unsigned int adj[MAXN]
    cdef unsigned int alive = (1u << n) - 1
    cdef int v, d, a, b
    cdef bint changed = 1
    for v in range(n):
        adj[v] = adj0[v]
    while changed:
        changed = 0
        for v in range(n):
            if not (alive >> v) & 1:
                continue
            d = popc(adj[v])
            if d <= 1:
                if d == 1:
                    a = ctz(adj[v])
                    adj[a] &= ~(1u << v)
                adj[v] = 0
                alive &= ~(1u << v)
                changed = 1
            elif d == 2:
                a = ctz(adj[v])
                b = ctz(adj[v] & (adj[v] - 1))
                adj[a] &= ~(1u << v)
                adj[b] &= ~(1u << v)
                adj[a] |= 1u << b
                adj[b] |= 1u << a
                adj[v] = 0
                alive &= ~(1u << v)
                changed = 1
    return alive != 0


cdef void core_stats(const unsigned int* adj0, int n, int* nverts, int* nbranch, int* nedges) nogil:
    """Size of the 2-core, its vertices of degree >= 3, and its edge count."""
    cdef unsigned int adj[MAXN]
    cdef unsigned int alive = (1u << n) - 1
    cdef int v, d, a, twice = 0
    cdef bint changed = 1
    for v in range(n):
        adj[v] = adj0[v]
    while changed:
        changed = 0
        for v in range(n):
            if (alive >> v) & 1 and popc(adj[v]) <= 1:
                if adj[v]:
                    a = ctz(adj[v])
                    adj[a] &= ~(1u << v)
                adj[v] = 0
                alive &= ~(1u << v)
                changed = 1
    nverts[0] = popc(alive)
    nbranch[0] = 0
    for v in range(n):
        if (alive >> v) & 1:
            d = popc(adj[v])
            twice += d
            if d >= 3:
                nbranch[0] += 1
    nedges[0] = twice // 2


cdef int connected_subsets(const unsigned int* adj, int n, unsigned int* sets, unsigned int* nbrs) nogil:
    cdef unsigned int s, nb, f
    cdef int cnt = 0, v
    for s in range(1, 1u << n):
        if reach(adj, s, s & (~s + 1)) == s:
            nb = 0
            f = s
            while f:
                v = ctz(f)
                f &= f - 1
                nb |= adj[v]
            sets[cnt] = s
            nbrs[cnt] = nb & ~s
            cnt += 1
    return cnt


cdef bint place(int depth, int h, const unsigned int* req, const int* sym,
                unsigned int* chosen, unsigned int* chosen_nb, unsigned int used,
                const unsigned int* sets, const unsigned int* nbrs, int cnt) nogil:
    cdef int idx, j
    cdef unsigned int s, r, low
    cdef bint ok
    if depth == h:
        return 1
    for idx in range(cnt):
        s = sets[idx]
        if s & used:
            continue
        if sym[depth] >= 0:
            low = chosen[sym[depth]]
            if (s & (~s + 1)) <= (low & (~low + 1)):
                continue
        ok = 1
        r = req[depth]
        while r:
            j = ctz(r)
            r &= r - 1
            if not (chosen_nb[j] & s):
                ok = 0
                break
        if not ok:
            continue
        chosen[depth] = s
        chosen_nb[depth] = nbrs[idx]
        if place(depth + 1, h, req, sym, chosen, chosen_nb, used | s, sets, nbrs, cnt):
            return 1
    return 0


cdef bint branch_search(const unsigned int* adj, int n, int h, const unsigned int* req, const int* sym) nogil:
    cdef unsigned int sets[MAXSUB]
    cdef unsigned int nbrs[MAXSUB]
    cdef unsigned int chosen[8]
    cdef unsigned int chosen_nb[8]
    cdef int cnt
    if n < h:
        return 0
    cnt = connected_subsets(adj, n, sets, nbrs)
    return place(0, h, req, sym, chosen, chosen_nb, 0, sets, nbrs, cnt)


cdef inline bint k4_branch_c(const unsigned int* adj, int n) nogil:
    return branch_search(adj, n, 4, K4_REQ, K4_SYM)


cdef inline bint k23_branch_c(const unsigned int* adj, int n) nogil:
    return branch_search(adj, n, 5, K23_REQ, K23_SYM)


# -- single-graph entry points ---------------------------------------------------------

def _check(int n):
    if n < 0 or n > MAXN:
        raise ValueError("vertex count must be between 0 and 8")


def components(int n, unsigned long long mask):
    cdef unsigned int adj[MAXN]
    _check(n)
    build_adj(mask, n, adj)
    return ncomp(adj, n)


def biconnected(int n, unsigned long long mask):
    cdef unsigned int adj[MAXN]
    _check(n)
    build_adj(mask, n, adj)
    return bool(biconn(adj, n))


def k4_reduction(int n, unsigned long long mask):
    cdef unsigned int adj[MAXN]
    _check(n)
    build_adj(mask, n, adj)
    return bool(k4_reduce(adj, n))


def k4_branch(int n, unsigned long long mask):
    cdef unsigned int adj[MAXN]
    _check(n)
    build_adj(mask, n, adj)
    return bool(k4_branch_c(adj, n))


def k23_branch(int n, unsigned long long mask):
    cdef unsigned int adj[MAXN]
    _check(n)
    build_adj(mask, n, adj)
    return bool(k23_branch_c(adj, n))


# -- full sweep ---------------------------------------------------------------------------

def classify_range(int n, bint cross_check=False):
    """Flags and component counts of every edge mask on n vertices.

    Minor containment is propagated from single-edge-deleted subgraphs (masks
    are visited in increasing order, so those are already classified); only
    graphs without such a witness are searched directly.  With cross_check
    both K4 tests run on every graph and must agree.
    Returns (flags, comps, problems) where problems lists offending masks.
    """
    _check(n)
    cdef int E = n * (n - 1) // 2
    cdef unsigned long long total = 1ull << E, m, mm, bit
    flags = np.zeros(total, dtype=np.uint8)
    comps = np.zeros(total, dtype=np.uint8)
    cdef unsigned char[::1] fl = flags
    cdef unsigned char[::1] cp = comps
    cdef unsigned int adj[MAXN]
    cdef int c, f, nv, nb, ne
    cdef bint k4, k23, k4b
    cdef unsigned long long bad_k4 = 0, bad_struct = 0
    cdef bint have_bad_k4 = 0, have_bad_struct = 0
    with nogil:
        for m in range(total):
            build_adj(m, n, adj)
            c = ncomp(adj, n)
            cp[m] = c
            f = 0
            if c == 1:
                f |= 1
            if biconn(adj, n):
                f |= 2
            k4 = 0
            k23 = 0
            if cross_check:
                k4 = k4_reduce(adj, n)
                k4b = k4_branch_c(adj, n)
                if k4 != k4b and not have_bad_k4:
                    have_bad_k4 = 1
                    bad_k4 = m
            else:
                mm = m
                while mm:
                    bit = mm & (~mm + 1)
                    mm ^= bit
                    if fl[m ^ bit] & 4:
                        k4 = 1
                        break
            mm = m
            while mm:
                bit = mm & (~mm + 1)
                mm ^= bit
                if fl[m ^ bit] & 8:
                    k23 = 1
                    break
            if not k4 or not k23:
                core_stats(adj, n, &nv, &nb, &ne)
                if not k4 and not cross_check and nb >= 4:
                    k4 = k4_reduce(adj, n)
                if not k23 and nv >= 5 and nb >= 2 and ne >= 6:
                    k23 = k23_branch_c(adj, n)
            if k4:
                f |= 4
            if k23:
                f |= 8
            # 2-connected, K23-minor-free and not outerplanar must be K4 itself
            if (f & 2) and k4 and not k23 and not (n == 4 and popc(<unsigned int>m) == 6):
                if not have_bad_struct:
                    have_bad_struct = 1
                    bad_struct = m
            fl[m] = f
    problems = []
    if have_bad_k4:
        problems.append(("k4-methods-disagree", int(bad_k4)))
    if have_bad_struct:
        problems.append(("k23-structure", int(bad_struct)))
    return flags, comps, problems


def cross_check_masks(int n, masks):
    """Run both K4 tests on each mask; return the first disagreeing mask or -1."""
    _check(n)
    cdef unsigned long long[::1] ms = masks
    cdef Py_ssize_t i, cnt = ms.shape[0]
    cdef unsigned int adj[MAXN]
    cdef long long bad = -1
    with nogil:
        for i in range(cnt):
            build_adj(ms[i], n, adj)
            if k4_reduce(adj, n) != k4_branch_c(adj, n):
                bad = <long long>ms[i]
                break
    return bad
