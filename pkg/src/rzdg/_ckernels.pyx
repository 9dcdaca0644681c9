# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels on fixed-width uint64 bit blocks.

Mirrors ``rzdg._pykernels`` call for call; the search loop runs without the GIL.
"""

from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, calloc, free, qsort
from libc.string cimport memcpy
from posix.time cimport clock_gettime, timespec, CLOCK_MONOTONIC

BRUTE_HARD_CAP = 30

cdef extern from *:
    int popcount64 "__builtin_popcountll"(unsigned long long) nogil
    int ctz64 "__builtin_ctzll"(unsigned long long) nogil


cdef struct Search:
    int n
    int W
    uint64_t* closed        # n rows of W words
    uint64_t* full          # W words
    int* degree
    int* hist              # coverage histogram scratch, n + 2
    int pick_cost
    int allow_single
    uint64_t* res_stack     # (n + 2) rows
    uint64_t* forb_stack
    int* picks
    int npicks
    int* singles
    int nsingles
    int best
    int* best_picks
    int nbest_picks
    int* best_singles
    int nbest_singles
    long long nodes
    long long node_budget
    double time_limit
    double start
    int aborted


cdef inline double now() noexcept nogil:
    cdef timespec ts
    clock_gettime(CLOCK_MONOTONIC, &ts)
    return ts.tv_sec + ts.tv_nsec * 1e-9


cdef int cmp_ll(const void* a, const void* b) noexcept nogil:
    cdef long long x = (<long long*>a)[0]
    cdef long long y = (<long long*>b)[0]
    return (x > y) - (x < y)


cdef inline int and_count(const uint64_t* a, const uint64_t* b, int W) noexcept nogil:
    cdef int i, c = 0
    for i in range(W):
        c += popcount64(a[i] & b[i])
    return c


cdef void record(Search* s, int cost) noexcept nogil:
    s.best = cost
    memcpy(s.best_picks, s.picks, s.npicks * sizeof(int))
    s.nbest_picks = s.npicks
    memcpy(s.best_singles, s.singles, s.nsingles * sizeof(int))
    s.nbest_singles = s.nsingles


cdef int cover_bound(Search* s, int k, int cnt) noexcept nogil:
    """Cheapest way to cover ``cnt`` vertices given the coverage histogram."""
    cdef int c, t, j = 0, covered = 0, val
    cdef int best = cnt if s.allow_single else 0x3FFFFFFF
    c = k
    while c > 0:
        if s.allow_single and c <= s.pick_cost:
            break
        t = s.hist[c]
        while t > 0:
            j += 1
            covered += c
            t -= 1
            if covered >= cnt:
                val = s.pick_cost * j
                return val if val < best else best
            if s.allow_single:
                val = s.pick_cost * j + cnt - covered
                if val < best:
                    best = val
        c -= 1
    return best


cdef void dfs(Search* s, int depth, int cost) noexcept nogil:
    cdef int W = s.W
    cdef int n = s.n
    cdef uint64_t* res = s.res_stack + depth * W
    cdef uint64_t* forb = s.forb_stack + depth * W
    cdef uint64_t* cres = s.res_stack + (depth + 1) * W
    cdef uint64_t* cforb = s.forb_stack + (depth + 1) * W
    cdef int i, w, v, u, k, c, cnt, lb, nforced = 0
    cdef int branch, bkey_cnt, bkey_deg, ncand, vcnt
    cdef uint64_t word
    cdef const uint64_t* row
    cdef long long* keys

    s.nodes += 1
    if s.nodes > s.node_budget:
        s.aborted = 1
        return
    if s.time_limit > 0 and (s.nodes & 1023) == 0 and now() - s.start > s.time_limit:
        s.aborted = 1
        return

    # forced singles: uncovered vertices with no allowed closed neighbour
    for w in range(W):
        word = ~res[w] & s.full[w]
        while word:
            v = w * 64 + ctz64(word)
            word &= word - 1
            row = s.closed + v * W
            c = 0
            for i in range(W):
                if row[i] & ~forb[i] & s.full[i]:
                    c = 1
                    break
            if not c:
                if not s.allow_single:
                    s.nsingles -= nforced
                    return
                s.singles[s.nsingles] = v
                s.nsingles += 1
                nforced += 1
    for i in range(nforced):
        v = s.singles[s.nsingles - 1 - i]
        res[v >> 6] |= (<uint64_t>1) << (v & 63)
    cost += nforced

    if cost >= s.best:
        s.nsingles -= nforced
        return

    cnt = 0
    for w in range(W):
        cnt += popcount64(~res[w] & s.full[w])
    if cnt == 0:
        record(s, cost)
        s.nsingles -= nforced
        return

    # lower bound: j picks cover at most the j largest coverages
    k = 0
    for w in range(W):
        word = ~forb[w] & s.full[w]
        while word:
            u = w * 64 + ctz64(word)
            word &= word - 1
            row = s.closed + u * W
            c = 0
            for i in range(W):
                c += popcount64(row[i] & ~res[i] & s.full[i])
            if c > k:
                for i in range(k + 1, c + 1):
                    s.hist[i] = 0
                k = c
            s.hist[c] += 1
    lb = cover_bound(s, k, cnt)
    if cost + lb >= s.best:
        s.nsingles -= nforced
        return

    # branch on the most constrained uncovered vertex
    branch = -1
    bkey_cnt = n + 1
    bkey_deg = -1
    for w in range(W):
        word = ~res[w] & s.full[w]
        while word:
            v = w * 64 + ctz64(word)
            word &= word - 1
            row = s.closed + v * W
            vcnt = 0
            for i in range(W):
                vcnt += popcount64(row[i] & ~forb[i] & s.full[i])
            if vcnt < bkey_cnt or (vcnt == bkey_cnt and s.degree[v] > bkey_deg):
                branch = v
                bkey_cnt = vcnt
                bkey_deg = s.degree[v]

    keys = <long long*>malloc((bkey_cnt + 1) * sizeof(long long))
    ncand = 0
    row = s.closed + branch * W
    for w in range(W):
        word = row[w] & ~forb[w] & s.full[w]
        while word:
            u = w * 64 + ctz64(word)
            word &= word - 1
            c = 0
            for i in range(W):
                c += popcount64(s.closed[u * W + i] & ~res[i] & s.full[i])
            keys[ncand] = <long long>(n - c) * (n + 1) + u
            ncand += 1
    qsort(keys, ncand, sizeof(long long), cmp_ll)

    memcpy(cforb, forb, W * sizeof(uint64_t))
    for i in range(ncand):
        if cost + s.pick_cost >= s.best:
            break
        u = <int>(keys[i] % (n + 1))
        cforb[u >> 6] |= (<uint64_t>1) << (u & 63)
        row = s.closed + u * W
        for w in range(W):
            cres[w] = res[w] | row[w]
        s.picks[s.npicks] = u
        s.npicks += 1
        dfs(s, depth + 1, cost + s.pick_cost)
        s.npicks -= 1
        if s.aborted:
            break
    free(keys)

    if not s.aborted and s.allow_single and cost + 1 < s.best:
        row = s.closed + branch * W
        for w in range(W):
            cres[w] = res[w]
            cforb[w] = forb[w] | row[w]
        cres[branch >> 6] |= (<uint64_t>1) << (branch & 63)
        s.singles[s.nsingles] = branch
        s.nsingles += 1
        dfs(s, depth + 1, cost + 1)
        s.nsingles -= 1

    s.nsingles -= nforced


cdef void load_rows(object closed, uint64_t* out, int n, int W):
    cdef int v, w
    cdef object mask
    for v in range(n):
        mask = closed[v]
        for w in range(W):
            out[v * W + w] = <uint64_t>(mask & 0xFFFFFFFFFFFFFFFF)
            mask = mask >> 64


def branch_and_bound(closed, int pick_cost, bint allow_single, int best, best_picks,
                     best_singles, long long node_budget, double time_limit):
    """See ``rzdg._pykernels.branch_and_bound``."""
    cdef int n = len(closed)
    cdef int W = (n + 63) // 64 if n > 0 else 1
    cdef Search s
    cdef int v, i
    s.n = n
    s.W = W
    s.closed = <uint64_t*>calloc(max(n, 1) * W, sizeof(uint64_t))
    s.full = <uint64_t*>calloc(W, sizeof(uint64_t))
    s.degree = <int*>calloc(max(n, 1), sizeof(int))
    s.hist = <int*>calloc(n + 2, sizeof(int))
    s.res_stack = <uint64_t*>calloc((n + 2) * W, sizeof(uint64_t))
    s.forb_stack = <uint64_t*>calloc((n + 2) * W, sizeof(uint64_t))
    s.picks = <int*>calloc(n + 1, sizeof(int))
    s.singles = <int*>calloc(n + 1, sizeof(int))
    s.best_picks = <int*>calloc(n + 1, sizeof(int))
    s.best_singles = <int*>calloc(n + 1, sizeof(int))
    try:
        load_rows(closed, s.closed, n, W)
        for v in range(n):
            s.full[v >> 6] |= (<uint64_t>1) << (v & 63)
        for v in range(n):
            s.degree[v] = and_count(s.closed + v * W, s.full, W) - 1
        s.pick_cost = pick_cost
        s.allow_single = allow_single
        s.npicks = 0
        s.nsingles = 0
        s.best = best
        s.nbest_picks = len(best_picks)
        for i in range(s.nbest_picks):
            s.best_picks[i] = best_picks[i]
        s.nbest_singles = len(best_singles)
        for i in range(s.nbest_singles):
            s.best_singles[i] = best_singles[i]
        s.nodes = 0
        s.node_budget = node_budget
        s.time_limit = time_limit
        s.aborted = 0
        s.start = now()
        with nogil:
            dfs(&s, 0, 0)
        picks = [s.best_picks[i] for i in range(s.nbest_picks)]
        singles = [s.best_singles[i] for i in range(s.nbest_singles)]
        return s.best, picks, singles, s.nodes, not s.aborted
    finally:
        free(s.closed)
        free(s.full)
        free(s.degree)
        free(s.hist)
        free(s.res_stack)
        free(s.forb_stack)
        free(s.picks)
        free(s.singles)
        free(s.best_picks)
        free(s.best_singles)


cdef void load_small(object closed, uint64_t* rows, int n):
    cdef int v
    for v in range(n):
        rows[v] = <uint64_t>closed[v]


cdef int combo_walk(const uint64_t* rows, int n, bint roman, uint64_t* out_mask) noexcept nogil:
    """Pick sets of size k = 0, 1, ... in lexicographic order, with prefix ORs.

    Roman: minimise 2k + (uncovered count), stopping once 2k reaches the best.
    Domination: return the first k whose pick set covers everything.
    """
    cdef int c[64]
    cdef uint64_t pref[65]
    cdef uint64_t full = (((<uint64_t>1) << n) - 1) if n < 64 else ~(<uint64_t>0)
    cdef uint64_t mask
    cdef int best = n, k, j, i, w
    out_mask[0] = 0
    if n == 0:
        return 0
    pref[0] = 0
    for k in range(1, n + 1):
        if roman and 2 * k >= best:
            break
        for j in range(k):
            c[j] = j
            pref[j + 1] = pref[j] | rows[j]
        while True:
            if roman:
                w = 2 * k + n - popcount64(pref[k])
                if w < best:
                    best = w
                    mask = 0
                    for i in range(k):
                        mask |= (<uint64_t>1) << c[i]
                    out_mask[0] = mask
            elif pref[k] == full:
                mask = 0
                for i in range(k):
                    mask |= (<uint64_t>1) << c[i]
                out_mask[0] = mask
                return k
            j = k - 1
            while j >= 0 and c[j] == n - k + j:
                j -= 1
            if j < 0:
                break
            c[j] += 1
            pref[j + 1] = pref[j] | rows[c[j]]
            for i in range(j + 1, k):
                c[i] = c[i - 1] + 1
                pref[i + 1] = pref[i] | rows[c[i]]
    return best


def brute_roman(closed):
    """Exhaustive over pick sets by increasing size; returns (weight, pick mask)."""
    cdef int n = len(closed)
    if n > BRUTE_HARD_CAP:
        raise ValueError(f"brute force limited to {BRUTE_HARD_CAP} vertices")
    cdef uint64_t rows[64]
    cdef uint64_t mask = 0
    cdef int best
    load_small(closed, rows, n)
    with nogil:
        best = combo_walk(rows, n, True, &mask)
    return best, int(mask)


def brute_dom(closed):
    """Smallest dominating set by increasing size; returns (size, mask)."""
    cdef int n = len(closed)
    if n > BRUTE_HARD_CAP:
        raise ValueError(f"brute force limited to {BRUTE_HARD_CAP} vertices")
    cdef uint64_t rows[64]
    cdef uint64_t mask = 0
    cdef int best
    load_small(closed, rows, n)
    with nogil:
        best = combo_walk(rows, n, False, &mask)
    return best, int(mask)
