# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels.  Mirrors ``_pykernels`` exactly; see that module for contracts.

Bit rows are packed into little-endian arrays of 64-bit words.
"""

import numpy as np

from libc.math cimport fabs, sqrt
from libc.stdint cimport uint64_t
from libc.stdlib cimport free, malloc
from libc.string cimport memcpy, memset


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef uint64_t MASK64 = 0xFFFFFFFFFFFFFFFF


cdef uint64_t* _pack(rows, int n, int W) except NULL:
    cdef uint64_t* buf = <uint64_t*> malloc(max(n * W, 1) * sizeof(uint64_t))
    cdef int v, w
    if buf == NULL:
        raise MemoryError()
    big = (1 << 64) - 1
    for v in range(n):
        r = rows[v]
        for w in range(W):
            buf[v * W + w] = <uint64_t> (r & big)
            r >>= 64
    return buf


cdef object _unpack(uint64_t* words, int W):
    out = 0
    cdef int w
    for w in range(W - 1, -1, -1):
        out = (out << 64) | <object> words[w]
    return out


cdef inline bint _any(uint64_t* x, int W) nogil:
    cdef int w
    for w in range(W):
        if x[w]:
            return True
    return False


cdef inline int _count(uint64_t* x, int W) nogil:
    cdef int w, c = 0
    for w in range(W):
        c += __builtin_popcountll(x[w])
    return c


# -- Jacobi ---------------------------------------------------------------

def jacobi_eigenvalues(a, double tol, int max_sweeps):
    cdef double[:, ::1] m = np.array(a, dtype=np.float64, order="C", copy=True)
    cdef int n = m.shape[0]
    cdef int p, q, k, i, j, sweeps = 0
    cdef double fro = 0.0, off, target, apq, app, aqq, theta, t, c, s, akp, akq
    for i in range(n):
        for j in range(n):
            fro += m[i, j] * m[i, j]
    fro = sqrt(fro)
    target = tol * fro
    while True:
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += m[i, j] * m[i, j]
        off = sqrt(off)
        if off <= target or fro == 0.0:
            return [m[i, i] for i in range(n)], sweeps, off, True
        if sweeps >= max_sweeps:
            return [m[i, i] for i in range(n)], sweeps, off, False
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                if apq == 0.0:
                    continue
                app = m[p, p]
                aqq = m[q, q]
                theta = (aqq - app) / (2.0 * apq)
                t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    if k == p or k == q:
                        continue
                    akp = m[k, p]
                    akq = m[k, q]
                    m[k, p] = c * akp - s * akq
                    m[p, k] = m[k, p]
                    m[k, q] = s * akp + c * akq
                    m[q, k] = m[k, q]
                m[p, p] = app - t * apq
                m[q, q] = aqq + t * apq
                m[p, q] = 0.0
                m[q, p] = 0.0


# -- maximum clique -------------------------------------------------------

cdef struct CliqueState:
    uint64_t* rows
    int W
    uint64_t* best
    int best_size
    uint64_t* cur


cdef int _expand(CliqueState* st, int rsize, uint64_t* P) nogil:
    cdef int W = st.W
    cdef int cnt = _count(P, W)
    cdef int* order = <int*> malloc(cnt * sizeof(int))
    cdef int* bounds = <int*> malloc(cnt * sizeof(int))
    cdef uint64_t* U = <uint64_t*> malloc(W * sizeof(uint64_t))
    cdef uint64_t* Q = <uint64_t*> malloc(W * sizeof(uint64_t))
    cdef uint64_t* NP = <uint64_t*> malloc(W * sizeof(uint64_t))
    cdef int color = 0, k = 0, w, v, i, qw
    cdef uint64_t* row
    if order == NULL or bounds == NULL or U == NULL or Q == NULL or NP == NULL:
        free(order); free(bounds); free(U); free(Q); free(NP)
        return -1
    memcpy(U, P, W * sizeof(uint64_t))
    while _any(U, W):
        color += 1
        memcpy(Q, U, W * sizeof(uint64_t))
        qw = 0
        while True:
            while qw < W and Q[qw] == 0:
                qw += 1
            if qw == W:
                break
            v = qw * 64 + __builtin_ctzll(Q[qw])
            Q[qw] &= Q[qw] - 1
            U[v >> 6] &= ~((<uint64_t> 1) << (v & 63))
            row = st.rows + v * W
            for w in range(W):
                Q[w] &= ~row[w]
            order[k] = v
            bounds[k] = color
            k += 1
    for i in range(k - 1, -1, -1):
        if rsize + bounds[i] <= st.best_size:
            break
        v = order[i]
        row = st.rows + v * W
        st.cur[v >> 6] |= (<uint64_t> 1) << (v & 63)
        for w in range(W):
            NP[w] = P[w] & row[w]
        if _any(NP, W):
            if _expand(st, rsize + 1, NP) < 0:
                free(order); free(bounds); free(U); free(Q); free(NP)
                return -1
        elif rsize + 1 > st.best_size:
            memcpy(st.best, st.cur, W * sizeof(uint64_t))
            st.best_size = rsize + 1
        st.cur[v >> 6] &= ~((<uint64_t> 1) << (v & 63))
        P[v >> 6] &= ~((<uint64_t> 1) << (v & 63))
    free(order); free(bounds); free(U); free(Q); free(NP)
    return 0


def max_clique(rows, int n, candidates):
    if n == 0 or not candidates:
        return 0
    cdef int W = (n + 63) // 64
    cdef CliqueState st
    cdef uint64_t* P = _pack([candidates], 1, W)
    st.rows = _pack(rows, n, W)
    st.W = W
    st.best = <uint64_t*> malloc(W * sizeof(uint64_t))
    st.cur = <uint64_t*> malloc(W * sizeof(uint64_t))
    memset(st.best, 0, W * sizeof(uint64_t))
    memset(st.cur, 0, W * sizeof(uint64_t))
    st.best_size = 0
    cdef int rc
    with nogil:
        rc = _expand(&st, 0, P)
    result = _unpack(st.best, W)
    free(st.rows); free(st.best); free(st.cur); free(P)
    if rc < 0:
        raise MemoryError()
    return result


# -- minimum dominating set (n <= 64) -------------------------------------

cdef struct DomState:
    uint64_t* closed
    int n
    uint64_t full
    uint64_t best
    int best_size


cdef void _dom_search(DomState* st, uint64_t d, int dsize, uint64_t covered, uint64_t allowed) nogil:
    cdef uint64_t unc, a, x, low, cand_mask
    cdef int maxcov = 0, c, need, pick = -1, pick_count, u, w, ncand = 0, i, j, tmp
    cdef int gains[64]
    cdef int verts[64]
    if covered == st.full:
        if dsize < st.best_size:
            st.best = d
            st.best_size = dsize
        return
    unc = st.full & ~covered
    a = allowed
    while a:
        w = __builtin_ctzll(a)
        c = __builtin_popcountll(st.closed[w] & unc)
        if c > maxcov:
            maxcov = c
        a &= a - 1
    if maxcov == 0:
        return
    c = __builtin_popcountll(unc)
    need = (c + maxcov - 1) // maxcov
    if dsize + need >= st.best_size:
        return
    pick_count = st.n + 1
    x = unc
    while x:
        u = __builtin_ctzll(x)
        c = __builtin_popcountll(st.closed[u] & allowed)
        if c < pick_count:
            pick = u
            pick_count = c
            if c <= 1:
                break
        x &= x - 1
    if pick_count == 0:
        return
    cand_mask = st.closed[pick] & allowed
    while cand_mask:
        w = __builtin_ctzll(cand_mask)
        gains[ncand] = __builtin_popcountll(st.closed[w] & unc)
        verts[ncand] = w
        ncand += 1
        cand_mask &= cand_mask - 1
    # insertion sort: gain desc, id asc
    for i in range(1, ncand):
        j = i
        while j > 0 and (gains[j] > gains[j - 1] or (gains[j] == gains[j - 1] and verts[j] < verts[j - 1])):
            tmp = gains[j]; gains[j] = gains[j - 1]; gains[j - 1] = tmp
            tmp = verts[j]; verts[j] = verts[j - 1]; verts[j - 1] = tmp
            j -= 1
    for i in range(ncand):
        w = verts[i]
        _dom_search(st, d | ((<uint64_t> 1) << w), dsize + 1, covered | st.closed[w], allowed)
        allowed &= ~((<uint64_t> 1) << w)


def min_dominating_set(rows, int n):
    if n == 0:
        return 0
    if n > 64:
        raise ValueError("compiled dominating-set kernel supports n <= 64")
    cdef uint64_t closed[64]
    cdef DomState st
    cdef int v, w, bestw, c, bc
    cdef uint64_t covered = 0, greedy = 0, unc
    for v in range(n):
        closed[v] = (<uint64_t> (rows[v] & MASK64)) | ((<uint64_t> 1) << v)
    st.closed = closed
    st.n = n
    st.full = MASK64 if n == 64 else (((<uint64_t> 1) << n) - 1)
    while covered != st.full:
        unc = st.full & ~covered
        bestw = 0
        bc = -1
        for w in range(n):
            c = __builtin_popcountll(closed[w] & unc)
            if c > bc:
                bc = c
                bestw = w
        greedy |= (<uint64_t> 1) << bestw
        covered |= closed[bestw]
    st.best = greedy
    st.best_size = __builtin_popcountll(greedy)
    with nogil:
        _dom_search(&st, 0, 0, 0, st.full)
    return <object> st.best


# -- BFS eccentricities ---------------------------------------------------

def eccentricities(rows, int n):
    if n == 0:
        return []
    cdef int W = (n + 63) // 64
    cdef uint64_t* adj = _pack(rows, n, W)
    cdef uint64_t* seen = <uint64_t*> malloc(W * sizeof(uint64_t))
    cdef uint64_t* frontier = <uint64_t*> malloc(W * sizeof(uint64_t))
    cdef uint64_t* nxt = <uint64_t*> malloc(W * sizeof(uint64_t))
    cdef int* ecc = <int*> malloc(n * sizeof(int))
    cdef int s, d, w, v, total
    cdef uint64_t bits
    cdef bint grew
    with nogil:
        for s in range(n):
            memset(seen, 0, W * sizeof(uint64_t))
            memset(frontier, 0, W * sizeof(uint64_t))
            seen[s >> 6] = (<uint64_t> 1) << (s & 63)
            frontier[s >> 6] = seen[s >> 6]
            d = 0
            while True:
                memset(nxt, 0, W * sizeof(uint64_t))
                for w in range(W):
                    bits = frontier[w]
                    while bits:
                        v = w * 64 + __builtin_ctzll(bits)
                        bits &= bits - 1
                        for total in range(W):
                            nxt[total] |= adj[v * W + total]
                grew = False
                for w in range(W):
                    nxt[w] &= ~seen[w]
                    if nxt[w]:
                        grew = True
                if not grew:
                    break
                d += 1
                for w in range(W):
                    seen[w] |= nxt[w]
                    frontier[w] = nxt[w]
            ecc[s] = d if _count(seen, W) == n else -1
    out = [ecc[s] for s in range(n)]
    free(adj); free(seen); free(frontier); free(nxt); free(ecc)
    return out
