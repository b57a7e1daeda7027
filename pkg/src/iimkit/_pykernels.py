"""Pure-Python kernels.  Same signatures and results as ``_ckernels``.

Adjacency is passed as a sequence of Python int bit rows.
"""

from __future__ import annotations

import math


def jacobi_eigenvalues(a, tol: float, max_sweeps: int):
    """Cyclic Jacobi on a dense symmetric matrix.

    Returns ``(eigenvalues_unsorted, sweeps, off_norm, converged)``.  Stops
    once the off-diagonal Frobenius norm is at most ``tol * ||a||_F``.
    """
    m = [list(map(float, row)) for row in a]
    n = len(m)
    fro = math.sqrt(sum(x * x for row in m for x in row))
    target = tol * fro
    sweeps = 0
    off = 0.0
    while True:
        off = math.sqrt(sum(m[i][j] ** 2 for i in range(n) for j in range(n) if i != j))
        if off <= target or fro == 0.0:
            return [m[i][i] for i in range(n)], sweeps, off, True
        if sweeps >= max_sweeps:
            return [m[i][i] for i in range(n)], sweeps, off, False
        sweeps += 1
        for p in range(n - 1):
            mp = m[p]
            for q in range(p + 1, n):
                apq = mp[q]
                if apq == 0.0:
                    continue
                mq = m[q]
                app, aqq = mp[p], mq[q]
                theta = (aqq - app) / (2.0 * apq)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    if k == p or k == q:
                        continue
                    mk = m[k]
                    akp, akq = mk[p], mk[q]
                    nkp = c * akp - s * akq
                    nkq = s * akp + c * akq
                    mk[p] = mp[k] = nkp
                    mk[q] = mq[k] = nkq
                mp[p] = app - t * apq
                mq[q] = aqq + t * apq
                mp[q] = mq[p] = 0.0


def max_clique(rows, n: int, candidates: int) -> int:
    """Maximum clique inside ``candidates``; greedy-colouring bound B&B."""
    best = 0
    best_size = 0

    def expand(r: int, rsize: int, p: int) -> None:
        nonlocal best, best_size
        order = []
        bounds = []
        u = p
        color = 0
        while u:
            color += 1
            q = u
            while q:
                low = q & -q
                v = low.bit_length() - 1
                q &= ~rows[v] & ~low
                u &= ~low
                order.append(v)
                bounds.append(color)
        for i in range(len(order) - 1, -1, -1):
            if rsize + bounds[i] <= best_size:
                return
            v = order[i]
            bit = 1 << v
            np_ = p & rows[v]
            if np_:
                expand(r | bit, rsize + 1, np_)
            elif rsize + 1 > best_size:
                best, best_size = r | bit, rsize + 1
            p &= ~bit

    if candidates:
        expand(0, 0, candidates)
    return best


def min_dominating_set(rows, n: int) -> int:
    """Minimum dominating set by branching on the hardest undominated vertex."""
    full = (1 << n) - 1
    if n == 0:
        return 0
    closed = [rows[v] | (1 << v) for v in range(n)]

    # greedy upper bound
    covered = 0
    greedy = 0
    while covered != full:
        unc = full & ~covered
        w = max(range(n), key=lambda x: (closed[x] & unc).bit_count())
        greedy |= 1 << w
        covered |= closed[w]
    best = greedy
    best_size = greedy.bit_count()

    def search(d: int, dsize: int, covered: int, allowed: int) -> None:
        nonlocal best, best_size
        if covered == full:
            if dsize < best_size:
                best, best_size = d, dsize
            return
        unc = full & ~covered
        maxcov = 0
        a = allowed
        while a:
            low = a & -a
            c = (closed[low.bit_length() - 1] & unc).bit_count()
            if c > maxcov:
                maxcov = c
            a ^= low
        if maxcov == 0:
            return
        need = -(-unc.bit_count() // maxcov)
        if dsize + need >= best_size:
            return
        pick = -1
        pick_count = n + 1
        x = unc
        while x:
            low = x & -x
            u = low.bit_length() - 1
            cnt = (closed[u] & allowed).bit_count()
            if cnt < pick_count:
                pick, pick_count = u, cnt
                if cnt <= 1:
                    break
            x ^= low
        if pick_count == 0:
            return
        cands = []
        x = closed[pick] & allowed
        while x:
            low = x & -x
            w = low.bit_length() - 1
            cands.append(((closed[w] & unc).bit_count(), w))
            x ^= low
        cands.sort(key=lambda t: (-t[0], t[1]))
        for _, w in cands:
            search(d | (1 << w), dsize + 1, covered | closed[w], allowed)
            allowed &= ~(1 << w)

    search(0, 0, 0, full)
    return best


def eccentricities(rows, n: int) -> list[int]:
    """BFS eccentricity of every vertex; -1 where some vertex is unreachable."""
    full = (1 << n) - 1
    out = []
    for s in range(n):
        seen = 1 << s
        frontier = seen
        d = 0
        while True:
            nxt = 0
            f = frontier
            while f:
                low = f & -f
                nxt |= rows[low.bit_length() - 1]
                f ^= low
            nxt &= ~seen
            if not nxt:
                break
            d += 1
            seen |= nxt
            frontier = nxt
        out.append(d if seen == full else -1)
    return out
