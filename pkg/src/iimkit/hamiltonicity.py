"""Hamiltonian cycles: an exact solver and the clone/anticlone partition builder."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .errors import PreconditionError, SizeLimitError, ValidationError
from .generator import ChoiceSequence, IIMGraph, LevelChoice, iim_generate
from .graph import Graph, component_of, induced_subgraph, is_independent, iter_bits

HAM_LIMIT = 24
PARTITION_LIMIT = 20


# -- exact solver ----------------------------------------------------------------


def is_hamiltonian_cycle(g: Graph, cycle) -> bool:
    c = list(cycle)
    if g.n < 3 or len(c) != g.n or sorted(c) != list(range(g.n)):
        return False
    return all(g.has_edge(c[i], c[(i + 1) % len(c)]) for i in range(len(c)))


def _ham_path_search(g: Graph, start: int, end: int | None, within: int) -> list[int] | None:
    """Path from ``start`` covering ``within``; closes to ``start`` when end is None.

    Pruning: every unvisited vertex needs two usable neighbours, vertices
    left with exactly two are forced, and the unvisited part must stay
    connected to the current endpoint.
    """
    adj = g.adj
    target = start if end is None else end
    path = [start]

    def usable(u: int, left: int, cur: int) -> int:
        return adj[u] & (left | (1 << cur) | (1 << target))

    def rec(cur: int, left: int) -> bool:
        if not left:
            return end is None and bool(adj[cur] >> start & 1) or (end is not None and cur == end)
        if end is not None and left == 1 << end:
            if adj[cur] >> end & 1:
                path.append(end)
                return True
            return False
        if component_of(g, cur, left | (1 << cur)) != left | (1 << cur):
            return False
        forced = -1
        # a cycle's start still has both slots free on the first step
        one_slot = end is not None or len(path) > 1
        for u in iter_bits(left):
            if u == target:
                continue
            nb = usable(u, left, cur) & ~(1 << u)
            c = nb.bit_count()
            if c < 2:
                return False
            if c == 2 and nb >> cur & 1 and one_slot:
                if forced >= 0 and forced != u:
                    return False
                forced = u
        cand = adj[cur] & left
        if end is not None and cand != 1 << end:
            cand &= ~(1 << end)
        if forced >= 0:
            cand &= 1 << forced
        for nxt in iter_bits(cand):
            path.append(nxt)
            if rec(nxt, left & ~(1 << nxt)):
                return True
            path.pop()
        return False

    left = within & ~(1 << start)
    if rec(start, left):
        return path
    return None


def hamiltonian_cycle(g: Graph, limit: int = HAM_LIMIT) -> list[int] | None:
    """A Hamiltonian cycle as a vertex order, or None if none exists."""
    if g.n > limit:
        raise SizeLimitError("hamiltonian_cycle", g.n, limit)
    if g.n < 3 or min(g.degrees()) < 2:
        return None
    start = min(range(g.n), key=lambda v: (g.degree(v), v))
    return _ham_path_search(g, start, None, g.full)


def hamiltonian_path(g: Graph, start: int, end: int, within: int) -> list[int] | None:
    """A path from start to end visiting exactly the vertices of ``within``."""
    if not (within >> start & 1 and within >> end & 1):
        return None
    if start == end:
        return [start] if within == 1 << start else None
    return _ham_path_search(g, start, end, within)


# -- partition --------------------------------------------------------------------


@dataclass(frozen=True)
class HamPartition:
    """Blocks over H_(l-1) with connectors.

    For block i: ``v[i]`` in C_i misses ``u[i]`` in A_(i-1) and ``w[i]`` in
    C_i touches ``x[i]`` in A_i (indices mod k).
    """

    c_blocks: tuple[int, ...]
    a_blocks: tuple[int, ...]
    v: tuple[int, ...]
    w: tuple[int, ...]
    u: tuple[int, ...]
    x: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.c_blocks)

    def to_json(self) -> dict:
        return {
            "C": [sorted(iter_bits(b)) for b in self.c_blocks],
            "A": [sorted(iter_bits(b)) for b in self.a_blocks],
            "v": list(self.v),
            "w": list(self.w),
            "u": list(self.u),
            "x": list(self.x),
        }


def _split(h: IIMGraph) -> tuple[Graph, int, int]:
    if h.top_level < 1:
        raise PreconditionError("graph needs at least one level")
    prev = h.prefix(h.top_level - 1).graph
    bits = h.choices.levels[-1].bits
    return prev, prev.full & ~bits, bits


def partition_violations(h: IIMGraph, p: HamPartition) -> list[str]:
    """The three listed conditions, read literally (condition 1: a Hamiltonian cycle)."""
    prev, cset, aset = _split(h)
    errs = []
    k = p.k
    if k < 1 or len(p.a_blocks) != k:
        return ["need k >= 1 blocks of each kind"]
    acc = 0
    for b in p.c_blocks:
        if acc & b:
            errs.append("C blocks overlap")
        acc |= b
    if acc != cset:
        errs.append("C blocks do not partition the cloned set")
    acc = 0
    for b in p.a_blocks:
        if acc & b:
            errs.append("A blocks overlap")
        acc |= b
    if acc != aset:
        errs.append("A blocks do not partition the anticloned set")
    for i in range(k):
        ci, ai = p.c_blocks[i], p.a_blocks[i]
        sub, _ = induced_subgraph(prev, ci)
        if hamiltonian_cycle(sub) is None:
            errs.append(f"C_{i + 1} is not Hamiltonian")
        if not is_independent(prev, ai):
            errs.append(f"A_{i + 1} is not independent")
        if ai.bit_count() < 3:
            errs.append(f"A_{i + 1} has fewer than 3 vertices")
        v, w, u, x = p.v[i], p.w[i], p.u[i], p.x[i]
        if v == w or not (ci >> v & 1 and ci >> w & 1):
            errs.append(f"connectors v, w of block {i + 1} must be distinct members of C_{i + 1}")
        if not p.a_blocks[(i - 1) % k] >> u & 1 or not ai >> x & 1:
            errs.append(f"connectors u, x of block {i + 1} in the wrong A blocks")
        if prev.has_edge(v, u):
            errs.append(f"v={v} is adjacent to u={u}")
        if not prev.has_edge(w, x):
            errs.append(f"w={w} is not adjacent to x={x}")
    return errs


def _a_path(prev: Graph, block: int, first: int, last_src: int) -> list[tuple[int, int]] | None:
    """Order A_i as (old, anticlone source) pairs from ``first`` to the anticlone of ``last_src``.

    The anticlone of s is adjacent to old a iff a != s (the block is
    independent), so each source must differ from the old vertices on
    either side of it.
    """
    members = list(iter_bits(block))
    m = len(members)
    olds = [first]
    srcs: list[int] = []
    used_o = {first}
    used_s: set[int] = set()

    def rec(i: int) -> bool:
        # choose srcs[i] (between olds[i] and olds[i+1]) then olds[i+1]
        if i == m - 1:
            if last_src in used_s or last_src == olds[i]:
                return False
            srcs.append(last_src)
            return True
        for s in members:
            if s in used_s or s == olds[i] or s == last_src:
                continue
            for o in members:
                if o in used_o or o == s:
                    continue
                srcs.append(s)
                olds.append(o)
                used_s.add(s)
                used_o.add(o)
                if rec(i + 1):
                    return True
                srcs.pop()
                olds.pop()
                used_s.discard(s)
                used_o.discard(o)
        return False

    if rec(0):
        return list(zip(olds, srcs))
    return None


def build_cycle_from_partition(h: IIMGraph, p: HamPartition) -> list[int]:
    """Assemble the cycle segment by segment and validate it."""
    errs = partition_violations(h, p)
    if errs:
        raise PreconditionError(errs[0])
    prev, _, _ = _split(h)
    off = prev.n
    cycle: list[int] = []
    k = p.k
    for i in range(k):
        path = hamiltonian_path(prev, p.v[i], p.w[i], p.c_blocks[i])
        if path is None:
            raise ValidationError(f"no Hamiltonian path from v to w inside C_{i + 1}")
        seg = []
        for c in path:
            seg += [c, off + c]
        pairs = _a_path(prev, p.a_blocks[i], p.x[i], p.u[(i + 1) % k])
        if pairs is None:
            raise ValidationError(f"no alternating path through A_{i + 1} and its anticlones")
        for a, s in pairs:
            seg += [a, off + s]
        for a, b in zip(seg, seg[1:]):
            if not h.graph.has_edge(a, b):
                raise ValidationError(f"segment step {a}-{b} is not an edge")
        cycle += seg
    if not is_hamiltonian_cycle(h.graph, cycle):
        raise ValidationError("assembled sequence is not a Hamiltonian cycle")
    return cycle


def _c_block_ok(prev: Graph, block: int) -> bool:
    if block.bit_count() < 3:
        return False
    sub, _ = induced_subgraph(prev, block)
    return hamiltonian_cycle(sub) is not None


def _set_partitions(items: list[int], k: int, ok) -> list[list[int]]:
    """Unordered partitions of ``items`` into k blocks accepted by ``ok``."""
    out: list[list[int]] = []

    def rec(i: int, blocks: list[int]) -> None:
        if len(blocks) > k or len(items) - i < k - len(blocks):
            return
        if i == len(items):
            if len(blocks) == k and all(ok(b) for b in blocks):
                out.append(list(blocks))
            return
        bit = 1 << items[i]
        for j in range(len(blocks)):
            blocks[j] |= bit
            rec(i + 1, blocks)
            blocks[j] &= ~bit
        blocks.append(bit)
        rec(i + 1, blocks)
        blocks.pop()

    rec(0, [])
    return out


def _connect(prev: Graph, cs: list[int], as_: list[int]) -> HamPartition | None:
    """Choose connectors for a fixed cyclic order of blocks, or None."""
    k = len(cs)
    choice_v: list[list[tuple[int, int, int, int]]] = []
    for i in range(k):
        opts = []
        a_prev, a_cur = as_[(i - 1) % k], as_[i]
        for v in iter_bits(cs[i]):
            us = a_prev & ~prev.closed_row(v)
            if not us:
                continue
            for w in iter_bits(cs[i]):
                if w == v:
                    continue
                xs = a_cur & prev.adj[w]
                if not xs:
                    continue
                if hamiltonian_path(prev, v, w, cs[i]) is None:
                    continue
                for u in iter_bits(us):
                    for x in iter_bits(xs):
                        opts.append((v, w, u, x))
        if not opts:
            return None
        choice_v.append(opts)

    picked: list[tuple[int, int, int, int]] = []

    def rec(i: int) -> bool:
        if i == k:
            # A_j runs from x_j to the anticlone of u_(j+1)
            return all(
                _a_path(prev, as_[j], picked[j][3], picked[(j + 1) % k][2]) is not None
                for j in range(k)
            )
        for opt in choice_v[i]:
            picked.append(opt)
            if rec(i + 1):
                return True
            picked.pop()
        return False

    if not rec(0):
        return None
    v, w, u, x = zip(*picked)
    return HamPartition(tuple(cs), tuple(as_), v, w, u, x)


def find_ham_partition(
    h: IIMGraph, limit: int = PARTITION_LIMIT, max_k: int | None = None
) -> HamPartition | None:
    """Exhaustive search for a partition the cycle builder can use.

    Beyond the three listed conditions, each C_i must have a Hamiltonian
    path between its connectors and each A_i an alternating path, so every
    returned partition builds.
    """
    prev, cset, aset = _split(h)
    if prev.n > limit:
        raise SizeLimitError("find_ham_partition", prev.n, limit)
    if not cset or aset.bit_count() < 3:
        return None
    a_items = list(iter_bits(aset))
    c_items = list(iter_bits(cset))
    top = min(len(a_items) // 3, len(c_items) // 3)
    if max_k is not None:
        top = min(top, max_k)
    for k in range(1, top + 1):
        a_parts = _set_partitions(
            a_items, k, lambda b: b.bit_count() >= 3 and is_independent(prev, b)
        )
        if not a_parts:
            continue
        c_parts = _set_partitions(c_items, k, lambda b: _c_block_ok(prev, b))
        for ap in a_parts:
            for cp in c_parts:
                # fix A_1, try every pairing and cyclic order of the rest
                for rest in permutations(ap[1:]):
                    as_ = [ap[0], *rest]
                    for cperm in permutations(cp):
                        got = _connect(prev, list(cperm), as_)
                        if got is not None:
                            return got
    return None


# -- instances ---------------------------------------------------------------------


def planted_partition_instance(
    rng: np.random.Generator, k: int = 1, c_size: int = 3, a_size: int = 3, density: float = 0.3
) -> IIMGraph:
    """A one-level IIM graph whose seed plants a usable partition.

    Each C_i carries a Hamiltonian cycle, each A_i is independent, and the
    connector edge w-x and non-edge v-u are forced; other pairs are random.
    """
    n = k * (c_size + a_size)
    cs = [list(range(i * c_size, (i + 1) * c_size)) for i in range(k)]
    base = k * c_size
    as_ = [list(range(base + i * a_size, base + (i + 1) * a_size)) for i in range(k)]
    edges = set()
    a_all = {v for b in as_ for v in b}
    for a in range(n):
        for b in range(a + 1, n):
            if a in a_all and b in a_all and any(a in blk and b in blk for blk in as_):
                continue
            if rng.random() < density:
                edges.add((a, b))
    for blk in cs:
        order = list(rng.permutation(blk))
        for i in range(len(order)):
            a, b = int(order[i]), int(order[(i + 1) % len(order)])
            edges.add((min(a, b), max(a, b)))
    for i in range(k):
        v, w = cs[i][0], cs[i][1]
        u = as_[(i - 1) % k][0]
        x = as_[i][1]
        edges.discard((min(v, u), max(v, u)))
        edges.add((min(w, x), max(w, x)))
    g0 = Graph.from_edges(n, sorted(edges))
    bits = 0
    for v in a_all:
        bits |= 1 << v
    return iim_generate(g0, ChoiceSequence((LevelChoice(bits, n),)))
