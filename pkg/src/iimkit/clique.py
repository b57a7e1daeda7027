"""Clique and chromatic numbers, non-adjacent triples, and colouring extension."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import _kernels
from .errors import PreconditionError, SizeLimitError, ValidationError
from .generator import (
    ChoiceSequence,
    IIMGraph,
    LevelChoice,
    iim_from_graph,
    iim_generate,
    iim_step,
)
from .graph import Graph, VertexSet, complete_graph, empty_graph, is_clique, iter_bits

CLIQUE_LIMIT = 64
CHROMATIC_LIMIT = 20
TRIPLE_LIMIT = 24
SLOW_GROWTH_LIMIT = 8


# -- exact clique number ----------------------------------------------------


def max_clique_mask(g: Graph, within: int | None = None, limit: int = CLIQUE_LIMIT) -> int:
    if g.n > limit:
        raise SizeLimitError("clique_number", g.n, limit)
    cand = g.full if within is None else within
    return _kernels.max_clique(g.adj, g.n, cand)


def clique_number(g: Graph, limit: int = CLIQUE_LIMIT) -> tuple[int, VertexSet]:
    """Exact maximum clique: (size, witness)."""
    m = max_clique_mask(g, limit=limit)
    return m.bit_count(), VertexSet(m, g.n)


def clique_lower_bound(k: int) -> int:
    """2 + ceil(2(k - 5) / 3), returned raw (it can drop below 2 for k < 5)."""
    if k < 0:
        raise PreconditionError("k must be non-negative")
    return 2 + -(-2 * (k - 5) // 3)


def trivial_clique_bound(k: int) -> int:
    """ceil((k + 1) / 2) from a vertex together with its clones or anticlones."""
    return (k + 2) // 2


def log_star(n: float) -> int:
    """Iterated base-2 logarithm: how many log2 applications bring n to <= 1."""
    if n < 1:
        raise PreconditionError("log* is defined here for n >= 1")
    k = 0
    while n > 1:
        n = math.log2(n)
        k += 1
    return k


# -- non-adjacent triples ----------------------------------------------------


@dataclass(frozen=True)
class NonAdjacentTriple:
    """Parts A1, A2, A3 (bit masks) with witnesses v_i in A_i missing all of A_(i+1)."""

    parts: tuple[int, int, int]
    witnesses: tuple[int, int, int]

    def sets(self, n: int) -> tuple[VertexSet, VertexSet, VertexSet]:
        return tuple(VertexSet(p, n) for p in self.parts)  # type: ignore[return-value]

    def as_lists(self) -> dict:
        return {
            "parts": [sorted(iter_bits(p)) for p in self.parts],
            "witnesses": list(self.witnesses),
        }


def triple_violations(g: Graph, t: NonAdjacentTriple, clique_size: int | None = None) -> list[str]:
    """Every failed condition of the triple definition, empty when valid."""
    errs = []
    a = t.parts
    if a[0] & a[1] or a[1] & a[2] or a[0] & a[2]:
        errs.append("parts overlap")
    for i in range(3):
        v = t.witnesses[i]
        if not a[i] >> v & 1:
            errs.append(f"witness {v} not in part {i + 1}")
        nxt = a[(i + 1) % 3]
        if g.closed_row(v) & nxt:
            errs.append(f"witness {v} touches part {(i + 1) % 3 + 1}")
        if clique_size is not None:
            if not is_clique(g, a[i]):
                errs.append(f"part {i + 1} is not a clique")
            if a[i].bit_count() != clique_size:
                errs.append(f"part {i + 1} has size {a[i].bit_count()}")
    return errs


def validate_triple(g: Graph, t: NonAdjacentTriple, clique_size: int | None = None) -> bool:
    return not triple_violations(g, t, clique_size)


def _clique_with(g: Graph, v: int, within: int, size: int) -> int | None:
    """Lowest-lexicographic clique of ``size`` containing v inside ``within``."""

    def grow(cur: int, cand: int, need: int) -> int | None:
        if need == 0:
            return cur
        if cand.bit_count() < need:
            return None
        for u in iter_bits(cand):
            cand &= ~(1 << u)
            got = grow(cur | (1 << u), cand & g.adj[u], need - 1)
            if got is not None:
                return got
        return None

    if not within >> v & 1:
        return None
    return grow(1 << v, within & g.adj[v], size - 1)


def _reach(g: Graph, u: int, w: int, s: int) -> int | None:
    """An s-clique through w avoiding N[u], if w is outside N[u]."""
    outside = g.full & ~g.closed_row(u)
    if not outside >> w & 1:
        return None
    if s == 1:
        return 1 << w
    if s == 2:
        nb = g.adj[w] & outside
        return (1 << w) | (nb & -nb) if nb else None
    return _clique_with(g, w, outside, s)


def find_non_adjacent_triple(
    g: Graph, clique_size: int = 2, limit: int = TRIPLE_LIMIT
) -> NonAdjacentTriple | None:
    """Search for a triple whose parts are cliques of the given size.

    Write u -> w when w lies outside N[u] in an s-clique avoiding N[u].
    A triple is exactly a directed 3-cycle v1 -> v2 -> v3 -> v1: the part
    of v_(i+1) is such a clique, and parts are automatically disjoint since
    each lies inside N[v_i] and outside N[v_(i-1)].  The smallest cycle in
    lexicographic order is returned.
    """
    if g.n > limit:
        raise SizeLimitError("find_non_adjacent_triple", g.n, limit)
    s = clique_size
    if s < 1:
        raise PreconditionError("clique size must be positive")
    n = g.n
    succ = [0] * n
    part: dict[tuple[int, int], int] = {}
    for u in range(n):
        for w in iter_bits(g.full & ~g.closed_row(u)):
            c = _reach(g, u, w, s)
            if c is not None:
                succ[u] |= 1 << w
                part[u, w] = c
    pred = [0] * n
    for u in range(n):
        for w in iter_bits(succ[u]):
            pred[w] |= 1 << u
    for v1 in range(n):
        for v2 in iter_bits(succ[v1]):
            closing = succ[v2] & pred[v1]
            if closing:
                v3 = (closing & -closing).bit_length() - 1
                return NonAdjacentTriple(
                    (part[v3, v1], part[v1, v2], part[v2, v3]), (v1, v2, v3)
                )
    return None


@dataclass(frozen=True)
class TripleGrowth:
    triple: NonAdjacentTriple
    case: int
    """1: two or more witnesses cloned, 2: exactly one, 3: none."""
    graph: IIMGraph


def grow_triple(h: IIMGraph, t: NonAdjacentTriple, c: LevelChoice) -> TripleGrowth:
    """Apply one step and return the enlarged triple from the three-case argument."""
    errs = triple_violations(h.graph, t)
    if errs:
        raise ValidationError("input triple invalid: " + "; ".join(errs))
    for p in t.parts:
        if not is_clique(h.graph, p):
            raise ValidationError("input triple parts must be cliques")
    h2 = iim_step(h, c)
    n = h.n
    a = list(t.parts)
    v = t.witnesses
    copy = [n + x for x in v]
    cloned = [i for i in range(3) if not c.is_anticlone(v[i])]
    if len(cloned) >= 2:
        i, j = cloned[:2]
        b = a.copy()
        b[i] |= 1 << copy[i]
        b[j] |= 1 << copy[j]
        out = NonAdjacentTriple(tuple(b), v)
        case = 1
    elif len(cloned) == 1:
        i = cloned[0]
        j, k = (i + 1) % 3, (i + 2) % 3
        b = a.copy()
        b[i] |= 1 << copy[i]
        b[k] |= 1 << copy[j]
        out = NonAdjacentTriple(tuple(b), v)
        case = 2
    else:
        b1 = a[0] | 1 << copy[2]
        b2 = a[1] | 1 << copy[0]
        b3 = a[2] | 1 << copy[1]
        out = NonAdjacentTriple((b3, b2, b1), (copy[1], copy[0], copy[2]))
        case = 3
    return TripleGrowth(out, case, h2)


def growth_violations(g_after: Graph, before: NonAdjacentTriple, after: NonAdjacentTriple) -> list[str]:
    """Check the three claimed properties: containment, cliques, two parts grown."""
    errs = triple_violations(g_after, after)
    grown = 0
    used = set()
    for a in before.parts:
        hosts = [j for j, b in enumerate(after.parts) if a & b == a]
        if len(hosts) != 1:
            errs.append("part not contained in exactly one new part")
            continue
        j = hosts[0]
        used.add(j)
        diff = after.parts[j].bit_count() - a.bit_count()
        if diff == 1:
            grown += 1
        elif diff != 0:
            errs.append(f"part grew by {diff}")
    if len(used) != 3:
        errs.append("old parts do not map onto distinct new parts")
    for b in after.parts:
        if not is_clique(g_after, b):
            errs.append("new part is not a clique")
    if grown < 2:
        errs.append(f"only {grown} parts grew")
    return errs


# -- chromatic number ----------------------------------------------------------


@dataclass(frozen=True)
class Coloring:
    colors: tuple[int, ...]
    c: int

    @classmethod
    def of(cls, colors) -> "Coloring":
        colors = tuple(colors)
        return cls(colors, max(colors) + 1 if colors else 0)

    def conflicts(self, g: Graph) -> list[tuple[int, int]]:
        return [(u, v) for u, v in g.edges() if self.colors[u] == self.colors[v]]

    def is_proper(self, g: Graph) -> bool:
        return len(self.colors) == g.n and not self.conflicts(g)

    def classes(self) -> list[int]:
        out = [0] * self.c
        for v, k in enumerate(self.colors):
            out[k] |= 1 << v
        return out


def _k_colorable(g: Graph, k: int, seed_clique: int) -> list[int] | None:
    n = g.n
    colors = [-1] * n
    for i, v in enumerate(iter_bits(seed_clique)):
        colors[v] = i
    adj = g.adj

    def pick() -> int:
        best, best_key = -1, None
        for v in range(n):
            if colors[v] >= 0:
                continue
            sat = len({colors[u] for u in iter_bits(adj[v]) if colors[u] >= 0})
            key = (sat, adj[v].bit_count())
            if best_key is None or key > best_key:
                best, best_key = v, key
        return best

    def solve(left: int) -> bool:
        if left == 0:
            return True
        v = pick()
        used = {colors[u] for u in iter_bits(adj[v]) if colors[u] >= 0}
        top = max(colors) + 1
        # a fresh colour is interchangeable with any other unused one
        for col in range(min(k, top + 1)):
            if col in used:
                continue
            colors[v] = col
            if solve(left - 1):
                return True
        colors[v] = -1
        return False

    left = n - seed_clique.bit_count()
    return colors if solve(left) else None


def chromatic_number(g: Graph, limit: int = CHROMATIC_LIMIT) -> tuple[int, Coloring]:
    """Exact chromatic number with a witness colouring (DSATUR backtracking)."""
    if g.n > limit:
        raise SizeLimitError("chromatic_number", g.n, limit)
    if g.n == 0:
        return 0, Coloring((), 0)
    q = max_clique_mask(g, limit=max(limit, CLIQUE_LIMIT))
    k = q.bit_count()
    while True:
        cols = _k_colorable(g, k, q)
        if cols is not None:
            col = Coloring(tuple(cols), k)
            return k, col
        k += 1


# -- rainbow pairs and extension -------------------------------------------------


def _rainbow_vertices(g: Graph, col: Coloring) -> list[int]:
    if not col.is_proper(g):
        raise ValidationError("colouring is not proper")
    classes = col.classes()
    out = []
    for v in range(g.n):
        closed = g.closed_row(v)
        anti = g.full & ~closed
        if all(cl & closed for cl in classes) and all(cl & anti for cl in classes):
            out.append(v)
    return out


def find_rainbow_pair(g: Graph, col: Coloring) -> tuple[int, int] | None:
    """Two vertices each seeing every colour in N[v] and in V - N[v]."""
    r = _rainbow_vertices(g, col)
    return (r[0], r[1]) if len(r) >= 2 else None


def extend_coloring(h_before: IIMGraph, col: Coloring, c: LevelChoice) -> tuple[Coloring, int, IIMGraph]:
    """Keep old colours; give each new vertex its lowest free old colour.

    Vertices with no free colour share one fresh colour, which is proper
    because a level is an independent set.
    """
    if not col.is_proper(h_before.graph):
        raise ValidationError("colouring is not proper")
    h = iim_step(h_before, c)
    n = h_before.n
    palette = col.c
    colors = list(col.colors)
    need_new = False
    for v in range(n, 2 * n):
        seen = 0
        for u in iter_bits(h.graph.adj[v]):
            seen |= 1 << colors[u]
        free = ((1 << palette) - 1) & ~seen
        if free:
            colors.append((free & -free).bit_length() - 1)
        else:
            colors.append(palette)
            need_new = True
    size = palette + 1 if need_new else palette
    return Coloring(tuple(colors), size), size, h


# -- fixed instances ---------------------------------------------------------------

TRIPLE_EXAMPLE_CHOICES = "L1=0x1;L2=0x2;L3=0xd"
TRIPLE_EXAMPLE = NonAdjacentTriple((0b101, 0b1001000, 0b10010), (2, 3, 1))
BIPARTITE_EXAMPLE_CHOICES = "L1=0x2;L2=0xd"


def triple_example_graph() -> IIMGraph:
    """An IIM_3(K_1) graph with clique number 2 and a triple of K_2 parts."""
    return iim_generate(complete_graph(1), ChoiceSequence.from_hex(TRIPLE_EXAMPLE_CHOICES, 1))


def bipartite_example_graph() -> IIMGraph:
    """An IIM_2(2K_1) graph that is 2-colourable."""
    return iim_generate(empty_graph(2), ChoiceSequence.from_hex(BIPARTITE_EXAMPLE_CHOICES, 2))


# -- slow clique growth ----------------------------------------------------------------


def maximum_cliques(g: Graph, size: int) -> list[int]:
    """Every clique of exactly ``size`` vertices (callers pass the clique number)."""
    out = []

    def grow(cur: int, cand: int, need: int) -> None:
        if need == 0:
            out.append(cur)
            return
        while cand and cand.bit_count() >= need:
            low = cand & -cand
            u = low.bit_length() - 1
            cand ^= low
            grow(cur | low, cand & g.adj[u], need - 1)

    grow(0, g.full, size)
    return out


def _misses(g: Graph, a: int, b: int) -> bool:
    """Some vertex of a is non-adjacent to every vertex of b."""
    return any(not (g.closed_row(v) & b) for v in iter_bits(a))


def _non_adjacent_pair(g: Graph, a: int, b: int) -> bool:
    return _misses(g, a, b) and _misses(g, b, a)


def maximal_non_adjacent_tuple(g: Graph, cliques: list[int]) -> list[int]:
    """Greedy maximal family of cliques that are pairwise non-adjacent."""
    chosen: list[int] = []
    for q in cliques:
        if all(_non_adjacent_pair(g, q, a) for a in chosen):
            chosen.append(q)
    return chosen


class StallError(PreconditionError):
    """The tuple of maximum cliques has fewer than two members."""

    def __init__(self, level: int):
        super().__init__(f"slow clique growth stalls at level {level}: tuple size < 2")
        self.level = level


@dataclass
class SlowGrowth:
    choices: ChoiceSequence
    graph: IIMGraph
    omega: list[int] = field(default_factory=list)
    """omega[i] is the clique number of H_i."""
    tuple_sizes: list[tuple[int, int]] = field(default_factory=list)
    """(level, tuple size) at the start of each round."""


def _adjacent_sets(g: Graph, a: int, b: int) -> bool:
    """Every vertex of a has a neighbour in b and vice versa."""
    return all(g.adj[v] & b for v in iter_bits(a)) and all(g.adj[v] & a for v in iter_bits(b))


def construct_slow_clique_growth(
    steps: int, strict: bool = False, limit: int = SLOW_GROWTH_LIMIT
) -> SlowGrowth:
    """Grow K_1 by anticloning one group of maximum cliques per level.

    Each round takes a greedy maximal non-adjacent tuple A_1..A_k of
    maximum cliques and files every other maximum clique under the first
    A_j it is adjacent to (failing that, the first it is not non-adjacent
    to).  The round then spends one level per group: the vertices of the
    group's cliques are anticloned and every other vertex is cloned.  A
    tracked clique that gains a new common neighbour absorbs it.  With
    k = 1 the round is a single level, or a ``StallError`` when ``strict``.
    """
    if steps > limit:
        raise SizeLimitError("construct_slow_clique_growth", steps, limit)
    h = iim_from_graph(complete_graph(1))
    omega = [1]
    sizes: list[tuple[int, int]] = []
    while h.top_level < steps:
        cliques = maximum_cliques(h.graph, omega[-1])
        tup = maximal_non_adjacent_tuple(h.graph, cliques)
        sizes.append((h.top_level, len(tup)))
        if len(tup) < 2 and strict:
            raise StallError(h.top_level)
        owner = []
        for q in cliques:
            if q in tup:
                owner.append(tup.index(q))
                continue
            j = next((j for j, a in enumerate(tup) if _adjacent_sets(h.graph, q, a)), None)
            if j is None:
                j = next(j for j, a in enumerate(tup) if not _non_adjacent_pair(h.graph, q, a))
            owner.append(j)
        tracked = list(cliques)
        for j in range(len(tup)):
            if h.top_level >= steps:
                break
            bits = 0
            for q, o in zip(tracked, owner):
                if o == j:
                    bits |= q
            h = iim_step(h, LevelChoice(bits, h.n))
            new = h.level_mask(h.top_level)
            for i, q in enumerate(tracked):
                common = new
                for v in iter_bits(q):
                    common &= h.graph.adj[v]
                if common:
                    tracked[i] = q | (common & -common)
            wn, _ = clique_number(h.graph, limit=max(CLIQUE_LIMIT, h.n))
            if wn > omega[-1] + 1:
                raise ValidationError("clique number grew by more than one in a level")
            omega.append(wn)
    return SlowGrowth(h.choices, h, omega, sizes)
