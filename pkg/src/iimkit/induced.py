"""Induced-subgraph search: an exact oracle plus the clone-ladder and parity finders."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import PreconditionError, SizeLimitError, ValidationError
from .generator import (
    ChoiceSequence,
    CopyKind,
    IIMGraph,
    LevelChoice,
    iim_generate,
)
from .graph import Graph, complete_graph, is_clique, iter_bits

PATTERN_LIMIT = 10


@dataclass(frozen=True)
class InducedEmbedding:
    """``mapping[p]`` is the host vertex carrying pattern vertex p."""

    mapping: tuple[int, ...]
    method: str = "search"
    ladder: "LadderWitness | None" = None

    def pairs(self) -> list[str]:
        return [f"{p}:{v}" for p, v in enumerate(self.mapping)]


def is_induced_embedding(host: Graph, pattern: Graph, mapping) -> bool:
    """Definition check: injective, and edges match in both directions."""
    m = list(mapping)
    if len(m) != pattern.n or len(set(m)) != len(m):
        return False
    if any(not 0 <= v < host.n for v in m):
        return False
    for a, b in combinations(range(pattern.n), 2):
        if pattern.has_edge(a, b) != host.has_edge(m[a], m[b]):
            return False
    return True


def contains_induced(host: Graph, pattern: Graph, limit: int = PATTERN_LIMIT) -> InducedEmbedding | None:
    """Exact backtracking search for an induced copy of ``pattern``."""
    k = pattern.n
    if k > limit:
        raise SizeLimitError("contains_induced", k, limit)
    if k == 0:
        return InducedEmbedding(())
    if k > host.n:
        return None
    # place high-degree pattern vertices first, then keep the order connected
    order: list[int] = []
    left = set(range(k))
    while left:
        linked = [p for p in left if any(pattern.has_edge(p, q) for q in order)]
        pool = linked or list(left)
        p = max(pool, key=lambda x: (pattern.degree(x), -x))
        order.append(p)
        left.remove(p)
    hdeg = host.degrees()
    mapping = [-1] * k
    used = 0

    def extend(i: int) -> bool:
        nonlocal used
        if i == k:
            return True
        p = order[i]
        cand = host.full & ~used
        for q in order[:i]:
            v = mapping[q]
            cand &= host.adj[v] if pattern.has_edge(p, q) else ~host.closed_row(v)
        need = pattern.degree(p)
        for v in iter_bits(cand):
            if hdeg[v] < need:
                continue
            mapping[p] = v
            used |= 1 << v
            if extend(i + 1):
                return True
            used &= ~(1 << v)
        mapping[p] = -1
        return False

    if extend(0):
        return InducedEmbedding(tuple(mapping))
    return None


def missing_edges(f: Graph) -> list[tuple[int, int]]:
    """Edges of K_n absent from F, lexicographic."""
    return [(a, b) for a, b in combinations(range(f.n), 2) if not f.has_edge(a, b)]


# -- clone ladder ---------------------------------------------------------------


@dataclass(frozen=True)
class LadderWitness:
    """Ladder levels (first entry 0) and the vertex set U.

    ``base`` lists the n vertices the ladder grows from; by default it is
    level 0.  A non-default base must lie below ``levels[1]``.
    """

    levels: tuple[int, ...]
    u: int
    base: tuple[int, ...] | None = None

    def base_of(self, h: IIMGraph) -> tuple[int, ...]:
        return self.base if self.base is not None else tuple(h.level_range(0))


def build_ladder(h: IIMGraph, levels, base=None) -> LadderWitness:
    """U generated from the base by copying every prior member at each ladder level."""
    base_t = tuple(base) if base is not None else tuple(h.level_range(0))
    prior = 0
    for v in base_t:
        prior |= 1 << v
    u = prior
    for lvl in list(levels)[1:]:
        start = h.level_start(lvl)
        slice_ = 0
        for v in iter_bits(prior):
            slice_ |= 1 << (start + v)
        u |= slice_
        prior |= slice_
    return LadderWitness(tuple(levels), u, None if base is None else base_t)


def ladder_violations(h: IIMGraph, w: LadderWitness) -> list[str]:
    """Failed ladder conditions in order; empty when the witness is valid."""
    errs = []
    lv = w.levels
    if not lv or lv[0] != 0:
        errs.append("condition 1: first ladder level must be 0")
        return errs
    if any(b <= a for a, b in zip(lv, lv[1:])):
        errs.append("condition 1: ladder levels must increase")
        return errs
    if lv[-1] > h.top_level:
        errs.append("condition 1: ladder level beyond the top level")
        return errs
    base = w.base_of(h)
    base_mask = 0
    for v in base:
        base_mask |= 1 << v
    if len(lv) > 1 and any(h.levels[v] >= lv[1] for v in base):
        errs.append("condition 1: base must lie below the first ladder level")
        return errs
    allowed = base_mask
    for lvl in lv[1:]:
        allowed |= h.level_mask(lvl)
    if w.u & ~allowed:
        errs.append("condition 2: U has vertices outside the ladder levels")
    if w.u & base_mask != base_mask:
        errs.append("condition 3: base is not contained in U")
    prior = base_mask
    for i, lvl in enumerate(lv[1:], start=1):
        start = h.level_start(lvl)
        want = 0
        for v in iter_bits(prior):
            c = start + v
            if h.kinds[c] is not CopyKind.CLONE:
                errs.append(f"condition 4a: copy of {v} at level {lvl} is not a clone")
                return errs
            want |= 1 << c
        if w.u & h.level_mask(lvl) != want:
            errs.append(f"condition 4b: U at level {lvl} is not the clones of earlier U")
            return errs
        prior |= want
    return errs


def lemma_ladder_extract(h: IIMGraph, f: Graph, w: LadderWitness) -> InducedEmbedding:
    """Remove the missing edges of F one ladder level at a time."""
    n = f.n
    base = w.base_of(h)
    if len(base) != n:
        raise PreconditionError(f"ladder base has {len(base)} vertices, pattern has {n}")
    if not is_clique(h.graph, base):
        raise PreconditionError("ladder base is not a clique")
    miss = missing_edges(f)
    if len(w.levels) != len(miss) + 1:
        raise PreconditionError(
            f"ladder has {len(w.levels)} levels, need {len(miss) + 1} for {len(miss)} missing edges"
        )
    errs = ladder_violations(h, w)
    if errs:
        raise ValidationError(errs[0])
    rep = list(base)
    for (c, d), lvl in zip(miss, w.levels[1:]):
        rep[c] = h.copy_at(rep[c], lvl)
        rep[d] = h.copy_at(rep[d], lvl)
    if not is_induced_embedding(h.graph, f, rep):
        raise ValidationError("ladder extraction produced an invalid embedding")
    return InducedEmbedding(tuple(rep), "ladder", w)


def random_ladder_instance(
    f: Graph, extra_levels: int, rng: np.random.Generator
) -> tuple[IIMGraph, LadderWitness]:
    """An IIM graph from K_n with a planted ladder; other choices are random."""
    n = f.n
    m = len(missing_edges(f))
    top = m + extra_levels
    chosen = sorted(rng.choice(np.arange(1, top + 1), size=m, replace=False).tolist()) if m else []
    levels = [0] + [int(x) for x in chosen]
    prior = (1 << n) - 1
    seq = []
    for i in range(top):
        lvl = i + 1
        length = n << i
        bits = 0
        for v in np.flatnonzero(rng.random(length) < 0.5):
            bits |= 1 << int(v)
        if lvl in levels:
            bits &= ~prior
            prior |= prior << (n << i)
        seq.append(LevelChoice(bits, length))
    h = iim_generate(complete_graph(n), ChoiceSequence(tuple(seq)))
    return h, build_ladder(h, levels)


# -- parity finder ------------------------------------------------------------------


def eligible_descendants(h: IIMGraph, a: int, after: int) -> dict[int, tuple[int, int]]:
    """Per level above ``after``: (even mask, odd mask) of eligible descendants of a.

    Eligible means the descendant and all its ancestors strictly between it
    and ``a`` sit above level ``after``.  Parity counts anticlone links.
    """
    even, odd = 1 << a, 0
    out = {}
    for lvl in range(after + 1, h.top_level + 1):
        c = h.choices.levels[lvl - 1].bits
        start = h.level_start(lvl)
        if lvl <= h.levels[a]:
            continue
        ne = ((even & ~c) | (odd & c)) << start
        no = ((odd & ~c) | (even & c)) << start
        out[lvl] = (ne, no)
        even |= ne
        odd |= no
    return out


def is_eligible(h: IIMGraph, y: int, a: int, after: int) -> bool:
    """Predicate form of the descendant restriction used by the parity finder."""
    if y == a or h.levels[y] <= after:
        return False
    v = h.precopy[y]
    while v is not None and v != a:
        if h.levels[v] <= after:
            return False
        v = h.precopy[v]
    return v == a


@dataclass
class ProgressState:
    """Where the parity finder stopped.

    ``blocked[level]`` names the pattern vertex whose eligible descendants
    at that level are all odd.
    """

    reps: list[int]
    removed: list[tuple[int, int]]
    pending: tuple[int, int] | None
    last_level: int
    blocked: dict[int, int] = field(default_factory=dict)
    odd_levels: dict[int, list[int]] = field(default_factory=dict)
    threshold: int = 0
    ladder: LadderWitness | None = None
    reason: str = ""


def _odd_only_levels(table: dict[int, tuple[int, int]]) -> list[int]:
    return [lvl for lvl, (ev, _) in sorted(table.items()) if not ev]


def find_induced_via_parity(h: IIMGraph, f: Graph) -> InducedEmbedding | ProgressState:
    """Remove missing edges by swapping in same-level even-parity descendants.

    On a blocked edge the odd-only level sets are returned; if one is long
    enough a clone ladder is built from the first anticlone there and
    handed to :func:`lemma_ladder_extract`.
    """
    n = f.n
    if h.n0 != n or not is_clique(h.graph, h.level_mask(0)):
        raise PreconditionError("level 0 must be K_n with n = |V(F)|")
    miss = missing_edges(f)
    reps = list(range(n))
    last = 0
    removed: list[tuple[int, int]] = []
    threshold = n + len(miss)
    for i, j in miss:
        ti = eligible_descendants(h, reps[i], last)
        tj = eligible_descendants(h, reps[j], last)
        hit = None
        for lvl in range(last + 1, h.top_level + 1):
            ei = ti.get(lvl, (0, 0))[0]
            ej = tj.get(lvl, (0, 0))[0]
            if ei and ej:
                hit = (lvl, (ei & -ei).bit_length() - 1, (ej & -ej).bit_length() - 1)
                break
        if hit is None:
            blocked = {}
            for lvl in range(last + 1, h.top_level + 1):
                blocked[lvl] = i if not ti.get(lvl, (0, 0))[0] else j
            odd = {i: _odd_only_levels(ti), j: _odd_only_levels(tj)}
            state = ProgressState(
                reps, removed, (i, j), last, blocked, odd, threshold, None,
                "no level with even-parity descendants of both endpoints",
            )
            for q in (i, j):
                lv = odd[q]
                if len(lv) >= threshold:
                    z = h.copy_at(reps[q], lv[0])
                    fl = [z]
                    for lvl in lv[1:n]:
                        fl.append(h.copy_at(z, lvl))
                    w = build_ladder(h, [0] + lv[n : n + len(miss)], base=fl)
                    state.ladder = w
                    return lemma_ladder_extract(h, f, w)
            return state
        lvl, yi, yj = hit
        reps[i], reps[j] = yi, yj
        last = lvl
        removed.append((i, j))
    if not is_induced_embedding(h.graph, f, reps):
        raise ValidationError("parity finder produced an invalid embedding")
    return InducedEmbedding(tuple(reps), "parity")


def progress_violations(h: IIMGraph, s: ProgressState) -> list[str]:
    """Re-derive a blocking certificate from scratch via the genealogy predicate."""
    errs = []
    if s.pending is None:
        return errs
    for lvl, q in s.blocked.items():
        a = s.reps[q]
        for y in h.level_range(lvl):
            if is_eligible(h, y, a, s.last_level):
                path_parity = 0
                v = y
                while v != a:
                    path_parity ^= h.kinds[v] is CopyKind.ANTICLONE
                    v = h.precopy[v]
                if path_parity == 0:
                    errs.append(f"level {lvl}: vertex {y} is an even descendant of {a}")
                    break
    i, j = s.pending
    for lvl in range(s.last_level + 1, h.top_level + 1):
        if lvl not in s.blocked:
            errs.append(f"level {lvl} missing from the certificate")
    # the partial embedding must already realise K_n minus the removed edges
    kn = complete_graph(len(s.reps))
    rows = list(kn.adj)
    for a, b in s.removed:
        rows[a] &= ~(1 << b)
        rows[b] &= ~(1 << a)
    if not is_induced_embedding(h.graph, Graph.from_rows(rows), s.reps):
        errs.append("partial embedding is not K_n minus the removed edges")
    if (i, j) in s.removed:
        errs.append("pending edge already removed")
    return errs
