"""Distances, diameter, domination and the dual-dominating constructions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import PreconditionError, SizeLimitError
from .generator import (
    DEFAULT_BUDGET_BITS,
    IIMGraph,
    enumerate_iim,
    first_anticlone_level,
    iim_from_graph,
    sample_iim,
)
from .graph import Graph, SetLike, VertexSet, is_clique, is_connected, iter_bits
from .reports import VerificationReport

INF = math.inf
DOMINATION_LIMIT = 40
UNREACHABLE = -1


# -- distances -------------------------------------------------------------


def distance_matrix(g: Graph) -> np.ndarray:
    """All-pairs hop counts by BFS; unreachable pairs hold -1."""
    n = g.n
    d = np.full((n, n), UNREACHABLE, dtype=np.int64)
    for s in range(n):
        d[s, s] = 0
        seen = 1 << s
        frontier = seen
        k = 0
        while frontier:
            k += 1
            nxt = 0
            for u in iter_bits(frontier):
                nxt |= g.adj[u]
            nxt &= ~seen
            for v in iter_bits(nxt):
                d[s, v] = k
            seen |= nxt
            frontier = nxt
    return d


def eccentricities(g: Graph) -> list[float]:
    return [INF if e < 0 else e for e in _kernels.eccentricities(g.adj, g.n)]


def diameter(g: Graph) -> float:
    """Largest pairwise distance; ``inf`` if disconnected."""
    if g.n == 0:
        raise PreconditionError("diameter needs at least one vertex")
    ecc = _kernels.eccentricities(g.adj, g.n)
    return INF if min(ecc) < 0 else max(ecc)


# -- domination ------------------------------------------------------------


@dataclass(frozen=True)
class DominatingSetResult:
    """A dominating set with per-vertex certificates.

    ``dominator[v]`` is v itself for members, otherwise a neighbour in the set.
    ``non_neighbor[v]`` (dual sets only) is a member w != v with vw not an edge.
    """

    set: VertexSet
    dominator: tuple[int, ...]
    non_neighbor: tuple[int, ...] | None = None
    exact: bool = False
    flagged: str | None = None

    @property
    def size(self) -> int:
        return len(self.set)

    @property
    def is_dual(self) -> bool:
        return self.non_neighbor is not None

    def validate(self, g: Graph) -> bool:
        d = self.set.mask
        for v in range(g.n):
            w = self.dominator[v]
            if not d >> w & 1:
                return False
            if w != v and not g.has_edge(v, w):
                return False
        if self.non_neighbor is not None:
            for v in range(g.n):
                w = self.non_neighbor[v]
                if w == v or not d >> w & 1 or g.has_edge(v, w):
                    return False
        return True


def is_dominating(g: Graph, d: SetLike) -> bool:
    dm = g.mask(d)
    covered = dm
    for w in iter_bits(dm):
        covered |= g.adj[w]
    return covered == g.full


def _anti_covered(g: Graph, dm: int) -> int:
    """Vertices having some member of ``dm`` as a distinct non-neighbour."""
    out = 0
    for w in iter_bits(dm):
        out |= g.full & ~g.closed_row(w)
    return out


def is_dual_dominating(g: Graph, d: SetLike) -> bool:
    dm = g.mask(d)
    return is_dominating(g, dm) and _anti_covered(g, dm) == g.full


def certify(g: Graph, d: SetLike, exact: bool = False, flagged: str | None = None) -> DominatingSetResult:
    """Build certificates for ``d``; raise if it does not dominate."""
    dm = g.mask(d)
    dom = []
    for v in range(g.n):
        if dm >> v & 1:
            dom.append(v)
            continue
        hit = g.adj[v] & dm
        if not hit:
            raise PreconditionError(f"set does not dominate vertex {v}")
        dom.append((hit & -hit).bit_length() - 1)
    non = None
    if _anti_covered(g, dm) == g.full:
        non = []
        for v in range(g.n):
            cand = dm & ~g.closed_row(v)
            non.append((cand & -cand).bit_length() - 1)
        non = tuple(non)
    return DominatingSetResult(VertexSet(dm, g.n), tuple(dom), non, exact, flagged)


def min_dominating_mask(g: Graph, limit: int = DOMINATION_LIMIT) -> int:
    if g.n > limit:
        raise SizeLimitError("domination_number", g.n, limit)
    return _kernels.min_dominating_set(g.adj, g.n)


def domination_number(g: Graph, limit: int = DOMINATION_LIMIT) -> DominatingSetResult:
    """Minimum dominating set by branch and bound, with certificate."""
    return certify(g, min_dominating_mask(g, limit), exact=True)


def dom(g: Graph, limit: int = DOMINATION_LIMIT) -> int:
    return min_dominating_mask(g, limit).bit_count()


# -- dual dominating persistence -------------------------------------------


def dual_dominating_persistence(
    g0: Graph, d: SetLike, steps: int, budget_bits: int = DEFAULT_BUDGET_BITS, seed_name: str = "G"
) -> VerificationReport:
    dm = g0.mask(d)
    if not is_dual_dominating(g0, dm):
        raise PreconditionError("set is not dual dominating in the seed graph")
    rep = VerificationReport("dual-persistence", seed_name, steps, bound="dual dominating")
    rep.params = {"set": sorted(iter_bits(dm))}
    for seq, h in enumerate_iim(g0, steps, budget_bits):
        rep.checked += 1
        if not is_dual_dominating(h.graph, dm):
            rep.violate(seq.to_hex(), dominating=is_dominating(h.graph, dm))
    return rep.finish()


# -- K_n construction -------------------------------------------------------


@dataclass(frozen=True)
class KnDomination:
    result: DominatingSetResult
    first_level: int
    a_l: int
    bound: int
    base_depth: int
    """1 when a K_1 seed was read as a K_2 seed rooted at level 1."""


def _chain_copy(h: IIMGraph, v: int, level: int) -> int:
    return (h.n0 << (level - 1)) + v


def construct_dominating_set_kn(h: IIMGraph) -> KnDomination:
    """The explicit set {v_0, v_(l-1), x, y} or {v_0, v_(l-1), x} + U.

    ``l`` is the first level holding an anticlone.  A K_1 seed whose first
    step is a clone is handled as the K_2 seed formed by level 0 and 1.
    The set is always re-validated; if validation fails the exact solver is
    used instead and the result is flagged.
    """
    g = h.graph
    if not is_clique(g, h.level_mask(0)):
        raise PreconditionError("seed graph is not complete")
    first = first_anticlone_level(h)
    if first is None:
        raise PreconditionError("graph has no anticlone")
    base = 1 if h.n0 == 1 and first >= 2 else 0
    base_mask = h.prefix_mask(base)
    bits = h.choices.levels[first - 1].bits
    a_l = (bits & base_mask).bit_count()
    l_rel = first - base
    bound = 4 if a_l == 0 else a_l + 3

    v0 = 0
    chain = [v0]
    for j in range(1, l_rel):
        chain.append(_chain_copy(h, chain[-1], base + j))
    members = {v0}
    if l_rel == 1:
        # every copy of a seed vertex at level 1 that is an anticlone is isolated in H_1
        members |= {_chain_copy(h, u, first) for u in iter_bits(bits & base_mask)}
        if a_l == 0:
            members.add(_chain_copy(h, (bits & -bits).bit_length() - 1, first))
    else:
        members.add(chain[-1])
        members.add(_chain_copy(h, 1, base + 1))
        if a_l == 0:
            members.add(_chain_copy(h, (bits & -bits).bit_length() - 1, first))
        else:
            members |= {_chain_copy(h, u, first) for u in iter_bits(bits & base_mask)}
    dm = 0
    for v in members:
        dm |= 1 << v
    if is_dominating(g, dm):
        res = certify(g, dm)
    else:
        res = certify(g, min_dominating_mask(g), exact=True, flagged="construction-failed")
    return KnDomination(res, first, a_l, bound, base)


# -- general-seed quantities --------------------------------------------------


def b_of_g(g: Graph) -> tuple[int, tuple[int, int]]:
    """min |N(u) & N(v)| over non-adjacent pairs, with a minimising pair."""
    best = None
    pair = None
    for u in range(g.n):
        for v in iter_bits(g.full & ~g.closed_row(u) & ~((1 << (u + 1)) - 1)):
            c = (g.adj[u] & g.adj[v]).bit_count()
            if best is None or c < best:
                best, pair = c, (u, v)
    if best is None:
        raise PreconditionError("graph is complete; no non-adjacent pair")
    return best, pair


def construct_dominating_set_general(h: IIMGraph, g0: Graph) -> DominatingSetResult:
    """Dom(G) + Z(G) + {u, v_(l-1), y}; size at most dom(G) + b(G) + 3."""
    base = domination_number(g0).set.mask
    b, (u, v) = b_of_g(g0)
    common = g0.adj[u] & g0.adj[v]
    z = 0
    for w in iter_bits(common):
        if not (g0.full & ~g0.closed_row(w)) & z:
            non = g0.full & ~g0.closed_row(w)
            z |= non & -non
    dm = base | z | (1 << u)
    first = first_anticlone_level(h)
    if first is not None:
        chain = v
        for j in range(1, first):
            chain = _chain_copy(h, chain, j)
        bits = h.choices.levels[first - 1].bits
        dm |= 1 << chain
        dm |= 1 << _chain_copy(h, (bits & -bits).bit_length() - 1, first)
    g = h.graph
    if is_dominating(g, dm):
        return certify(g, dm)
    return certify(g, min_dominating_mask(g), exact=True, flagged="construction-failed")


# -- theorem checks -----------------------------------------------------------


def diameter_bound(g0: Graph) -> int:
    return max(diameter(g0), 5) if is_connected(g0) else 6


def corollary_bound(g0: Graph) -> int:
    return max(diameter(g0), 6) if is_connected(g0) else 6


def verify_diameter_theorem(
    g0: Graph,
    steps: int = 1,
    budget_bits: int = DEFAULT_BUDGET_BITS,
    seed_name: str = "G",
    start: int = 0,
    stop: int | None = None,
) -> VerificationReport:
    """Check the one-step diameter bound on every connected H; disconnected H are skipped."""
    if steps != 1:
        raise PreconditionError("the one-step diameter bound applies to steps = 1")
    bound = diameter_bound(g0)
    rep = VerificationReport("diameter", seed_name, steps, bound=bound)
    for seq, h in enumerate_iim(g0, steps, budget_bits, start, stop):
        d = diameter(h.graph)
        if d == INF:
            rep.skipped += 1
            continue
        rep.checked += 1
        rep.observe(d, seq.to_hex())
        if d > bound:
            rep.violate(seq.to_hex(), diameter=d)
    return rep.finish()


def verify_diameter_corollary(
    g0: Graph, steps: int, samples: int, p: float = 0.5, seed: int = 0, seed_name: str = "G"
) -> VerificationReport:
    """Sampled check of diam(H) <= max(diam(G), 6) over connected H."""
    bound = corollary_bound(g0)
    rep = VerificationReport("diameter-corollary", seed_name, steps, bound=bound)
    rep.params = {"samples": samples, "p": p, "rng": seed}
    rng = np.random.Generator(np.random.PCG64(seed))
    for _ in range(samples):
        seq, h = sample_iim(g0, steps, p, rng)
        d = diameter(h.graph)
        if d == INF:
            rep.skipped += 1
            continue
        rep.checked += 1
        rep.observe(d, seq.to_hex())
        if d > bound:
            rep.violate(seq.to_hex(), diameter=d)
    return rep.finish()


def verify_domination_kn(
    n: int,
    steps: int,
    budget_bits: int = DEFAULT_BUDGET_BITS,
    start: int = 0,
    stop: int | None = None,
) -> VerificationReport:
    """Exact dom(H) and the explicit construction against 4 / a_l + 3."""
    from .graph import complete_graph

    g0 = complete_graph(n)
    rep = VerificationReport("domination-kn", f"K{n}", steps, bound="4 if a_l=0 else a_l+3")
    for seq, h in enumerate_iim(g0, steps, budget_bits, start, stop):
        if first_anticlone_level(h) is None:
            rep.skipped += 1
            continue
        rep.checked += 1
        k = construct_dominating_set_kn(h)
        exact = dom(h.graph)
        rep.observe(exact, seq.to_hex())
        if k.result.flagged:
            rep.count("construction_fallback")
        if exact > k.bound:
            rep.violate(seq.to_hex(), dom=exact, bound=k.bound, a_l=k.a_l)
        if not k.result.validate(h.graph) or k.result.size > k.bound:
            rep.violate(
                seq.to_hex(), construction=sorted(k.result.set), bound=k.bound, a_l=k.a_l
            )
    return rep.finish()


def verify_domination_bound_general(
    g0: Graph,
    steps: int,
    budget_bits: int = DEFAULT_BUDGET_BITS,
    seed_name: str = "G",
    start: int = 0,
    stop: int | None = None,
) -> VerificationReport:
    d0 = dom(g0)
    if d0 < 2:
        raise PreconditionError(f"seed has domination number {d0}; the bound needs >= 2")
    b, pair = b_of_g(g0)
    bound = d0 + b + 3
    rep = VerificationReport("domination-general", seed_name, steps, bound=bound)
    rep.params = {"dom_seed": d0, "b": b, "pair": list(pair)}
    for seq, h in enumerate_iim(g0, steps, budget_bits, start, stop):
        rep.checked += 1
        exact = dom(h.graph)
        rep.observe(exact, seq.to_hex())
        if exact > bound:
            rep.violate(seq.to_hex(), dom=exact)
        c = construct_dominating_set_general(h, g0)
        if c.flagged:
            rep.count("construction_fallback")
        elif c.size > bound:
            rep.violate(seq.to_hex(), construction=sorted(c.set))
    return rep.finish()


def all_clone_preserves_diameter(g: Graph) -> bool:
    from .generator import LevelChoice, iim_step

    h = iim_step(iim_from_graph(g), LevelChoice.all_clone(g.n))
    return diameter(h.graph) == diameter(g)


__all__ = [
    "DominatingSetResult",
    "KnDomination",
    "b_of_g",
    "certify",
    "construct_dominating_set_general",
    "construct_dominating_set_kn",
    "corollary_bound",
    "diameter",
    "distance_matrix",
    "dom",
    "domination_number",
    "dual_dominating_persistence",
    "eccentricities",
    "is_dominating",
    "is_dual_dominating",
    "verify_diameter_corollary",
    "verify_diameter_theorem",
    "verify_domination_bound_general",
    "verify_domination_kn",
]
