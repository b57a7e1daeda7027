"""Theorem checks over enumerated or sampled IIM graphs, with optional worker pools."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .clique import (
    chromatic_number,
    clique_lower_bound,
    clique_number,
    extend_coloring,
    find_non_adjacent_triple,
    find_rainbow_pair,
    trivial_clique_bound,
)
from .distance import (
    corollary_bound,
    diameter,
    verify_diameter_corollary,
    verify_diameter_theorem,
    verify_domination_bound_general,
    verify_domination_kn,
)
from .errors import BudgetExceededError, PreconditionError, SizeLimitError
from .generator import (
    DEFAULT_BUDGET_BITS,
    IIMGraph,
    enumerate_iim,
    iim_from_graph,
    make_rng,
    sample_iim,
    sequence_bits,
)
from .graph import Graph
from .hamiltonicity import (
    build_cycle_from_partition,
    find_ham_partition,
    hamiltonian_cycle,
    is_hamiltonian_cycle,
)
from .reports import VerificationReport
from .seeds import complete_order, named_seed
from .spectral import check_expander_mixing, spectral_gap, spectral_gap_info

GAP_BOUND = Fraction(1, 15)
GAP_TOL = 1e-9
MIXING_TOL = 1e-6
BUDGET_ENV = "IIMKIT_BUDGET"

THEOREMS = (
    "spectral-gap",
    "diameter",
    "domination-kn",
    "domination-general",
    "clique-bound",
    "triple-exists",
    "coloring-extension",
    "mixing-lemma",
    "ham-partition",
)


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_BUDGET_BITS


@dataclass
class Options:
    budget: int = field(default_factory=default_budget)
    samples: int = 0
    """0 means exhaustive enumeration."""
    rng: int | None = None
    p: float = 0.5
    subsets: int = 100
    max_k: int | None = None


# -- per-graph checks -------------------------------------------------------------
# Each takes (report, sequence hex, graph, index, options, context).


def _gap(rep, seq, h: IIMGraph, idx, opt, ctx):
    r = spectral_gap_info(h.graph)
    if r.flagged:
        rep.count("isolated_removed")
    rep.checked += 1
    rep.observe(r.gap, seq)
    if r.gap < float(GAP_BOUND) - GAP_TOL:
        rep.violate(seq, gap=r.gap, isolated=list(r.isolated))


def _diameter(rep, seq, h, idx, opt, ctx):
    d = diameter(h.graph)
    if math.isinf(d):
        rep.skipped += 1
        return
    rep.checked += 1
    rep.observe(d, seq)
    if d > ctx["bound"]:
        rep.violate(seq, diameter=d)


def _clique(rep, seq, h, idx, opt, ctx):
    w, _ = clique_number(h.graph, limit=max(64, h.n))
    rep.checked += 1
    rep.observe(w, seq)
    if w < ctx["formula"]:
        rep.violate(seq, omega=w, bound="formula")
    if w < ctx["trivial"]:
        rep.violate(seq, omega=w, bound="trivial")


def _triple(rep, seq, h, idx, opt, ctx):
    t = find_non_adjacent_triple(h.graph, 2, limit=max(24, h.n))
    rep.checked += 1
    if t is None:
        rep.violate(seq, triple=None)


def _coloring(rep, seq, h, idx, opt, ctx):
    cur = iim_from_graph(ctx["g0"])
    col = ctx["col0"]
    for c in h.choices:
        pair = find_rainbow_pair(cur.graph, col)
        before = col.c
        col, size, cur = extend_coloring(cur, col, c)
        if pair is not None:
            if size != before + 1:
                rep.violate(seq, level=cur.top_level, palette=size, expected=before + 1)
            if find_rainbow_pair(cur.graph, col) is None:
                rep.violate(seq, level=cur.top_level, rainbow_pair=None)
        elif size > before + 1:
            rep.violate(seq, level=cur.top_level, palette=size)
    rep.checked += 1
    rep.observe(col.c, seq)


def _mixing(rep, seq, h, idx, opt, ctx):
    g = h.graph
    if g.isolated_vertices():
        rep.skipped += 1
        return
    lam = spectral_gap(g)
    rng = np.random.Generator(np.random.PCG64([ctx["seed"], idx]))
    worst = None
    for _ in range(opt.subsets):
        x = 0
        for v in np.flatnonzero(rng.random(g.n) < 0.5):
            x |= 1 << int(v)
        r = check_expander_mixing(g, x, lam)
        worst = r if worst is None else min(worst, r)
        if r < -MIXING_TOL:
            rep.violate(seq, subset=x, residual=r)
    rep.checked += 1
    rep.observe(worst, seq)


def _ham(rep, seq, h, idx, opt, ctx):
    try:
        p = find_ham_partition(h, max_k=opt.max_k)
    except SizeLimitError:
        rep.skipped += 1
        return
    rep.checked += 1
    if p is None:
        return
    rep.count("partitions_found")
    cyc = build_cycle_from_partition(h, p)
    if not is_hamiltonian_cycle(h.graph, cyc):
        rep.violate(seq, cycle=cyc)
    if h.n <= 20 and hamiltonian_cycle(h.graph) is None:
        rep.violate(seq, exact_solver="no cycle found")


_PER_GRAPH = {
    "diameter": _diameter,
    "spectral-gap": _gap,
    "clique-bound": _clique,
    "triple-exists": _triple,
    "coloring-extension": _coloring,
    "mixing-lemma": _mixing,
    "ham-partition": _ham,
}


def _setup(theorem: str, g0: Graph, seed_name: str, steps: int, opt: Options):
    ctx: dict = {"g0": g0, "seed": opt.rng or 0}
    rep = VerificationReport(theorem, seed_name, steps)
    if theorem == "diameter":
        ctx["bound"] = rep.bound = corollary_bound(g0)
        rep.theorem_id = "diameter-corollary"
    elif theorem == "spectral-gap":
        rep.bound = str(GAP_BOUND)
        rep.extreme = "min"
    elif theorem == "clique-bound":
        if complete_order(g0) != 1:
            raise PreconditionError("the clique lower bound is stated for the K1 seed")
        ctx["formula"] = clique_lower_bound(steps)
        ctx["trivial"] = trivial_clique_bound(steps)
        rep.bound = max(ctx["formula"], ctx["trivial"])
        rep.params = {"formula": ctx["formula"], "trivial": ctx["trivial"]}
        rep.extreme = "min"
    elif theorem == "triple-exists":
        if complete_order(g0) != 1 or steps < 4:
            raise PreconditionError("triples of K2's are guaranteed from the K1 seed at steps >= 4")
        rep.bound = "triple of K2 parts"
    elif theorem == "coloring-extension":
        chi, col = chromatic_number(g0)
        ctx["col0"] = col
        rep.bound = f"palette {chi} + levels when a rainbow pair exists"
        rep.params = {"start_colors": chi}
    elif theorem == "mixing-lemma":
        rep.bound = f"residual >= -{MIXING_TOL}"
        rep.extreme = "min"
        rep.params = {"subsets": opt.subsets, "rng": ctx["seed"]}
    elif theorem == "ham-partition":
        rep.bound = "partition implies Hamiltonian"
    return rep, ctx


def run_chunk(theorem: str, seed_name: str, steps: int, opt: Options, start: int, stop: int | None,
              g0: Graph | None = None) -> VerificationReport:
    """Exhaustive check over one contiguous slice of the sequence index space."""
    g0 = named_seed(seed_name) if g0 is None else g0
    if theorem == "diameter" and steps == 1:
        return verify_diameter_theorem(g0, 1, opt.budget, seed_name, start, stop)
    if theorem == "domination-kn":
        n = complete_order(g0)
        if n is None:
            raise PreconditionError("domination-kn needs a complete seed")
        return verify_domination_kn(n, steps, opt.budget, start, stop)
    if theorem == "domination-general":
        return verify_domination_bound_general(g0, steps, opt.budget, seed_name, start, stop)
    rep, ctx = _setup(theorem, g0, seed_name, steps, opt)
    check = _PER_GRAPH[theorem]
    for idx, (seq, h) in enumerate(enumerate_iim(g0, steps, opt.budget, start, stop), start=start):
        check(rep, seq.to_hex(), h, idx, opt, ctx)
    return rep.finish()


def run_sampled(theorem: str, seed_name: str, steps: int, opt: Options,
                g0: Graph | None = None) -> VerificationReport:
    if opt.rng is None:
        raise PreconditionError("sampled verification needs an explicit rng seed")
    g0 = named_seed(seed_name) if g0 is None else g0
    if theorem == "diameter":
        return verify_diameter_corollary(g0, steps, opt.samples, opt.p, opt.rng, seed_name)
    if theorem not in _PER_GRAPH:
        raise PreconditionError(f"{theorem} supports exhaustive mode only")
    rep, ctx = _setup(theorem, g0, seed_name, steps, opt)
    rep.params.update({"samples": opt.samples, "p": opt.p, "rng": opt.rng})
    rng = make_rng(opt.rng)
    check = _PER_GRAPH[theorem]
    for idx in range(opt.samples):
        seq, h = sample_iim(g0, steps, opt.p, rng)
        check(rep, seq.to_hex(), h, idx, opt, ctx)
    return rep.finish()


def _chunk_call(args):
    return run_chunk(*args)


def verify(theorem: str, seed_name: str, steps: int, opt: Options | None = None,
           workers: int = 1) -> VerificationReport:
    """Run one theorem check; results do not depend on ``workers``."""
    opt = opt or Options()
    if theorem not in THEOREMS:
        raise PreconditionError(f"unknown theorem id {theorem!r}")
    g0 = named_seed(seed_name)
    if opt.samples:
        return run_sampled(theorem, seed_name, steps, opt, g0)
    bits = sequence_bits(g0.n, steps)
    if bits > opt.budget:
        raise BudgetExceededError(bits, opt.budget)
    total = 1 << bits
    if workers <= 1 or total < 2 * workers:
        return run_chunk(theorem, seed_name, steps, opt, 0, None, g0)
    parts = workers * 4
    bounds = [total * i // parts for i in range(parts + 1)]
    jobs = [(theorem, seed_name, steps, opt, a, b) for a, b in zip(bounds, bounds[1:]) if a < b]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        reps = list(pool.map(_chunk_call, jobs))
    out = reps[0]
    for r in reps[1:]:
        out = out.merge(r)
    return out
