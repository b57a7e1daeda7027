"""Built-in seed graphs addressable by name."""

from __future__ import annotations

import re

from .errors import GraphError
from .graph import Graph, complete_graph, cycle_graph, disjoint_union, empty_graph, path_graph


def _k2k2k1() -> Graph:
    return disjoint_union(complete_graph(2), complete_graph(2), complete_graph(1))


_FIXED = {"2K1": lambda: empty_graph(2), "K2uK2uK1": _k2k2k1}
_FAMILIES = {"K": (complete_graph, 1, 8), "P": (path_graph, 2, 8), "C": (cycle_graph, 3, 8)}


def seed_names() -> list[str]:
    names = [f"{p}{i}" for p, (_, lo, hi) in _FAMILIES.items() for i in range(lo, hi + 1)]
    return names + list(_FIXED)


def named_seed(name: str) -> Graph:
    if name in _FIXED:
        return _FIXED[name]()
    m = re.fullmatch(r"([KPC])(\d+)", name)
    if m:
        make, lo, hi = _FAMILIES[m.group(1)]
        k = int(m.group(2))
        if lo <= k <= hi:
            return make(k)
    raise GraphError(f"unknown seed {name!r}; choose from {', '.join(seed_names())}")


def complete_order(g: Graph) -> int | None:
    """n if g is K_n, else None."""
    if all(g.degree(v) == g.n - 1 for v in range(g.n)):
        return g.n
    return None
