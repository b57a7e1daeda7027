"""Undirected simple graphs stored as bitset adjacency rows.

Row ``adj[v]`` is a Python int whose bit ``u`` is set iff ``uv`` is an edge.
Vertex ids are the dense integers ``0..n-1``.  Graphs are immutable.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from itertools import combinations
from typing import Union

from .errors import EdgeListParseError, GraphError, SizeLimitError


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of set bits in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


class VertexSet:
    """Membership bitmask over the vertices ``0..n-1`` of some graph."""

    __slots__ = ("mask", "n")

    def __init__(self, mask: int, n: int):
        if mask < 0 or mask >> n:
            raise GraphError(f"vertex set {mask:#x} has members >= {n}")
        self.mask = mask
        self.n = n

    @classmethod
    def of(cls, n: int, ids: Iterable[int]) -> "VertexSet":
        mask = 0
        for v in ids:
            if not 0 <= v < n:
                raise GraphError(f"vertex {v} out of range for n={n}")
            mask |= 1 << v
        return cls(mask, n)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.mask)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and v >= 0 and bool(self.mask >> v & 1)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, VertexSet):
            return self.mask == other.mask and self.n == other.n
        if isinstance(other, (set, frozenset)):
            return set(self) == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.mask, self.n))

    def __repr__(self) -> str:
        return f"VertexSet({sorted(self)})"

    def ids(self) -> list[int]:
        return list(iter_bits(self.mask))

    def complement(self) -> "VertexSet":
        return VertexSet(((1 << self.n) - 1) & ~self.mask, self.n)


SetLike = Union[VertexSet, int, Iterable[int]]


class Graph:
    """Immutable undirected simple graph.

    Build with :meth:`from_edges` (validating) or :meth:`from_rows` (trusted
    bit rows, used by the generator's hot path).
    """

    __slots__ = ("n", "adj", "_cache")

    def __init__(self, n: int, adj: tuple[int, ...]):
        self.n = n
        self.adj = adj
        self._cache: dict = {}

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        rows = [0] * n
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) has endpoint outside 0..{n - 1}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def from_rows(cls, rows: Iterable[int]) -> "Graph":
        rows = tuple(rows)
        return cls(len(rows), rows)

    # -- basic queries ---------------------------------------------------

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.adj]

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u, row in enumerate(self.adj):
            for v in iter_bits(row >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    def closed_row(self, v: int) -> int:
        return self.adj[v] | (1 << v)

    def isolated_vertices(self) -> list[int]:
        return [v for v, row in enumerate(self.adj) if row == 0]

    def mask(self, x: SetLike) -> int:
        """Normalise a VertexSet, raw mask, or id iterable to a mask."""
        if isinstance(x, VertexSet):
            if x.n != self.n:
                raise GraphError("vertex set belongs to a graph of different order")
            return x.mask
        if isinstance(x, int):
            if x < 0 or x >> self.n:
                raise GraphError(f"mask {x:#x} has members outside the graph")
            return x
        m = 0
        for v in x:
            if not 0 <= v < self.n:
                raise GraphError(f"vertex {v} out of range for n={self.n}")
            m |= 1 << v
        return m

    def vset(self, mask: int) -> VertexSet:
        return VertexSet(mask, self.n)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count()})"


def graph_new(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    return Graph.from_edges(n, edges)


def _check_vertex(g: Graph, v: int) -> None:
    if not 0 <= v < g.n:
        raise GraphError(f"vertex {v} out of range for n={g.n}")


def closed_neighborhood(g: Graph, v: int) -> VertexSet:
    _check_vertex(g, v)
    return VertexSet(g.closed_row(v), g.n)


def anti_neighborhood(g: Graph, v: int) -> VertexSet:
    _check_vertex(g, v)
    return VertexSet(g.full & ~g.closed_row(v), g.n)


def edge_count_between(g: Graph, x: SetLike, y: SetLike) -> int:
    """Edges with one end in X and the other in Y; each edge counted once.

    With X == Y this is |E(X)|.  Overlapping X, Y are handled by counting
    every unordered edge {a, b} with (a in X and b in Y) or (b in X and a in Y).
    """
    xm, ym = g.mask(x), g.mask(y)
    ordered = sum((g.adj[a] & ym).bit_count() for a in iter_bits(xm))
    # edges inside X & Y were seen from both endpoints
    both = xm & ym
    inside = sum((g.adj[a] & both).bit_count() for a in iter_bits(both)) // 2
    return ordered - inside


def induced_subgraph(g: Graph, x: SetLike) -> tuple[Graph, list[int]]:
    """Return ``(H, relabel)`` where ``relabel[i]`` is the host id of H's vertex i."""
    xm = g.mask(x)
    keep = list(iter_bits(xm))
    index = {v: i for i, v in enumerate(keep)}
    rows = []
    for v in keep:
        row = 0
        for u in iter_bits(g.adj[v] & xm):
            row |= 1 << index[u]
        rows.append(row)
    return Graph(len(keep), tuple(rows)), keep


def is_clique(g: Graph, x: SetLike) -> bool:
    xm = g.mask(x)
    return all((g.closed_row(v) & xm) == xm for v in iter_bits(xm))


def is_independent(g: Graph, x: SetLike) -> bool:
    xm = g.mask(x)
    return all(g.adj[v] & xm == 0 for v in iter_bits(xm))


def component_of(g: Graph, v: int, within: int | None = None) -> int:
    """Mask of the connected component of v, optionally inside a vertex mask."""
    allowed = g.full if within is None else within
    seen = 1 << v
    frontier = seen
    while frontier:
        nxt = 0
        for u in iter_bits(frontier):
            nxt |= g.adj[u]
        nxt &= allowed & ~seen
        seen |= nxt
        frontier = nxt
    return seen


def components(g: Graph) -> list[int]:
    left = g.full
    out = []
    while left:
        v = (left & -left).bit_length() - 1
        comp = component_of(g, v)
        out.append(comp)
        left &= ~comp
    return out


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    return component_of(g, 0) == g.full


def disjoint_union(*graphs: Graph) -> Graph:
    rows: list[int] = []
    offset = 0
    for h in graphs:
        rows.extend(row << offset for row in h.adj)
        offset += h.n
    return Graph(offset, tuple(rows))


def complement_graph(g: Graph) -> Graph:
    return Graph(g.n, tuple(g.full & ~g.closed_row(v) for v in range(g.n)))


# -- canonical form ------------------------------------------------------

CANONICAL_LIMIT = 12


def _refined_colors(g: Graph) -> list[int]:
    """Colour refinement started from degrees; colours are canonical ints."""
    colors = g.degrees()
    while True:
        sigs = [
            (colors[v], tuple(sorted(colors[u] for u in iter_bits(g.adj[v]))))
            for v in range(g.n)
        ]
        palette = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [palette[s] for s in sigs]
        if len(palette) == len(set(colors)):
            return new
        colors = new


def canonical_key(g: Graph, limit: int = CANONICAL_LIMIT) -> bytes:
    """Isomorphism-invariant key: equal keys iff the graphs are isomorphic.

    Exact lexicographic minimum of the lower-triangular adjacency code over
    all vertex orders that respect the refined degree partition.
    """
    n = g.n
    if n > limit:
        raise SizeLimitError("canonical_key", n, limit)
    colors = _refined_colors(g)
    slot_colors = sorted(colors)
    best: list[int] | None = None
    order: list[int] = []
    code: list[int] = []

    def row_code(v: int) -> int:
        c = 0
        row = g.adj[v]
        for u in order:
            c = (c << 1) | (row >> u & 1)
        return c

    def search(k: int) -> None:
        nonlocal best
        if k == n:
            if best is None or code < best:
                best = code.copy()
            return
        want = slot_colors[k]
        used = set(order)
        cands = sorted(
            (row_code(v), v) for v in range(n) if colors[v] == want and v not in used
        )
        for c, v in cands:
            # code[:k] is fixed here, so prefixes grow with c
            if best is not None and code + [c] > best[: k + 1]:
                break
            order.append(v)
            code.append(c)
            search(k + 1)
            order.pop()
            code.pop()

    search(0)
    return repr((n, tuple(slot_colors), tuple(best or ()))).encode()


# -- text formats --------------------------------------------------------


def to_edge_list(g: Graph) -> str:
    edges = g.edges()
    lines = [f"{g.n} {len(edges)}"]
    lines += [f"{u} {v}" for u, v in edges]
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Graph:
    """Parse the ``n m`` header followed by ``m`` lines ``u v``.

    Blank lines and ``#`` comments are skipped; errors carry line numbers.
    """
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line))
    if not rows:
        raise EdgeListParseError(1, "missing 'n m' header")
    lineno, header = rows[0]
    parts = header.split()
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise EdgeListParseError(lineno, f"expected 'n m' header, got {header!r}")
    n, m = int(parts[0]), int(parts[1])
    if len(rows) - 1 != m:
        last = rows[-1][0]
        raise EdgeListParseError(last, f"header declares {m} edges, found {len(rows) - 1}")
    edges = []
    for lineno, line in rows[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListParseError(lineno, f"expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListParseError(lineno, f"non-integer vertex in {line!r}") from None
        if not (0 <= u < n and 0 <= v < n):
            raise EdgeListParseError(lineno, f"endpoint outside 0..{n - 1}")
        if u == v:
            raise EdgeListParseError(lineno, f"self-loop at {u}")
        edges.append((u, v))
    return Graph.from_edges(n, edges)


def to_dot(g: Graph, name: str = "G", levels: list[int] | None = None) -> str:
    out = [f"graph {name} {{"]
    if levels is not None:
        for lvl in sorted(set(levels)):
            members = " ".join(str(v) for v in range(g.n) if levels[v] == lvl)
            out.append(f"  {{ rank=same; {members} }}  // level {lvl}")
    else:
        out += [f"  {v};" for v in range(g.n)]
    out += [f"  {u} -- {v};" for u, v in g.edges()]
    out.append("}")
    return "\n".join(out) + "\n"


# -- small named families -------------------------------------------------


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycles need at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def empty_graph(n: int) -> Graph:
    return Graph(n, (0,) * n)


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])
