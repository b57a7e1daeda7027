"""The IIM growth step, genealogy bookkeeping, enumeration and sampling.

Vertex layout: level 0 holds ids ``0..n0-1``; level ``i >= 1`` holds ids
``n0*2**(i-1) .. n0*2**i - 1`` and the copy of vertex ``v`` made at level
``i`` has id ``n0*2**(i-1) + v``.
"""

from __future__ import annotations

import enum
import json
import re
from collections.abc import Iterator
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceededError, ChoiceLengthError, IIMError, PreconditionError
from .graph import Graph, VertexSet, iter_bits

DEFAULT_BUDGET_BITS = 20


class CopyKind(enum.Enum):
    ORIGINAL = "original"
    CLONE = "clone"
    ANTICLONE = "anticlone"


@dataclass(frozen=True)
class LevelChoice:
    """Clone/anticlone bits for one step; bit ``v`` set means anticlone ``v``."""

    bits: int
    length: int

    def __post_init__(self):
        if self.length < 0 or self.bits < 0 or self.bits >> self.length:
            raise ChoiceLengthError(f"choice bits {self.bits:#x} do not fit length {self.length}")

    @classmethod
    def from_list(cls, flags) -> "LevelChoice":
        bits = 0
        for v, f in enumerate(flags):
            if f:
                bits |= 1 << v
        return cls(bits, len(flags))

    @classmethod
    def all_clone(cls, length: int) -> "LevelChoice":
        return cls(0, length)

    @classmethod
    def all_anticlone(cls, length: int) -> "LevelChoice":
        return cls((1 << length) - 1, length)

    def is_anticlone(self, v: int) -> bool:
        return bool(self.bits >> v & 1)

    def to_list(self) -> list[int]:
        return [self.bits >> v & 1 for v in range(self.length)]


_HEX_ITEM = re.compile(r"^L(\d+)=0x([0-9a-fA-F]+)$")


@dataclass(frozen=True)
class ChoiceSequence:
    """Ordered per-level choices; entry ``i`` covers ``n0 * 2**i`` vertices."""

    levels: tuple[LevelChoice, ...] = ()

    def __len__(self) -> int:
        return len(self.levels)

    def __iter__(self):
        return iter(self.levels)

    def check(self, n0: int) -> None:
        for i, c in enumerate(self.levels):
            if c.length != n0 << i:
                raise ChoiceLengthError(
                    f"level {i + 1} choice has length {c.length}, expected {n0 << i}"
                )

    def to_hex(self) -> str:
        return ";".join(f"L{i + 1}={c.bits:#x}" for i, c in enumerate(self.levels))

    @classmethod
    def from_hex(cls, text: str, n0: int) -> "ChoiceSequence":
        text = text.strip()
        if not text:
            return cls(())
        levels = []
        for i, item in enumerate(text.split(";"), start=1):
            m = _HEX_ITEM.match(item.strip())
            if not m:
                raise ChoiceLengthError(f"bad choice item {item!r}; expected L<i>=0x<hex>")
            if int(m.group(1)) != i:
                raise ChoiceLengthError(f"choice items out of order at {item!r}")
            levels.append(LevelChoice(int(m.group(2), 16), n0 << (i - 1)))
        return cls(tuple(levels))

    @classmethod
    def uniform(cls, n0: int, steps: int, anticlone: bool) -> "ChoiceSequence":
        make = LevelChoice.all_anticlone if anticlone else LevelChoice.all_clone
        return cls(tuple(make(n0 << i) for i in range(steps)))


@dataclass(frozen=True)
class IIMGraph:
    """A graph grown by IIM steps together with its genealogy."""

    graph: Graph
    n0: int
    levels: tuple[int, ...]
    kinds: tuple[CopyKind, ...]
    precopy: tuple[int | None, ...]
    choices: ChoiceSequence = field(default_factory=ChoiceSequence)

    @property
    def top_level(self) -> int:
        return len(self.choices)

    @property
    def n(self) -> int:
        return self.graph.n

    def level_start(self, i: int) -> int:
        return 0 if i == 0 else self.n0 << (i - 1)

    def level_range(self, i: int) -> range:
        if i == 0:
            return range(self.n0)
        return range(self.n0 << (i - 1), self.n0 << i)

    def level_mask(self, i: int) -> int:
        r = self.level_range(i)
        return ((1 << r.stop) - 1) & ~((1 << r.start) - 1)

    def prefix_mask(self, i: int) -> int:
        """Vertices of H_i (levels 0..i)."""
        return (1 << (self.n0 << i)) - 1

    def copy_at(self, v: int, level: int) -> int:
        """Id of the copy of ``v`` created at ``level``."""
        if not 1 <= level <= self.top_level or self.levels[v] >= level:
            raise IIMError(f"vertex {v} has no copy at level {level}")
        return (self.n0 << (level - 1)) + v

    def prefix(self, i: int) -> "IIMGraph":
        """The IIM graph H_i made of levels 0..i."""
        size = self.n0 << i
        mask = (1 << size) - 1
        return IIMGraph(
            Graph(size, tuple(row & mask for row in self.graph.adj[:size])),
            self.n0,
            self.levels[:size],
            self.kinds[:size],
            self.precopy[:size],
            ChoiceSequence(self.choices.levels[:i]),
        )

    def to_json(self) -> dict:
        return {
            "n0": self.n0,
            "choices": self.choices.to_hex(),
            "levels": list(self.levels),
            "genealogy": [
                {"kind": k.value, "precopy": p} for k, p in zip(self.kinds, self.precopy)
            ],
            "edges": [list(e) for e in self.graph.edges()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "IIMGraph":
        levels = tuple(data["levels"])
        n = len(levels)
        g = Graph.from_edges(n, [tuple(e) for e in data["edges"]])
        kinds = tuple(CopyKind(x["kind"]) for x in data["genealogy"])
        precopy = tuple(x["precopy"] for x in data["genealogy"])
        choices = ChoiceSequence.from_hex(data.get("choices", ""), data["n0"])
        return cls(g, data["n0"], levels, kinds, precopy, choices)

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def iim_from_graph(g0: Graph) -> IIMGraph:
    n0 = g0.n
    return IIMGraph(g0, n0, (0,) * n0, (CopyKind.ORIGINAL,) * n0, (None,) * n0)


def _step_rows(rows: tuple[int, ...], n: int, bits: int) -> tuple[int, ...]:
    """New adjacency rows after one step with anticlone mask ``bits``.

    Old u gains the copy of v iff (v in N[u]) xor (v anticloned).
    """
    full = (1 << n) - 1
    old = [row | ((((row | (1 << u)) ^ bits) & full) << n) for u, row in enumerate(rows)]
    new = [
        (((rows[v] | (1 << v)) ^ (full if bits >> v & 1 else 0)) & full) for v in range(n)
    ]
    return tuple(old + new)


def iim_step(h: IIMGraph, c: LevelChoice) -> IIMGraph:
    n = h.n
    if c.length != n:
        raise ChoiceLengthError(f"choice covers {c.length} vertices, graph has {n}")
    rows = _step_rows(h.graph.adj, n, c.bits)
    lvl = h.top_level + 1
    kinds = tuple(
        CopyKind.ANTICLONE if c.bits >> v & 1 else CopyKind.CLONE for v in range(n)
    )
    return IIMGraph(
        Graph(2 * n, rows),
        h.n0,
        h.levels + (lvl,) * n,
        h.kinds + kinds,
        h.precopy + tuple(range(n)),
        ChoiceSequence(h.choices.levels + (c,)),
    )


def iim_generate(g0: Graph, seq: ChoiceSequence) -> IIMGraph:
    seq.check(g0.n)
    h = iim_from_graph(g0)
    for c in seq:
        h = iim_step(h, c)
    return h


def sequence_bits(n0: int, steps: int) -> int:
    return n0 * ((1 << steps) - 1)


def enumeration_size(n0: int, steps: int) -> int:
    return 1 << sequence_bits(n0, steps)


def enumerate_iim(
    g0: Graph,
    steps: int,
    budget_bits: int = DEFAULT_BUDGET_BITS,
    start: int = 0,
    stop: int | None = None,
) -> Iterator[tuple[ChoiceSequence, IIMGraph]]:
    """Yield every choice sequence with its graph, level 1 most significant.

    ``start``/``stop`` select a contiguous slice of the index space so the
    work can be split across independent workers.
    """
    n0 = g0.n
    bits = sequence_bits(n0, steps)
    if bits > budget_bits:
        raise BudgetExceededError(bits, budget_bits)
    total = 1 << bits
    stop = total if stop is None else min(stop, total)
    if start >= stop:
        return
    widths = [n0 << i for i in range(steps)]
    shifts = []
    acc = bits
    for w in widths:
        acc -= w
        shifts.append(acc)

    stack: list[IIMGraph] = [iim_from_graph(g0)]
    digits: list[int] = []
    for t in range(start, stop):
        cur = [(t >> s) & ((1 << w) - 1) for s, w in zip(shifts, widths)]
        keep = 0
        while keep < len(digits) and digits[keep] == cur[keep]:
            keep += 1
        del stack[keep + 1 :]
        del digits[keep:]
        for i in range(keep, steps):
            stack.append(iim_step(stack[-1], LevelChoice(cur[i], widths[i])))
            digits.append(cur[i])
        h = stack[-1]
        yield h.choices, h


def sequence_index(seq: ChoiceSequence) -> int:
    """Position of ``seq`` in :func:`enumerate_iim` order."""
    t = 0
    for c in seq:
        t = (t << c.length) | c.bits
    return t


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 stream; bit-identical across platforms for a given seed."""
    return np.random.Generator(np.random.PCG64(seed))


def sample_choices(n0: int, steps: int, p: float, rng: np.random.Generator) -> ChoiceSequence:
    if not 0.0 <= p <= 1.0:
        raise PreconditionError(f"clone probability {p} outside [0, 1]")
    levels = []
    for i in range(steps):
        length = n0 << i
        draws = rng.random(length) < (1.0 - p)
        bits = 0
        for v in np.flatnonzero(draws):
            bits |= 1 << int(v)
        levels.append(LevelChoice(bits, length))
    return ChoiceSequence(tuple(levels))


def sample_iim(
    g0: Graph, steps: int, p: float = 0.5, seed: int | np.random.Generator = 0
) -> tuple[ChoiceSequence, IIMGraph]:
    """Clone each vertex with probability ``p``, independently, per step."""
    rng = seed if isinstance(seed, np.random.Generator) else make_rng(seed)
    seq = sample_choices(g0.n, steps, p, rng)
    return seq, iim_generate(g0, seq)


# -- genealogy queries ----------------------------------------------------


def clone_set(h: IIMGraph, v: int) -> VertexSet:
    """S_c(v): v together with every direct clone of v."""
    mask = 1 << v
    for lvl in range(h.levels[v] + 1, h.top_level + 1):
        c = h.copy_at(v, lvl)
        if h.kinds[c] is CopyKind.CLONE:
            mask |= 1 << c
    return VertexSet(mask, h.n)


def anticlone_set(h: IIMGraph, v: int) -> VertexSet:
    """S_a(v): every direct anticlone of v."""
    mask = 0
    for lvl in range(h.levels[v] + 1, h.top_level + 1):
        c = h.copy_at(v, lvl)
        if h.kinds[c] is CopyKind.ANTICLONE:
            mask |= 1 << c
    return VertexSet(mask, h.n)


def genealogy_path(h: IIMGraph, v: int, ancestor: int) -> list[int] | None:
    """Vertices from ``v`` back to ``ancestor`` (inclusive), or None."""
    path = [v]
    while v != ancestor:
        p = h.precopy[v]
        if p is None:
            return None
        v = p
        path.append(v)
    return path


def anticlone_parity(h: IIMGraph, v: int, ancestor: int) -> int | None:
    """Anticlone links between ``ancestor`` and ``v`` mod 2; None if unrelated."""
    path = genealogy_path(h, v, ancestor)
    if path is None:
        return None
    return sum(h.kinds[u] is CopyKind.ANTICLONE for u in path[:-1]) & 1


def first_anticlone_level(h: IIMGraph) -> int | None:
    for lvl in range(1, h.top_level + 1):
        if h.choices.levels[lvl - 1].bits:
            return lvl
    return None


def a_l_count(h: IIMGraph) -> tuple[int, int]:
    """(first level with an anticlone, how many level-0 vertices it anticlones)."""
    lvl = first_anticlone_level(h)
    if lvl is None:
        raise PreconditionError("graph has no anticlone")
    bits = h.choices.levels[lvl - 1].bits
    return lvl, (bits & ((1 << h.n0) - 1)).bit_count()


def descendants(h: IIMGraph, v: int) -> list[int]:
    """All descendants of v (v excluded), ascending id."""
    out = []
    frontier = [v]
    while frontier:
        u = frontier.pop()
        for lvl in range(h.levels[u] + 1, h.top_level + 1):
            c = h.copy_at(u, lvl)
            out.append(c)
            frontier.append(c)
    return sorted(out)


def check_genealogy(h: IIMGraph) -> None:
    """Re-derive every invariant of the model from the stored data; raise on failure."""
    g = h.graph
    n0 = h.n0
    if g.n != n0 << h.top_level:
        raise IIMError(f"doubling law broken: {g.n} != {n0} * 2^{h.top_level}")
    for lvl in range(1, h.top_level + 1):
        r = h.level_range(lvl)
        lm = h.level_mask(lvl)
        prev = h.prefix_mask(lvl - 1)
        for w in r:
            if g.adj[w] & lm:
                raise IIMError(f"level {lvl} is not independent at {w}")
            p = h.precopy[w]
            if p is None or h.levels[p] >= lvl or w != r.start + p:
                raise IIMError(f"bad precopy for {w}")
            closed = (g.adj[p] | (1 << p)) & prev
            want = closed if h.kinds[w] is CopyKind.CLONE else prev & ~closed
            if h.kinds[w] is CopyKind.ORIGINAL:
                raise IIMError(f"vertex {w} above level 0 marked original")
            if g.adj[w] & prev != want:
                raise IIMError(f"neighbourhood law broken at {w}")
    for v in range(n0):
        if h.kinds[v] is not CopyKind.ORIGINAL or h.precopy[v] is not None:
            raise IIMError(f"level-0 vertex {v} has genealogy")
