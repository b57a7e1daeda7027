import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from iimkit.clique import (
    TRIPLE_EXAMPLE,
    Coloring,
    NonAdjacentTriple,
    StallError,
    chromatic_number,
    clique_lower_bound,
    clique_number,
    construct_slow_clique_growth,
    extend_coloring,
    triple_example_graph,
    bipartite_example_graph,
    find_non_adjacent_triple,
    find_rainbow_pair,
    grow_triple,
    growth_violations,
    log_star,
    trivial_clique_bound,
    triple_violations,
    validate_triple,
)
from iimkit.errors import SizeLimitError, ValidationError
from iimkit.generator import LevelChoice, enumerate_iim, iim_from_graph, iim_step, sample_iim
from iimkit.graph import complete_graph, cycle_graph, empty_graph, path_graph

from conftest import graphs, iim_graphs, to_nx


def nx_chromatic(g) -> int:
    """Smallest k with a proper colouring, by brute force over assignments."""
    import itertools

    for k in range(1, g.n + 1):
        for col in itertools.product(range(k), repeat=g.n):
            if all(col[u] != col[v] for u, v in g.edges()):
                return k
    return 0


def test_clique_examples():
    assert clique_number(complete_graph(5))[0] == 5
    assert clique_number(cycle_graph(5))[0] == 2
    assert clique_number(triple_example_graph().graph)[0] == 2
    with pytest.raises(SizeLimitError):
        clique_number(empty_graph(65))


@given(graphs(1, 10))
def test_clique_against_networkx(g):
    size, wit = clique_number(g)
    assert size == max(len(c) for c in nx.find_cliques(to_nx(g)))
    assert len(wit) == size and all(g.has_edge(u, v) for u in wit for v in wit if u < v)


def test_lower_bound_formula():
    assert [clique_lower_bound(k) for k in (5, 6, 8)] == [2, 3, 4]
    assert [clique_lower_bound(k) for k in (4, 7)] == [2, 4]
    assert [trivial_clique_bound(k) for k in (0, 1, 4, 8)] == [1, 1, 3, 5]


def test_log_star():
    assert [log_star(1), log_star(2), log_star(16)] == [0, 1, 3]
    assert log_star(65536) == 4 and log_star(65537) == 5


def test_example_triple():
    h = triple_example_graph()
    # A1={v1,v3}, A2={v4,v7}, A3={v2,v5} with v_k at id k-1
    assert TRIPLE_EXAMPLE.as_lists()["parts"] == [[0, 2], [3, 6], [1, 4]]
    assert validate_triple(h.graph, TRIPLE_EXAMPLE, clique_size=2)
    found = find_non_adjacent_triple(h.graph, 2)
    assert found is not None and validate_triple(h.graph, found, 2)


def test_triple_absent_in_complete_graphs():
    for n in range(1, 8):
        assert find_non_adjacent_triple(complete_graph(n), 2) is None
    with pytest.raises(SizeLimitError):
        find_non_adjacent_triple(empty_graph(25), 2)


def brute_triple(g, s: int) -> bool:
    """Exhaustive check over all ordered triples of s-cliques."""
    import itertools

    cl = [sum(1 << v for v in c) for c in itertools.combinations(range(g.n), s)
          if all(g.has_edge(a, b) for a, b in itertools.combinations(c, 2))]
    for a1, a2, a3 in itertools.permutations(cl, 3):
        if a1 & a2 or a2 & a3 or a1 & a3:
            continue
        t = (a1, a2, a3)
        ok = True
        for i in range(3):
            nxt = t[(i + 1) % 3]
            if not any(not g.closed_row(v) & nxt for v in range(g.n) if t[i] >> v & 1):
                ok = False
                break
        if ok:
            return True
    return False


@given(graphs(3, 9))
def test_triple_search_matches_brute_force(g):
    for s in (1, 2):
        t = find_non_adjacent_triple(g, s)
        assert (t is not None) == brute_triple(g, s)
        if t is not None:
            assert not triple_violations(g, t, s)


def test_triple_validation_messages():
    h = triple_example_graph()
    bad = NonAdjacentTriple((0b101, 0b1001000, 0b10011), (2, 3, 1))
    assert "parts overlap" in triple_violations(h.graph, bad)


def _random_triple_host(rng):
    while True:
        _, h = sample_iim(complete_graph(1), int(rng.integers(3, 5)), 0.5, rng)
        t = find_non_adjacent_triple(h.graph, 2)
        if t is not None:
            return h, t


@pytest.mark.parametrize("combo", range(8))
def test_grow_triple_cases(combo):
    rng = np.random.default_rng(combo)
    h, t = _random_triple_host(rng)
    bits = int(rng.integers(0, 1 << h.n))
    for i, v in enumerate(t.witnesses):
        bits = bits | (1 << v) if combo >> i & 1 else bits & ~(1 << v)
    g = grow_triple(h, t, LevelChoice(bits, h.n))
    cloned = 3 - bin(combo).count("1")
    assert g.case == (1 if cloned >= 2 else 2 if cloned == 1 else 3)
    assert not growth_violations(g.graph.graph, t, g.triple)


def test_grow_triple_case_shapes():
    h = triple_example_graph()
    t = TRIPLE_EXAMPLE
    n = h.n
    v1, v2, v3 = t.witnesses
    g = grow_triple(h, t, LevelChoice(0, n))
    assert g.triple.parts[0] == t.parts[0] | 1 << (n + v1)
    assert g.triple.parts[1] == t.parts[1] | 1 << (n + v2)
    only_v1 = ((1 << n) - 1) & ~(1 << v1)
    g = grow_triple(h, t, LevelChoice(only_v1, n))
    assert g.case == 2 and g.triple.parts[2] == t.parts[2] | 1 << (n + v2)
    g = grow_triple(h, t, LevelChoice((1 << n) - 1, n))
    assert g.case == 3
    assert g.triple.parts == (
        t.parts[2] | 1 << (n + v2), t.parts[1] | 1 << (n + v1), t.parts[0] | 1 << (n + v3)
    )


def test_grow_triple_rejects_invalid_input():
    h = triple_example_graph()
    bad = NonAdjacentTriple((0b11, 0b1001000, 0b10010), (2, 3, 1))
    with pytest.raises(ValidationError):
        grow_triple(h, bad, LevelChoice(0, h.n))


def test_chromatic_examples():
    assert chromatic_number(complete_graph(4))[0] == 4
    assert chromatic_number(cycle_graph(5))[0] == 3
    k, col = chromatic_number(bipartite_example_graph().graph)
    assert k == 2 and col.is_proper(bipartite_example_graph().graph)
    with pytest.raises(SizeLimitError):
        chromatic_number(empty_graph(21))


@given(graphs(1, 7))
def test_chromatic_against_brute_force(g):
    k, col = chromatic_number(g)
    assert col.is_proper(g) and col.c == k
    assert k == nx_chromatic(g)


def test_rainbow_pair_examples():
    one = Coloring((0, 0), 1)
    assert find_rainbow_pair(empty_graph(2), one) == (0, 1)
    assert find_rainbow_pair(complete_graph(4), Coloring((0, 1, 2, 3), 4)) is None
    assert find_rainbow_pair(cycle_graph(4), Coloring((0, 1, 0, 1), 2)) is None
    with pytest.raises(ValidationError):
        find_rainbow_pair(complete_graph(2), Coloring((0, 0), 1))


def test_extension_examples():
    h = iim_from_graph(empty_graph(2))
    col = Coloring((0, 0), 1)
    for level in range(1, 5):
        c = LevelChoice(0, h.n)
        col, size, h = extend_coloring(h, col, c)
        assert size == level + 1 and col.is_proper(h.graph)
        assert find_rainbow_pair(h.graph, col) is not None
    for n in (2, 3):
        col0 = Coloring(tuple(range(n)), n)
        _, size, _ = extend_coloring(iim_from_graph(complete_graph(n)), col0, LevelChoice(0, n))
        assert size == n + 1
    # a single new vertex that sees no colour keeps the palette
    _, size, _ = extend_coloring(iim_from_graph(complete_graph(1)), Coloring((0,), 1), LevelChoice(1, 1))
    assert size == 1
    # every anticlone of P3 finds a free old colour
    p3 = iim_from_graph(path_graph(3))
    _, size, _ = extend_coloring(p3, Coloring((0, 1, 0), 2), LevelChoice(0b111, 3))
    assert size == 2


@given(iim_graphs(max_n0=3, max_steps=2), st.data())
def test_chromatic_grows_by_at_most_one(h, data):
    if h.n > 10:
        return
    c = LevelChoice(data.draw(st.integers(0, (1 << h.n) - 1)), h.n)
    before = chromatic_number(h.graph)[0]
    assert chromatic_number(iim_step(h, c).graph)[0] <= before + 1


def test_min_extension_is_not_optimal():
    h = bipartite_example_graph()
    col = Coloring((0, 0), 1)
    cur = iim_from_graph(empty_graph(2))
    for c in h.choices:
        col, size, cur = extend_coloring(cur, col, c)
    assert size == 3 and chromatic_number(h.graph)[0] == 2


def test_slow_growth_examples():
    assert construct_slow_clique_growth(0).omega == [1]
    s3 = construct_slow_clique_growth(3)
    assert clique_number(s3.graph.graph)[0] <= 3
    s4 = construct_slow_clique_growth(4)
    w4 = clique_number(s4.graph.graph)[0]
    exhaustive_min = min(clique_number(h.graph)[0] for _, h in enumerate_iim(complete_graph(1), 4))
    assert w4 <= 4 and w4 == exhaustive_min == 3
    assert all(b - a <= 1 for a, b in zip(s4.omega, s4.omega[1:]))
    with pytest.raises(SizeLimitError):
        construct_slow_clique_growth(9)


def test_slow_growth_strict_mode_reports_stall():
    with pytest.raises(StallError) as err:
        construct_slow_clique_growth(3, strict=True)
    assert err.value.level == 0


@pytest.mark.slow
def test_slow_growth_eight_levels():
    s = construct_slow_clique_growth(8)
    assert s.omega == [1, 1, 2, 3, 3, 4, 5, 6, 7]
    assert all(b - a <= 1 for a, b in zip(s.omega, s.omega[1:]))
