import itertools

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from iimkit.errors import EdgeListParseError, GraphError, SizeLimitError
from iimkit.graph import (
    Graph,
    VertexSet,
    anti_neighborhood,
    canonical_key,
    closed_neighborhood,
    complement_graph,
    complete_graph,
    components,
    cycle_graph,
    disjoint_union,
    edge_count_between,
    empty_graph,
    graph_new,
    induced_subgraph,
    is_clique,
    is_connected,
    is_independent,
    parse_edge_list,
    path_graph,
    star_graph,
    to_dot,
    to_edge_list,
)

from conftest import graphs, iim_graphs, to_nx

P4 = path_graph(4)


def test_graph_new_examples():
    assert graph_new(2, [(0, 1)]) == complete_graph(2)
    assert graph_new(4, [(0, 1), (1, 2), (2, 3)]) == P4
    k1 = graph_new(1, [])
    assert k1.n == 1 and k1.edge_count() == 0


@pytest.mark.parametrize("edges", [[(0, 2)], [(-1, 0)]])
def test_graph_new_rejects_out_of_range(edges):
    with pytest.raises(GraphError):
        graph_new(2, edges)


def test_graph_new_rejects_self_loop():
    with pytest.raises(GraphError, match="self-loop"):
        graph_new(3, [(1, 1)])


def test_neighborhood_examples():
    assert closed_neighborhood(complete_graph(2), 0).ids() == [0, 1]
    assert closed_neighborhood(complete_graph(1), 0).ids() == [0]
    assert closed_neighborhood(P4, 1).ids() == [0, 1, 2]
    assert anti_neighborhood(complete_graph(2), 0).ids() == []
    assert anti_neighborhood(P4, 0).ids() == [2, 3]
    assert anti_neighborhood(complete_graph(1), 0).ids() == []


def test_edge_count_between_examples():
    assert edge_count_between(complete_graph(2), [0], [1]) == 1
    assert edge_count_between(P4, [0, 1], [2, 3]) == 1
    c4 = cycle_graph(4)
    assert edge_count_between(c4, c4.full, c4.full) == 4


def test_induced_subgraph_examples():
    sub, keep = induced_subgraph(P4, [0, 1, 2])
    assert sub == path_graph(3) and keep == [0, 1, 2]
    for trio in itertools.combinations(range(4), 3):
        assert induced_subgraph(complete_graph(4), trio)[0] == complete_graph(3)
    empty, keep = induced_subgraph(P4, [])
    assert empty.n == 0 and keep == []


def test_predicates():
    assert is_clique(complete_graph(3), [0, 1, 2])
    assert not is_clique(P4, [0, 1, 2])
    assert is_independent(P4, [0, 2])
    assert not is_connected(disjoint_union(complete_graph(2), complete_graph(2), complete_graph(1)))
    assert is_connected(Graph(0, ()))
    assert is_connected(P4)


def test_canonical_key_examples():
    relabeled = graph_new(4, [(2, 0), (0, 3), (3, 1)])
    assert canonical_key(P4) == canonical_key(relabeled)
    assert canonical_key(P4) != canonical_key(star_graph(3))
    assert canonical_key(complete_graph(3)) == canonical_key(cycle_graph(3))
    with pytest.raises(SizeLimitError):
        canonical_key(empty_graph(13))


@given(graphs(1, 7), graphs(1, 7))
def test_canonical_key_matches_isomorphism(a, b):
    assert (canonical_key(a) == canonical_key(b)) == nx.is_isomorphic(to_nx(a), to_nx(b))


@given(graphs(), st.data())
def test_neighborhood_partition(g, data):
    v = data.draw(st.integers(0, g.n - 1))
    n, a = closed_neighborhood(g, v), anti_neighborhood(g, v)
    assert n.mask & a.mask == 0
    assert n.mask | a.mask == g.full


@given(graphs(), st.data())
def test_cut_identity(g, data):
    x = data.draw(st.integers(0, g.full))
    xc = g.full & ~x
    assert (
        edge_count_between(g, x, xc) + edge_count_between(g, x, x) + edge_count_between(g, xc, xc)
        == g.edge_count()
    )


@given(graphs(1, 8))
def test_induced_on_everything_is_isomorphic(g):
    sub, _ = induced_subgraph(g, g.full)
    assert canonical_key(sub) == canonical_key(g)


@given(graphs(1, 9))
def test_adjacency_invariants(g):
    for v in range(g.n):
        assert not g.adj[v] >> v & 1
        for u in range(g.n):
            assert g.has_edge(u, v) == g.has_edge(v, u)


@given(graphs(1, 9))
def test_components_against_networkx(g):
    ours = sorted(sorted(VertexSet(c, g.n)) for c in components(g))
    theirs = sorted(sorted(c) for c in nx.connected_components(to_nx(g)))
    assert ours == theirs
    assert is_connected(g) == nx.is_connected(to_nx(g))


@given(graphs(1, 8))
def test_complement_involution(g):
    assert complement_graph(complement_graph(g)) == g
    assert complement_graph(g).edge_count() + g.edge_count() == g.n * (g.n - 1) // 2


@given(iim_graphs())
def test_levels_are_independent(h):
    for i in range(1, h.top_level + 1):
        assert is_independent(h.graph, h.level_mask(i))


@given(graphs(1, 9))
def test_edge_list_round_trip(g):
    assert parse_edge_list(to_edge_list(g)) == g


def test_parse_edge_list_comments_and_errors():
    g = parse_edge_list("# path\n3 2\n0 1\n\n1 2  # tail\n")
    assert g == path_graph(3)
    with pytest.raises(EdgeListParseError, match="line 3"):
        parse_edge_list("3 2\n0 1\n0 x\n")
    with pytest.raises(EdgeListParseError):
        parse_edge_list("3 2\n0 1\n")
    with pytest.raises(EdgeListParseError, match="line 2"):
        parse_edge_list("2 1\n0 5\n")


def test_dot_export():
    text = to_dot(P4, "P4", [0, 0, 1, 1])
    assert text.startswith("graph P4 {") and "0 -- 1" in text
