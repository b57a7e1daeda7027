import itertools

import numpy as np
import pytest
from hypothesis import given

from iimkit.errors import PreconditionError, SizeLimitError
from iimkit.generator import ChoiceSequence, LevelChoice, iim_generate
from iimkit.graph import Graph, complete_graph, cycle_graph, empty_graph, graph_new, path_graph
from iimkit.hamiltonicity import (
    HamPartition,
    build_cycle_from_partition,
    find_ham_partition,
    hamiltonian_cycle,
    hamiltonian_path,
    is_hamiltonian_cycle,
    partition_violations,
    planted_partition_instance,
)

from conftest import graphs

# C3 on {0,1,2}, independent {3,4,5}, connector edge 1-4
K1_SEED = graph_new(6, [(0, 1), (1, 2), (0, 2), (1, 4)])


def k1_instance():
    return iim_generate(K1_SEED, ChoiceSequence((LevelChoice(0b111000, 6),)))


def brute_hamiltonian(g: Graph) -> bool:
    if g.n < 3:
        return False
    for rest in itertools.permutations(range(1, g.n)):
        cyc = (0, *rest)
        if all(g.has_edge(a, b) for a, b in zip(cyc, cyc[1:] + (0,))):
            return True
    return False


def test_cycle_examples():
    c = hamiltonian_cycle(cycle_graph(5))
    assert c is not None and is_hamiltonian_cycle(cycle_graph(5), c)
    assert hamiltonian_cycle(path_graph(4)) is None
    k4e = graph_new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])
    assert is_hamiltonian_cycle(k4e, hamiltonian_cycle(k4e))
    with pytest.raises(SizeLimitError):
        hamiltonian_cycle(complete_graph(25))


@given(graphs(1, 8))
def test_cycle_solver_matches_brute_force(g):
    c = hamiltonian_cycle(g)
    assert (c is not None) == brute_hamiltonian(g)
    if c is not None:
        assert is_hamiltonian_cycle(g, c)


def test_is_hamiltonian_cycle_rejects_bad_sequences():
    c5 = cycle_graph(5)
    assert not is_hamiltonian_cycle(c5, [0, 1, 2, 3])
    assert not is_hamiltonian_cycle(c5, [0, 2, 1, 3, 4])
    assert not is_hamiltonian_cycle(c5, [0, 1, 2, 3, 3])


def test_hamiltonian_path_within_block():
    p = hamiltonian_path(path_graph(5), 0, 4, 0b11111)
    assert p == [0, 1, 2, 3, 4]
    assert hamiltonian_path(path_graph(5), 1, 4, 0b11111) is None


def test_partition_examples():
    h = k1_instance()
    p = find_ham_partition(h)
    assert p is not None and p.k == 1
    assert not partition_violations(h, p)
    cyc = build_cycle_from_partition(h, p)
    assert is_hamiltonian_cycle(h.graph, cyc)
    assert hamiltonian_cycle(h.graph) is not None
    g0 = cycle_graph(5)
    assert find_ham_partition(iim_generate(g0, ChoiceSequence.uniform(5, 1, False))) is None
    assert find_ham_partition(iim_generate(g0, ChoiceSequence.uniform(5, 1, True))) is None


def test_partition_needs_three_in_each_a_block():
    h = k1_instance()
    p = find_ham_partition(h)
    bad = HamPartition(p.c_blocks, (0b011000,), p.v, p.w, p.u, p.x)
    assert partition_violations(h, bad)
    with pytest.raises(PreconditionError):
        build_cycle_from_partition(h, bad)


def test_partition_size_limit():
    h = iim_generate(empty_graph(21), ChoiceSequence((LevelChoice(0, 21),)))
    with pytest.raises(SizeLimitError):
        find_ham_partition(h)


@pytest.mark.parametrize("k", [1, 2])
def test_planted_instances_build_cycles(k):
    rng = np.random.default_rng(11 + k)
    for _ in range(15):
        h = planted_partition_instance(rng, k=k)
        p = find_ham_partition(h, max_k=k)
        assert p is not None
        cyc = build_cycle_from_partition(h, p)
        assert is_hamiltonian_cycle(h.graph, cyc)
        if h.n <= 20:
            assert hamiltonian_cycle(h.graph) is not None


def test_partition_json():
    d = find_ham_partition(k1_instance()).to_json()
    assert d["C"] == [[0, 1, 2]] and d["A"] == [[3, 4, 5]]
