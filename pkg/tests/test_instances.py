import random

import pytest

from forestsplit.graph import induced_subgraph
from forestsplit.instances import (complete, cycle_n, dodecahedron, generate_sparse, named, path_n,
                                   petersen, random_connected_multigraph)
from forestsplit.sparsity import find_overfull, min_beta_subgraph


def test_named_sizes():
    assert (petersen().n, petersen().m) == (10, 15)
    assert (dodecahedron().n, dodecahedron().m) == (20, 30)
    assert all(dodecahedron().degree(v) == 3 for v in range(20))
    assert named("k4") == complete(4)
    assert named("path_3") == path_n(3)
    assert named("cycle_6") == cycle_n(6)


def test_named_errors():
    with pytest.raises(ValueError):
        named("wheel")
    with pytest.raises(ValueError):
        named("cycle_2")
    with pytest.raises(ValueError):
        named("path_x")


def test_dodecahedron_girth_five():
    G = dodecahedron()
    # no triangles or 4-cycles: every set of 4 vertices spans at most 3 edges
    from itertools import combinations
    for S in combinations(range(20), 4):
        assert induced_subgraph(G, S).m <= 3


@pytest.mark.parametrize("seed", range(10))
def test_random_connected(seed):
    G = random_connected_multigraph(6, 9, random.Random(seed))
    assert G.is_connected() and G.m == 9


def test_generate_is_seeded_and_sparse():
    a = generate_sparse(7, 9, 1, 3, seed=5)
    b = generate_sparse(7, 9, 1, 3, seed=5)
    assert a.graph == b.graph is not None
    assert min_beta_subgraph(a.graph, 1, 3).value >= 0
    assert find_overfull(a.graph, 2) is None


def test_generate_gives_up():
    g = generate_sparse(4, 12, 1, 1, seed=0, budget=5)
    assert g.graph is None and g.attempts == 5
